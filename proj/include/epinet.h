#ifndef EPINET_H
#define EPINET_H

/* C API for the epitope classifier library.
 *
 * Conventions:
 *   - Every fallible call returns epn_status; on failure a human-readable
 *     message is available from epn_last_error() (thread-local).
 *   - Objects are opaque handles created into an out-parameter and
 *     released with the matching *_free function (free of NULL is a no-op).
 *   - const char* returns from result handles point into the handle and
 *     stay valid until the next call on that handle or its free.
 *   - Scale tables must be loaded once via epn_scales_load() before any
 *     descriptor computation, dataset featurization, training, evaluation
 *     or sequence-mode prediction.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(EPN_BUILD)
#define EPN_API __declspec(dllexport)
#else
#define EPN_API __declspec(dllimport)
#endif
#else
#define EPN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status values double as the CLI's exit codes. */
typedef enum epn_status {
    EPN_OK = 0,
    EPN_ERROR_USAGE = 2, /* bad arguments or configuration */
    EPN_ERROR_DATA = 3,  /* unreadable or invalid input data */
    EPN_ERROR_MODEL = 4  /* model file schema problems */
} epn_status;

#define EPN_FEATURE_COUNT 8

EPN_API const char* epn_version(void);

/* Message describing the most recent failure on this thread. */
EPN_API const char* epn_last_error(void);

/* ---- scale tables ------------------------------------------------- */

/* Loads and checksum-verifies the scale table files from a directory.
 * Not thread-safe against concurrent epinet calls; call once at startup. */
EPN_API epn_status epn_scales_load(const char* dir);

/* Name of feature 0..7 in the fixed order, or NULL out of range. */
EPN_API const char* epn_feature_name(size_t index);

/* All eight descriptors for one peptide/protein pair (sequences are
 * validated and case-normalized). out must hold EPN_FEATURE_COUNT values. */
EPN_API epn_status epn_descriptors(const char* peptide, const char* protein, double* out);

/* ---- dataset ------------------------------------------------------ */

typedef struct epn_dataset epn_dataset;

EPN_API epn_status epn_dataset_load(const char* csv_path, int skip_illegal_residues,
                                    epn_dataset** out);
EPN_API void epn_dataset_free(epn_dataset* dataset);

EPN_API size_t epn_dataset_size(const epn_dataset* dataset);
EPN_API size_t epn_dataset_rejected(const epn_dataset* dataset);
EPN_API size_t epn_dataset_span_mismatches(const epn_dataset* dataset);
/* FNV-1a64 of the raw CSV bytes, as recorded in run manifests. */
EPN_API uint64_t epn_dataset_checksum(const epn_dataset* dataset);
EPN_API const char* epn_dataset_report_text(const epn_dataset* dataset);

/* Feature/summary/correlation CSV exports; recompute selects descriptor
 * recomputation instead of the precomputed columns. */
EPN_API epn_status epn_dataset_export_features(const epn_dataset* dataset, int recompute,
                                               const char* out_path);
EPN_API epn_status epn_dataset_export_summary(const epn_dataset* dataset, int recompute,
                                              const char* out_path);
EPN_API epn_status epn_dataset_export_correlation(const epn_dataset* dataset, int recompute,
                                                  const char* out_path);
/* Passthrough vs recomputed values side by side, one line per feature. */
EPN_API epn_status epn_dataset_export_comparison(const epn_dataset* dataset,
                                                 const char* out_path);

/* ---- training ----------------------------------------------------- */

typedef struct epn_train_config {
    const size_t* hidden_dims; /* NULL means the default [64, 32] */
    size_t hidden_dims_len;
    double learning_rate;
    double beta1;
    double beta2;
    double epsilon_adam;
    double dropout_rate;
    size_t batch_size;
    size_t max_epochs;
    size_t patience;
    uint64_t seed;
    double class_weight_positive;
    double bce_clamp;
    double train_fraction;
    double val_fraction;
    double test_fraction;
    int recompute_features; /* 0: precomputed columns, 1: recompute */
    double threshold;       /* decision threshold stored in the model */
} epn_train_config;

/* Fills every field with the documented defaults. */
EPN_API void epn_train_config_init(epn_train_config* config);

typedef struct epn_model epn_model;
typedef struct epn_train_result epn_train_result;

/* Stratified split + standardize + train with early stopping. */
EPN_API epn_status epn_train(const epn_dataset* dataset, const epn_train_config* config,
                             epn_train_result** out);
EPN_API void epn_train_result_free(epn_train_result* result);

EPN_API epn_status epn_train_result_save_model(const epn_train_result* result,
                                               const char* path);
EPN_API epn_status epn_train_result_save_loss_csv(const epn_train_result* result,
                                                  const char* path);
/* Standalone model handle (caller frees). */
EPN_API epn_status epn_train_result_model(const epn_train_result* result, epn_model** out);

EPN_API size_t epn_train_result_epochs(const epn_train_result* result);
EPN_API size_t epn_train_result_best_epoch(const epn_train_result* result);
EPN_API int epn_train_result_restored_best(const epn_train_result* result);
/* epoch is 1-based; returns NaN out of range. */
EPN_API double epn_train_result_train_loss(const epn_train_result* result, size_t epoch);
EPN_API double epn_train_result_val_loss(const epn_train_result* result, size_t epoch);
/* out must hold 3 values: train, val, test record counts. */
EPN_API void epn_train_result_split_sizes(const epn_train_result* result, size_t* out);

/* ---- models ------------------------------------------------------- */

EPN_API epn_status epn_model_load(const char* path, epn_model** out);
EPN_API epn_status epn_model_save(const epn_model* model, const char* path);
EPN_API void epn_model_free(epn_model* model);

EPN_API double epn_model_threshold(const epn_model* model);
EPN_API epn_status epn_model_set_threshold(epn_model* model, double threshold);

/* features must hold EPN_FEATURE_COUNT raw (unstandardized) values in the
 * fixed order. probability/label pointers may be NULL if unwanted. */
EPN_API epn_status epn_model_predict(const epn_model* model, const double* features,
                                     double* probability, int* label);

/* Reads input_path, appends probability + label columns, writes
 * output_path. from_sequences selects sequence columns + descriptor
 * recomputation instead of feature columns. */
EPN_API epn_status epn_predict_csv(const epn_model* model, const char* input_path,
                                   const char* output_path, int from_sequences);

/* ---- evaluation --------------------------------------------------- */

typedef enum epn_subset {
    EPN_SUBSET_ALL = 0,
    EPN_SUBSET_TRAIN = 1,
    EPN_SUBSET_VAL = 2,
    EPN_SUBSET_TEST = 3
} epn_subset;

typedef struct epn_eval_config {
    int subset; /* epn_subset; non-ALL subsets re-derive the seeded split */
    double train_fraction;
    double val_fraction;
    double test_fraction;
    uint64_t split_seed;
    int recompute_features;
} epn_eval_config;

EPN_API void epn_eval_config_init(epn_eval_config* config);

typedef struct epn_eval_result epn_eval_result;

EPN_API epn_status epn_evaluate(const epn_model* model, const epn_dataset* dataset,
                                const epn_eval_config* config, epn_eval_result** out);
EPN_API void epn_eval_result_free(epn_eval_result* result);

/* out must hold 4 values: tn, fp, fn, tp. */
EPN_API void epn_eval_result_confusion(const epn_eval_result* result, uint64_t* out);
EPN_API double epn_eval_result_accuracy(const epn_eval_result* result);
EPN_API const char* epn_eval_result_report_text(const epn_eval_result* result);
EPN_API const char* epn_eval_result_report_csv(const epn_eval_result* result);
EPN_API const char* epn_eval_result_confusion_csv(const epn_eval_result* result);

/* ---- permutation importance --------------------------------------- */

typedef struct epn_importance_result epn_importance_result;

/* metric is "accuracy" or "f1_positive". */
EPN_API epn_status epn_importance(const epn_model* model, const epn_dataset* dataset,
                                  const epn_eval_config* config, const char* metric,
                                  size_t repeats, uint64_t seed,
                                  epn_importance_result** out);
EPN_API void epn_importance_result_free(epn_importance_result* result);

EPN_API double epn_importance_baseline(const epn_importance_result* result);
/* feature is an index into the fixed order; NaN out of range. */
EPN_API double epn_importance_mean(const epn_importance_result* result, size_t feature);
EPN_API double epn_importance_std(const epn_importance_result* result, size_t feature);
EPN_API const char* epn_importance_csv(const epn_importance_result* result,
                                       int sort_descending);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EPINET_H */
