#include "epinet.h"

#include <cmath>
#include <cstring>
#include <optional>
#include <string>

#include "epinet/dataset.hpp"
#include "epinet/errors.hpp"
#include "epinet/importance.hpp"
#include "epinet/model.hpp"
#include "epinet/pipeline.hpp"
#include "epinet/rng.hpp"
#include "epinet/text.hpp"
#include "epinet/trainer.hpp"

using namespace epinet;

namespace {

thread_local std::string g_last_error;

epn_status status_of(ErrorCategory category) {
    switch (category) {
    case ErrorCategory::Usage:
        return EPN_ERROR_USAGE;
    case ErrorCategory::Model:
        return EPN_ERROR_MODEL;
    case ErrorCategory::Data:
    default:
        return EPN_ERROR_DATA;
    }
}

epn_status usage_error(const std::string& message) {
    g_last_error = message;
    return EPN_ERROR_USAGE;
}

template <typename F>
epn_status guarded(F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.category());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return EPN_ERROR_DATA;
    } catch (...) {
        g_last_error = "unknown error";
        return EPN_ERROR_DATA;
    }
}

std::optional<ScaleRepository>& scales_slot() {
    static std::optional<ScaleRepository> slot;
    return slot;
}

const ScaleRepository& scales_for(FeaturizeMode mode) {
    if (mode == FeaturizeMode::Passthrough) {
        // Passthrough featurization never reads the tables.
        static const ScaleRepository dummy;
        return scales_slot() ? *scales_slot() : dummy;
    }
    if (!scales_slot()) {
        throw Error(ErrorCode::InvalidArgument,
                    "scale tables not loaded; call epn_scales_load first");
    }
    return *scales_slot();
}

} // namespace

struct epn_dataset {
    std::vector<EpitopeRecord> records;
    IngestReport report;
    std::uint64_t checksum = 0;
    std::string report_text;
};

struct epn_model {
    Model model;
};

struct epn_train_result {
    Model model;
    TrainReport report;
    std::array<std::size_t, 3> split_sizes{};
};

struct epn_eval_result {
    EvalOutput output;
    std::string text;
    std::string csv;
    std::string cm_csv;
};

struct epn_importance_result {
    ImportanceReport report;
    mutable std::string csv_cache;
};

namespace {

epn_status export_dataset_csv(const epn_dataset* dataset, int recompute, const char* out_path,
                              std::string (*exporter)(const std::vector<FeatureVector>&)) {
    if (!dataset || !out_path) return usage_error("dataset export: null argument");
    return guarded([&] {
        const FeaturizeMode mode =
            recompute ? FeaturizeMode::Recompute : FeaturizeMode::Passthrough;
        const auto vectors = featurize_all(dataset->records, mode, scales_for(mode));
        write_file(out_path, exporter(vectors));
        return EPN_OK;
    });
}

std::vector<FeatureVector> subset_vectors(const epn_dataset* dataset,
                                          const epn_eval_config* config) {
    const FeaturizeMode mode =
        config->recompute_features ? FeaturizeMode::Recompute : FeaturizeMode::Passthrough;
    const ScaleRepository& scales = scales_for(mode);

    if (config->subset == EPN_SUBSET_ALL) {
        return featurize_all(dataset->records, mode, scales);
    }
    SplitSpec split;
    split.train_fraction = config->train_fraction;
    split.val_fraction = config->val_fraction;
    split.test_fraction = config->test_fraction;
    split.seed = config->split_seed;
    const DatasetSplits splits = stratified_split(dataset->records, split);
    switch (config->subset) {
    case EPN_SUBSET_TRAIN:
        return featurize_all(splits.train, mode, scales);
    case EPN_SUBSET_VAL:
        return featurize_all(splits.val, mode, scales);
    case EPN_SUBSET_TEST:
        return featurize_all(splits.test, mode, scales);
    default:
        throw Error(ErrorCode::InvalidArgument,
                    "bad subset value " + std::to_string(config->subset));
    }
}

} // namespace

extern "C" {

const char* epn_version(void) { return "1.0.0"; }

const char* epn_last_error(void) { return g_last_error.c_str(); }

epn_status epn_scales_load(const char* dir) {
    if (!dir) return usage_error("epn_scales_load: dir is null");
    return guarded([&] {
        scales_slot() = ScaleRepository::load(dir);
        return EPN_OK;
    });
}

const char* epn_feature_name(size_t index) {
    if (index >= kFeatureCount) return nullptr;
    return kFeatureNames[index].data();
}

epn_status epn_descriptors(const char* peptide, const char* protein, double* out) {
    if (!peptide || !protein || !out) return usage_error("epn_descriptors: null argument");
    return guarded([&] {
        const ScaleRepository& scales = scales_for(FeaturizeMode::Recompute);
        const std::string pep = validate_sequence(peptide);
        const std::string prot = validate_sequence(protein);
        const auto values = descriptor_vector(pep, prot, scales);
        for (std::size_t f = 0; f < kFeatureCount; ++f) out[f] = values[f];
        return EPN_OK;
    });
}

epn_status epn_dataset_load(const char* csv_path, int skip_illegal_residues,
                            epn_dataset** out) {
    if (!csv_path || !out) return usage_error("epn_dataset_load: null argument");
    *out = nullptr;
    return guarded([&] {
        const std::string bytes = read_file(csv_path);
        LoadOptions options;
        options.skip_illegal_residues = skip_illegal_residues != 0;
        LoadResult loaded = load_csv(csv_path, options);

        auto* handle = new epn_dataset;
        handle->records = std::move(loaded.records);
        handle->report = std::move(loaded.report);
        handle->checksum = fnv1a64(bytes.data(), bytes.size());
        handle->report_text = handle->report.to_text();
        *out = handle;
        return EPN_OK;
    });
}

void epn_dataset_free(epn_dataset* dataset) { delete dataset; }

size_t epn_dataset_size(const epn_dataset* dataset) {
    return dataset ? dataset->records.size() : 0;
}

size_t epn_dataset_rejected(const epn_dataset* dataset) {
    return dataset ? dataset->report.rejected() : 0;
}

size_t epn_dataset_span_mismatches(const epn_dataset* dataset) {
    return dataset ? dataset->report.span_mismatches : 0;
}

uint64_t epn_dataset_checksum(const epn_dataset* dataset) {
    return dataset ? dataset->checksum : 0;
}

const char* epn_dataset_report_text(const epn_dataset* dataset) {
    return dataset ? dataset->report_text.c_str() : "";
}

epn_status epn_dataset_export_features(const epn_dataset* dataset, int recompute,
                                       const char* out_path) {
    return export_dataset_csv(dataset, recompute, out_path, &export_features_csv);
}

epn_status epn_dataset_export_summary(const epn_dataset* dataset, int recompute,
                                      const char* out_path) {
    return export_dataset_csv(dataset, recompute, out_path, &export_summary_csv);
}

epn_status epn_dataset_export_correlation(const epn_dataset* dataset, int recompute,
                                          const char* out_path) {
    return export_dataset_csv(dataset, recompute, out_path, &export_correlation_csv);
}

epn_status epn_dataset_export_comparison(const epn_dataset* dataset, const char* out_path) {
    if (!dataset || !out_path) return usage_error("epn_dataset_export_comparison: null argument");
    return guarded([&] {
        const ScaleRepository& scales = scales_for(FeaturizeMode::Recompute);
        write_file(out_path, export_comparison_csv(dataset->records, scales));
        return EPN_OK;
    });
}

void epn_train_config_init(epn_train_config* config) {
    if (!config) return;
    const TrainConfig defaults;
    config->hidden_dims = nullptr;
    config->hidden_dims_len = 0;
    config->learning_rate = defaults.learning_rate;
    config->beta1 = defaults.beta1;
    config->beta2 = defaults.beta2;
    config->epsilon_adam = defaults.epsilon_adam;
    config->dropout_rate = defaults.dropout_rate;
    config->batch_size = defaults.batch_size;
    config->max_epochs = defaults.max_epochs;
    config->patience = defaults.patience;
    config->seed = defaults.seed;
    config->class_weight_positive = defaults.class_weight_positive;
    config->bce_clamp = defaults.bce_clamp;
    const SplitSpec split;
    config->train_fraction = split.train_fraction;
    config->val_fraction = split.val_fraction;
    config->test_fraction = split.test_fraction;
    config->recompute_features = 0;
    config->threshold = 0.5;
}

epn_status epn_train(const epn_dataset* dataset, const epn_train_config* config,
                     epn_train_result** out) {
    if (!dataset || !config || !out) return usage_error("epn_train: null argument");
    *out = nullptr;
    return guarded([&] {
        TrainConfig tc;
        if (config->hidden_dims) {
            tc.hidden_dims.assign(config->hidden_dims,
                                  config->hidden_dims + config->hidden_dims_len);
        }
        tc.learning_rate = config->learning_rate;
        tc.beta1 = config->beta1;
        tc.beta2 = config->beta2;
        tc.epsilon_adam = config->epsilon_adam;
        tc.dropout_rate = config->dropout_rate;
        tc.batch_size = config->batch_size;
        tc.max_epochs = config->max_epochs;
        tc.patience = config->patience;
        tc.seed = config->seed;
        tc.class_weight_positive = config->class_weight_positive;
        tc.bce_clamp = config->bce_clamp;
        tc.validate();

        if (!(config->threshold >= 0.0 && config->threshold <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "threshold must lie in [0, 1]");
        }

        SplitSpec split;
        split.train_fraction = config->train_fraction;
        split.val_fraction = config->val_fraction;
        split.test_fraction = config->test_fraction;
        split.seed = config->seed;

        const FeaturizeMode mode =
            config->recompute_features ? FeaturizeMode::Recompute : FeaturizeMode::Passthrough;
        const ScaleRepository& scales = scales_for(mode);

        const DatasetSplits splits = stratified_split(dataset->records, split);
        const auto train_vs = featurize_all(splits.train, mode, scales);
        const auto val_vs = featurize_all(splits.val, mode, scales);

        TrainResult trained = train(train_vs, val_vs, tc);

        auto* handle = new epn_train_result;
        handle->model.params = std::move(trained.params);
        handle->model.standardizer = trained.standardizer;
        handle->model.threshold = config->threshold;
        handle->report = std::move(trained.report);
        handle->split_sizes = {splits.train.size(), splits.val.size(), splits.test.size()};
        *out = handle;
        return EPN_OK;
    });
}

void epn_train_result_free(epn_train_result* result) { delete result; }

epn_status epn_train_result_save_model(const epn_train_result* result, const char* path) {
    if (!result || !path) return usage_error("epn_train_result_save_model: null argument");
    return guarded([&] {
        save_model(result->model, path);
        return EPN_OK;
    });
}

epn_status epn_train_result_save_loss_csv(const epn_train_result* result, const char* path) {
    if (!result || !path) return usage_error("epn_train_result_save_loss_csv: null argument");
    return guarded([&] {
        write_file(path, result->report.loss_csv());
        return EPN_OK;
    });
}

epn_status epn_train_result_model(const epn_train_result* result, epn_model** out) {
    if (!result || !out) return usage_error("epn_train_result_model: null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new epn_model{result->model};
        return EPN_OK;
    });
}

size_t epn_train_result_epochs(const epn_train_result* result) {
    return result ? result->report.stopped_epoch : 0;
}

size_t epn_train_result_best_epoch(const epn_train_result* result) {
    return result ? result->report.best_epoch : 0;
}

int epn_train_result_restored_best(const epn_train_result* result) {
    return result && result->report.restored_best ? 1 : 0;
}

double epn_train_result_train_loss(const epn_train_result* result, size_t epoch) {
    if (!result || epoch == 0 || epoch > result->report.train_loss.size()) {
        return std::nan("");
    }
    return result->report.train_loss[epoch - 1];
}

double epn_train_result_val_loss(const epn_train_result* result, size_t epoch) {
    if (!result || epoch == 0 || epoch > result->report.val_loss.size()) {
        return std::nan("");
    }
    return result->report.val_loss[epoch - 1];
}

void epn_train_result_split_sizes(const epn_train_result* result, size_t* out) {
    if (!result || !out) return;
    for (std::size_t s = 0; s < 3; ++s) out[s] = result->split_sizes[s];
}

epn_status epn_model_load(const char* path, epn_model** out) {
    if (!path || !out) return usage_error("epn_model_load: null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new epn_model{load_model(path)};
        return EPN_OK;
    });
}

epn_status epn_model_save(const epn_model* model, const char* path) {
    if (!model || !path) return usage_error("epn_model_save: null argument");
    return guarded([&] {
        save_model(model->model, path);
        return EPN_OK;
    });
}

void epn_model_free(epn_model* model) { delete model; }

double epn_model_threshold(const epn_model* model) {
    return model ? model->model.threshold : std::nan("");
}

epn_status epn_model_set_threshold(epn_model* model, double threshold) {
    if (!model) return usage_error("epn_model_set_threshold: null model");
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        return usage_error("threshold must lie in [0, 1]");
    }
    model->model.threshold = threshold;
    return EPN_OK;
}

epn_status epn_model_predict(const epn_model* model, const double* features,
                             double* probability, int* label) {
    if (!model || !features) return usage_error("epn_model_predict: null argument");
    return guarded([&] {
        std::array<double, kFeatureCount> x;
        std::memcpy(x.data(), features, sizeof(double) * kFeatureCount);
        const double p = predict_proba(model->model, x);
        if (probability) *probability = p;
        if (label) *label = p >= model->model.threshold ? 1 : 0;
        return EPN_OK;
    });
}

epn_status epn_predict_csv(const epn_model* model, const char* input_path,
                           const char* output_path, int from_sequences) {
    if (!model || !input_path || !output_path) {
        return usage_error("epn_predict_csv: null argument");
    }
    return guarded([&] {
        const PredictInput mode =
            from_sequences ? PredictInput::Sequences : PredictInput::Features;
        const ScaleRepository& scales = scales_for(
            from_sequences ? FeaturizeMode::Recompute : FeaturizeMode::Passthrough);
        const std::string text = read_file(input_path);
        write_file(output_path, predict_csv(model->model, text, mode, scales));
        return EPN_OK;
    });
}

void epn_eval_config_init(epn_eval_config* config) {
    if (!config) return;
    const SplitSpec split;
    config->subset = EPN_SUBSET_ALL;
    config->train_fraction = split.train_fraction;
    config->val_fraction = split.val_fraction;
    config->test_fraction = split.test_fraction;
    config->split_seed = split.seed;
    config->recompute_features = 0;
}

epn_status epn_evaluate(const epn_model* model, const epn_dataset* dataset,
                        const epn_eval_config* config, epn_eval_result** out) {
    if (!model || !dataset || !config || !out) {
        return usage_error("epn_evaluate: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        const auto vectors = subset_vectors(dataset, config);
        auto* handle = new epn_eval_result;
        handle->output = evaluate_model(model->model, vectors);
        handle->text = report_text(handle->output.report);
        handle->csv = report_csv(handle->output.report);
        handle->cm_csv = confusion_csv(handle->output.cm);
        *out = handle;
        return EPN_OK;
    });
}

void epn_eval_result_free(epn_eval_result* result) { delete result; }

void epn_eval_result_confusion(const epn_eval_result* result, uint64_t* out) {
    if (!result || !out) return;
    out[0] = result->output.cm.tn;
    out[1] = result->output.cm.fp;
    out[2] = result->output.cm.fn;
    out[3] = result->output.cm.tp;
}

double epn_eval_result_accuracy(const epn_eval_result* result) {
    return result ? result->output.report.accuracy : std::nan("");
}

const char* epn_eval_result_report_text(const epn_eval_result* result) {
    return result ? result->text.c_str() : "";
}

const char* epn_eval_result_report_csv(const epn_eval_result* result) {
    return result ? result->csv.c_str() : "";
}

const char* epn_eval_result_confusion_csv(const epn_eval_result* result) {
    return result ? result->cm_csv.c_str() : "";
}

epn_status epn_importance(const epn_model* model, const epn_dataset* dataset,
                          const epn_eval_config* config, const char* metric, size_t repeats,
                          uint64_t seed, epn_importance_result** out) {
    if (!model || !dataset || !config || !metric || !out) {
        return usage_error("epn_importance: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        ImportanceMetric m;
        if (std::strcmp(metric, "accuracy") == 0) {
            m = ImportanceMetric::Accuracy;
        } else if (std::strcmp(metric, "f1_positive") == 0) {
            m = ImportanceMetric::F1Positive;
        } else {
            throw Error(ErrorCode::InvalidArgument,
                        "unknown importance metric `" + std::string(metric) +
                            "`; valid metrics: accuracy, f1_positive");
        }
        const auto vectors = subset_vectors(dataset, config);
        auto* handle = new epn_importance_result;
        handle->report = permutation_importance(model->model, vectors, m, repeats, seed);
        *out = handle;
        return EPN_OK;
    });
}

void epn_importance_result_free(epn_importance_result* result) { delete result; }

double epn_importance_baseline(const epn_importance_result* result) {
    return result ? result->report.baseline : std::nan("");
}

double epn_importance_mean(const epn_importance_result* result, size_t feature) {
    if (!result || feature >= kFeatureCount) return std::nan("");
    return result->report.features[feature].mean;
}

double epn_importance_std(const epn_importance_result* result, size_t feature) {
    if (!result || feature >= kFeatureCount) return std::nan("");
    return result->report.features[feature].stddev;
}

const char* epn_importance_csv(const epn_importance_result* result, int sort_descending) {
    if (!result) return "";
    result->csv_cache = importance_csv(result->report, sort_descending != 0);
    return result->csv_cache.c_str();
}

} // extern "C"
