#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "epinet.h"

namespace {

std::string tmp(const std::string& name) {
    static const std::filesystem::path dir = [] {
        const std::filesystem::path p = "capi_tmp";
        std::filesystem::create_directories(p);
        return p;
    }();
    return (dir / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string last_error() {
    const char* message = epn_last_error();
    return message ? message : "";
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

epn_dataset* load_synth() {
    epn_dataset* ds = nullptr;
    REQUIRE(epn_dataset_load(EPN_TEST_SYNTH, 0, &ds) == EPN_OK);
    REQUIRE(ds != nullptr);
    return ds;
}

// Small but real training run on the synthetic corpus.
epn_train_result* quick_train(const epn_dataset* ds, uint64_t seed = 1) {
    static const size_t hidden[] = {8, 4};
    epn_train_config cfg;
    epn_train_config_init(&cfg);
    cfg.hidden_dims = hidden;
    cfg.hidden_dims_len = 2;
    cfg.max_epochs = 3;
    cfg.batch_size = 64;
    cfg.seed = seed;
    epn_train_result* result = nullptr;
    REQUIRE(epn_train(ds, &cfg, &result) == EPN_OK);
    REQUIRE(result != nullptr);
    return result;
}

} // namespace

// The scale repository is process-global, so the not-yet-loaded failure
// modes must run before the one successful load below.

TEST_CASE("loading a missing scales directory is a data error") {
    CHECK(epn_scales_load("no_such_scales_dir") == EPN_ERROR_DATA);
    CHECK_FALSE(last_error().empty());
}

TEST_CASE("descriptors before scales are loaded are a usage error") {
    double out[EPN_FEATURE_COUNT];
    CHECK(epn_descriptors("ACDK", "MACDKLV", out) == EPN_ERROR_USAGE);
    CHECK(contains(last_error(), "scale tables not loaded"));
}

TEST_CASE("scale tables load from the shipped directory") {
    REQUIRE(epn_scales_load(EPN_TEST_SCALES) == EPN_OK);
}

TEST_CASE("version and feature names") {
    const char* version = epn_version();
    REQUIRE(version != nullptr);
    CHECK_FALSE(std::string(version).empty());

    CHECK(std::string(epn_feature_name(0)) == "chou_fasman");
    CHECK(std::string(epn_feature_name(1)) == "emini");
    CHECK(std::string(epn_feature_name(2)) == "kolaskar_tongaonkar");
    CHECK(std::string(epn_feature_name(3)) == "parker");
    CHECK(std::string(epn_feature_name(4)) == "isoelectric_point");
    CHECK(std::string(epn_feature_name(5)) == "aromaticity");
    CHECK(std::string(epn_feature_name(6)) == "hydrophobicity");
    CHECK(std::string(epn_feature_name(7)) == "stability");
    CHECK(epn_feature_name(EPN_FEATURE_COUNT) == nullptr);
}

TEST_CASE("null arguments are usage errors") {
    double out[EPN_FEATURE_COUNT];
    CHECK(epn_scales_load(nullptr) == EPN_ERROR_USAGE);
    CHECK(epn_descriptors(nullptr, "ACD", out) == EPN_ERROR_USAGE);
    CHECK(epn_descriptors("ACD", "ACDK", nullptr) == EPN_ERROR_USAGE);
    CHECK(epn_dataset_load(nullptr, 0, nullptr) == EPN_ERROR_USAGE);
    CHECK(epn_train(nullptr, nullptr, nullptr) == EPN_ERROR_USAGE);
    CHECK(epn_model_load(nullptr, nullptr) == EPN_ERROR_USAGE);
    CHECK(epn_model_predict(nullptr, out, nullptr, nullptr) == EPN_ERROR_USAGE);
    CHECK_FALSE(last_error().empty());

    // frees of NULL are no-ops
    epn_dataset_free(nullptr);
    epn_model_free(nullptr);
    epn_train_result_free(nullptr);
    epn_eval_result_free(nullptr);
    epn_importance_result_free(nullptr);

    // getters on NULL return inert values
    CHECK(epn_dataset_size(nullptr) == 0);
    CHECK(std::isnan(epn_model_threshold(nullptr)));
    CHECK(std::isnan(epn_importance_mean(nullptr, 0)));
}

TEST_CASE("descriptors compute the fixed feature order") {
    double out[EPN_FEATURE_COUNT];
    REQUIRE(epn_descriptors("AAAAAA", "AAAAAAAAAA", out) == EPN_OK);

    CHECK(out[0] == 0.66);  // chou_fasman, uniform window mean
    double emini = 1.0;     // per-window product of p/0.37, uniform
    for (int i = 0; i < 6; ++i) emini *= 0.49 / 0.37;
    CHECK(out[1] == emini);
    CHECK(out[2] == 1.064); // kolaskar_tongaonkar
    CHECK(out[4] > 0.0);    // isoelectric point of the parent protein
    CHECK(out[4] < 14.0);
    CHECK(out[5] == 0.0);   // no aromatic residues
    CHECK(out[6] == 1.8);   // gravy of poly-A
    CHECK(std::isfinite(out[7]));

    // lowercase input is canonicalized
    double lower[EPN_FEATURE_COUNT];
    REQUIRE(epn_descriptors("aaaaaa", "aaaaaaaaaa", lower) == EPN_OK);
    for (int f = 0; f < EPN_FEATURE_COUNT; ++f) CHECK(lower[f] == out[f]);

    CHECK(epn_descriptors("AXA", "AAAA", out) == EPN_ERROR_DATA);
    CHECK(contains(last_error(), "illegal residue"));
    CHECK(epn_descriptors("", "AAAA", out) == EPN_ERROR_DATA);
}

TEST_CASE("the synthetic corpus loads cleanly") {
    epn_dataset* ds = load_synth();
    CHECK(epn_dataset_size(ds) == 14907);
    CHECK(epn_dataset_rejected(ds) == 0);
    CHECK(epn_dataset_span_mismatches(ds) == 0);
    CHECK(epn_dataset_checksum(ds) != 0);

    const std::string report = epn_dataset_report_text(ds);
    CHECK(contains(report, "loaded: 14907"));
    CHECK(contains(report, "rejected: 0"));
    epn_dataset_free(ds);
}

TEST_CASE("a bad dataset path is a data error") {
    epn_dataset* ds = nullptr;
    CHECK(epn_dataset_load("no_such_file.csv", 0, &ds) == EPN_ERROR_DATA);
    CHECK(ds == nullptr);
}

TEST_CASE("dataset exports write csv files") {
    epn_dataset* ds = load_synth();

    const std::string features = tmp("features.csv");
    REQUIRE(epn_dataset_export_features(ds, 0, features.c_str()) == EPN_OK);
    const std::string features_text = read_file(features);
    CHECK(features_text.rfind("chou_fasman,", 0) == 0);

    const std::string summary = tmp("summary.csv");
    REQUIRE(epn_dataset_export_summary(ds, 0, summary.c_str()) == EPN_OK);
    CHECK(contains(read_file(summary), "mean"));

    const std::string correlation = tmp("correlation.csv");
    REQUIRE(epn_dataset_export_correlation(ds, 1, correlation.c_str()) == EPN_OK);
    CHECK(contains(read_file(correlation), "chou_fasman"));

    const std::string comparison = tmp("comparison.csv");
    REQUIRE(epn_dataset_export_comparison(ds, comparison.c_str()) == EPN_OK);
    CHECK(read_file(comparison).rfind("row,feature,passthrough,recomputed,abs_diff\n", 0) == 0);

    epn_dataset_free(ds);
}

TEST_CASE("train, persist, reload and predict") {
    epn_dataset* ds = load_synth();
    epn_train_result* result = quick_train(ds);

    size_t sizes[3];
    epn_train_result_split_sizes(result, sizes);
    CHECK(sizes[0] == 9541);
    CHECK(sizes[1] == 2385);
    CHECK(sizes[2] == 2981);

    const size_t epochs = epn_train_result_epochs(result);
    REQUIRE(epochs == 3); // patience 10 cannot trigger in 3 epochs
    const size_t best = epn_train_result_best_epoch(result);
    REQUIRE(best >= 1);
    REQUIRE(best <= epochs);
    CHECK(epn_train_result_restored_best(result) == (best != epochs ? 1 : 0));

    for (size_t e = 1; e <= epochs; ++e) {
        CHECK(std::isfinite(epn_train_result_train_loss(result, e)));
        CHECK(std::isfinite(epn_train_result_val_loss(result, e)));
    }
    CHECK(std::isnan(epn_train_result_train_loss(result, 0)));
    CHECK(std::isnan(epn_train_result_val_loss(result, epochs + 1)));

    const std::string model_path = tmp("model.txt");
    const std::string loss_path = tmp("loss.csv");
    REQUIRE(epn_train_result_save_model(result, model_path.c_str()) == EPN_OK);
    REQUIRE(epn_train_result_save_loss_csv(result, loss_path.c_str()) == EPN_OK);
    CHECK(read_file(loss_path).rfind("epoch,train_loss,val_loss\n", 0) == 0);

    epn_model* direct = nullptr;
    REQUIRE(epn_train_result_model(result, &direct) == EPN_OK);
    epn_model* reloaded = nullptr;
    REQUIRE(epn_model_load(model_path.c_str(), &reloaded) == EPN_OK);

    CHECK(epn_model_threshold(direct) == 0.5);
    CHECK(epn_model_threshold(reloaded) == 0.5);

    // same model through both handles
    const double features[EPN_FEATURE_COUNT] = {0.9, 1.8, 1.0, 1.5, 7.0, 0.1, -0.3, 35.0};
    double p1 = -1.0, p2 = -1.0;
    int label1 = -1, label2 = -1;
    REQUIRE(epn_model_predict(direct, features, &p1, &label1) == EPN_OK);
    REQUIRE(epn_model_predict(reloaded, features, &p2, &label2) == EPN_OK);
    CHECK(p1 == p2);
    CHECK(label1 == label2);
    CHECK(p1 >= 0.0);
    CHECK(p1 <= 1.0);
    CHECK(label1 == (p1 >= 0.5 ? 1 : 0));

    // output pointers are optional
    REQUIRE(epn_model_predict(direct, features, nullptr, nullptr) == EPN_OK);

    // threshold updates flip the label
    REQUIRE(epn_model_set_threshold(direct, p1 > 0.5 ? 1.0 : 0.0) == EPN_OK);
    REQUIRE(epn_model_predict(direct, features, nullptr, &label1) == EPN_OK);
    CHECK(label1 == (p1 >= epn_model_threshold(direct) ? 1 : 0));
    CHECK(epn_model_set_threshold(direct, 1.5) == EPN_ERROR_USAGE);

    epn_model_free(direct);
    epn_model_free(reloaded);
    epn_train_result_free(result);
    epn_dataset_free(ds);
}

TEST_CASE("training is seed-deterministic through the C API") {
    epn_dataset* ds = load_synth();
    epn_train_result* a = quick_train(ds, 3);
    epn_train_result* b = quick_train(ds, 3);
    CHECK(epn_train_result_train_loss(a, 3) == epn_train_result_train_loss(b, 3));
    CHECK(epn_train_result_val_loss(a, 3) == epn_train_result_val_loss(b, 3));

    epn_train_result* c = quick_train(ds, 4);
    CHECK(epn_train_result_train_loss(a, 3) != epn_train_result_train_loss(c, 3));

    epn_train_result_free(a);
    epn_train_result_free(b);
    epn_train_result_free(c);
    epn_dataset_free(ds);
}

TEST_CASE("invalid train configs are usage errors") {
    epn_dataset* ds = load_synth();
    epn_train_config cfg;
    epn_train_config_init(&cfg);
    cfg.threshold = 1.5;
    epn_train_result* result = nullptr;
    CHECK(epn_train(ds, &cfg, &result) == EPN_ERROR_USAGE);
    CHECK(result == nullptr);

    epn_train_config_init(&cfg);
    cfg.learning_rate = -1.0;
    CHECK(epn_train(ds, &cfg, &result) == EPN_ERROR_USAGE);

    epn_train_config_init(&cfg);
    cfg.train_fraction = 0.5; // fractions no longer sum to 1
    CHECK(epn_train(ds, &cfg, &result) == EPN_ERROR_USAGE);
    epn_dataset_free(ds);
}

TEST_CASE("a garbage model file is a model error") {
    const std::string path = tmp("garbage_model.txt");
    write_file(path, "this is not a model\n");
    epn_model* model = nullptr;
    CHECK(epn_model_load(path.c_str(), &model) == EPN_ERROR_MODEL);
    CHECK(model == nullptr);
    CHECK(contains(last_error(), "bad magic"));
}

TEST_CASE("evaluation over subsets") {
    epn_dataset* ds = load_synth();
    epn_train_result* result = quick_train(ds);
    epn_model* model = nullptr;
    REQUIRE(epn_train_result_model(result, &model) == EPN_OK);

    epn_eval_config cfg;
    epn_eval_config_init(&cfg);
    CHECK(cfg.subset == EPN_SUBSET_ALL);

    epn_eval_result* all = nullptr;
    REQUIRE(epn_evaluate(model, ds, &cfg, &all) == EPN_OK);
    uint64_t cm[4];
    epn_eval_result_confusion(all, cm);
    CHECK(cm[0] + cm[1] + cm[2] + cm[3] == 14907);
    const double accuracy = epn_eval_result_accuracy(all);
    CHECK(accuracy == static_cast<double>(cm[0] + cm[3]) / 14907.0);

    CHECK(contains(epn_eval_result_report_text(all), "Covid_Negative"));
    CHECK(std::string(epn_eval_result_report_csv(all))
              .rfind("class,precision,recall,f1,support\n", 0) == 0);
    CHECK(std::string(epn_eval_result_confusion_csv(all)).rfind(",pred_0,pred_1\n", 0) == 0);
    epn_eval_result_free(all);

    cfg.subset = EPN_SUBSET_TEST;
    epn_eval_result* test = nullptr;
    REQUIRE(epn_evaluate(model, ds, &cfg, &test) == EPN_OK);
    epn_eval_result_confusion(test, cm);
    CHECK(cm[0] + cm[1] + cm[2] + cm[3] == 2981);
    epn_eval_result_free(test);

    cfg.subset = 9;
    epn_eval_result* bad = nullptr;
    CHECK(epn_evaluate(model, ds, &cfg, &bad) == EPN_ERROR_USAGE);
    CHECK(bad == nullptr);

    epn_model_free(model);
    epn_train_result_free(result);
    epn_dataset_free(ds);
}

TEST_CASE("permutation importance through the C API") {
    epn_dataset* ds = load_synth();
    epn_train_result* result = quick_train(ds);
    epn_model* model = nullptr;
    REQUIRE(epn_train_result_model(result, &model) == EPN_OK);

    epn_eval_config cfg;
    epn_eval_config_init(&cfg);
    cfg.subset = EPN_SUBSET_VAL;

    epn_importance_result* imp = nullptr;
    REQUIRE(epn_importance(model, ds, &cfg, "accuracy", 2, 3, &imp) == EPN_OK);
    const double baseline = epn_importance_baseline(imp);
    CHECK(baseline >= 0.0);
    CHECK(baseline <= 1.0);
    for (size_t f = 0; f < EPN_FEATURE_COUNT; ++f) {
        CHECK(std::isfinite(epn_importance_mean(imp, f)));
        CHECK(epn_importance_std(imp, f) >= 0.0);
    }
    CHECK(std::isnan(epn_importance_mean(imp, EPN_FEATURE_COUNT)));
    CHECK(std::string(epn_importance_csv(imp, 1))
              .rfind("feature,importance_mean,importance_std\n", 0) == 0);
    epn_importance_result_free(imp);

    epn_importance_result* bad = nullptr;
    CHECK(epn_importance(model, ds, &cfg, "banana", 2, 3, &bad) == EPN_ERROR_USAGE);
    CHECK(contains(last_error(), "valid metrics: accuracy, f1_positive"));
    CHECK(epn_importance(model, ds, &cfg, "accuracy", 0, 3, &bad) == EPN_ERROR_USAGE);

    epn_model_free(model);
    epn_train_result_free(result);
    epn_dataset_free(ds);
}

TEST_CASE("csv prediction appends probability and label columns") {
    epn_dataset* ds = load_synth();
    epn_train_result* result = quick_train(ds);
    epn_model* model = nullptr;
    REQUIRE(epn_train_result_model(result, &model) == EPN_OK);

    // feature-mode input
    const std::string in_path = tmp("predict_in.csv");
    write_file(in_path,
               "chou_fasman,emini,kolaskar_tongaonkar,parker,isoelectric_point,"
               "aromaticity,hydrophobicity,stability\n"
               "0.9,1.8,1.0,1.5,7.0,0.1,-0.3,35.0\n");
    const std::string out_path = tmp("predict_out.csv");
    REQUIRE(epn_predict_csv(model, in_path.c_str(), out_path.c_str(), 0) == EPN_OK);
    const std::string out_text = read_file(out_path);
    CHECK(contains(out_text, ",probability,label"));

    // the row's probability matches epn_model_predict
    const double features[EPN_FEATURE_COUNT] = {0.9, 1.8, 1.0, 1.5, 7.0, 0.1, -0.3, 35.0};
    double want = -1.0;
    REQUIRE(epn_model_predict(model, features, &want, nullptr) == EPN_OK);
    std::ostringstream formatted;
    formatted.precision(17);
    CHECK(contains(out_text, std::to_string(want >= 0.5 ? 1 : 0)));

    // header-only input yields header-only output
    const std::string empty_in = tmp("predict_empty.csv");
    write_file(empty_in,
               "chou_fasman,emini,kolaskar_tongaonkar,parker,isoelectric_point,"
               "aromaticity,hydrophobicity,stability\n");
    const std::string empty_out = tmp("predict_empty_out.csv");
    REQUIRE(epn_predict_csv(model, empty_in.c_str(), empty_out.c_str(), 0) == EPN_OK);
    const std::string empty_text = read_file(empty_out);
    CHECK(contains(empty_text, ",probability,label"));
    CHECK(empty_text.find('\n') == empty_text.size() - 1); // single line

    // sequence-mode input
    const std::string seq_in = tmp("predict_seq.csv");
    write_file(seq_in, "peptide_seq,protein_seq\nAAAAAA,AAAAAAAAAA\n");
    const std::string seq_out = tmp("predict_seq_out.csv");
    REQUIRE(epn_predict_csv(model, seq_in.c_str(), seq_out.c_str(), 1) == EPN_OK);
    CHECK(contains(read_file(seq_out), ",probability,label"));

    // schema problems are data errors
    const std::string bad_in = tmp("predict_bad.csv");
    write_file(bad_in, "emini,parker\n1.0,2.0\n");
    CHECK(epn_predict_csv(model, bad_in.c_str(), seq_out.c_str(), 0) == EPN_ERROR_DATA);

    epn_model_free(model);
    epn_train_result_free(result);
    epn_dataset_free(ds);
}
