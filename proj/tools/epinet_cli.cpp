// Command-line front end. Talks to the library exclusively through the
// C API in epinet.h; exit codes are the epn_status values.

#include <cerrno>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "epinet.h"

namespace {

int fail_status(epn_status status) {
    std::fprintf(stderr, "error: %s\n", epn_last_error());
    return static_cast<int>(status);
}

int usage_fail(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return static_cast<int>(EPN_ERROR_USAGE);
}

// Shortest decimal form that parses back to the same double.
std::string fmt_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, end);
}

std::string fmt_checksum(std::uint64_t checksum) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "0x%016" PRIx64, checksum);
    return buf;
}

bool write_text(const std::string& path, const std::string& content) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) return false;
    const bool ok = std::fwrite(content.data(), 1, content.size(), f) == content.size();
    return std::fclose(f) == 0 && ok;
}

std::string resolve_scales(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("EPINET_SCALES"); env && *env) return env;
    return "data/scales";
}

// RAII wrappers for the C handles.
using DatasetPtr = std::unique_ptr<epn_dataset, decltype(&epn_dataset_free)>;
using ModelPtr = std::unique_ptr<epn_model, decltype(&epn_model_free)>;
using TrainPtr = std::unique_ptr<epn_train_result, decltype(&epn_train_result_free)>;
using EvalPtr = std::unique_ptr<epn_eval_result, decltype(&epn_eval_result_free)>;
using ImportancePtr =
    std::unique_ptr<epn_importance_result, decltype(&epn_importance_result_free)>;

bool parse_hidden_list(const std::string& text, std::vector<size_t>& out) {
    out.clear();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) return false;
        const auto last = item.find_last_not_of(" \t");
        item = item.substr(first, last - first + 1);
        errno = 0;
        char* end = nullptr;
        const unsigned long long v = std::strtoull(item.c_str(), &end, 10);
        if (errno != 0 || end != item.c_str() + item.size() || v == 0) return false;
        out.push_back(static_cast<size_t>(v));
    }
    return !out.empty();
}

int subset_code(const std::string& name) {
    if (name == "all") return EPN_SUBSET_ALL;
    if (name == "train") return EPN_SUBSET_TRAIN;
    if (name == "val") return EPN_SUBSET_VAL;
    return EPN_SUBSET_TEST;
}

// Options shared by commands that read a dataset CSV.
struct DataOpts {
    std::string data;
    std::string scales;
    std::string mode = "passthrough";
    bool skip_invalid = false;
};

void add_data_opts(CLI::App* cmd, DataOpts& opts) {
    cmd->add_option("--data", opts.data, "Dataset CSV path");
    cmd->add_option("--scales", opts.scales,
                    "Scale table directory (default: $EPINET_SCALES or data/scales)");
    cmd->add_option("--mode", opts.mode, "Feature source: passthrough or recompute")
        ->check(CLI::IsMember({"passthrough", "recompute"}))
        ->capture_default_str();
    cmd->add_flag("--skip-invalid", opts.skip_invalid,
                  "Skip rows with illegal residues instead of aborting");
}

struct SplitOpts {
    double train_frac = 0.64;
    double val_frac = 0.16;
    double test_frac = 0.20;
};

void add_split_opts(CLI::App* cmd, SplitOpts& opts) {
    cmd->add_option("--train-frac", opts.train_frac, "Training split fraction")
        ->capture_default_str();
    cmd->add_option("--val-frac", opts.val_frac, "Validation split fraction")
        ->capture_default_str();
    cmd->add_option("--test-frac", opts.test_frac, "Test split fraction")
        ->capture_default_str();
}

int load_scales_or_fail(const std::string& flag_value) {
    const std::string dir = resolve_scales(flag_value);
    const epn_status st = epn_scales_load(dir.c_str());
    return st == EPN_OK ? 0 : fail_status(st);
}

int load_dataset(const DataOpts& opts, DatasetPtr& out) {
    epn_dataset* raw = nullptr;
    const epn_status st = epn_dataset_load(opts.data.c_str(), opts.skip_invalid ? 1 : 0, &raw);
    if (st != EPN_OK) return fail_status(st);
    out.reset(raw);
    return 0;
}

int load_model(const std::string& path, ModelPtr& out) {
    epn_model* raw = nullptr;
    const epn_status st = epn_model_load(path.c_str(), &raw);
    if (st != EPN_OK) return fail_status(st);
    out.reset(raw);
    return 0;
}

// ---- features ------------------------------------------------------

struct FeaturesOpts {
    DataOpts data;
    std::string out;
    std::string summary;
    std::string correlation;
    std::string compare;
};

int run_features(const FeaturesOpts& opts) {
    if (opts.data.data.empty()) return usage_fail("features needs --data");
    if (opts.out.empty()) return usage_fail("features needs --out");
    if (int rc = load_scales_or_fail(opts.data.scales)) return rc;
    DatasetPtr ds(nullptr, &epn_dataset_free);
    if (int rc = load_dataset(opts.data, ds)) return rc;

    std::fputs(epn_dataset_report_text(ds.get()), stdout);

    const int recompute = opts.data.mode == "recompute" ? 1 : 0;
    epn_status st = epn_dataset_export_features(ds.get(), recompute, opts.out.c_str());
    if (st != EPN_OK) return fail_status(st);
    std::printf("wrote %s\n", opts.out.c_str());

    if (!opts.summary.empty()) {
        st = epn_dataset_export_summary(ds.get(), recompute, opts.summary.c_str());
        if (st != EPN_OK) return fail_status(st);
        std::printf("wrote %s\n", opts.summary.c_str());
    }
    if (!opts.correlation.empty()) {
        st = epn_dataset_export_correlation(ds.get(), recompute, opts.correlation.c_str());
        if (st != EPN_OK) return fail_status(st);
        std::printf("wrote %s\n", opts.correlation.c_str());
    }
    if (!opts.compare.empty()) {
        st = epn_dataset_export_comparison(ds.get(), opts.compare.c_str());
        if (st != EPN_OK) return fail_status(st);
        std::printf("wrote %s\n", opts.compare.c_str());
    }
    return 0;
}

// ---- train ---------------------------------------------------------

struct TrainOpts {
    DataOpts data;
    SplitOpts split;
    std::string out = ".";
    std::string hidden = "64,32";
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    double dropout = 0.3;
    size_t batch = 32;
    size_t epochs = 200;
    size_t patience = 10;
    uint64_t seed = 0;
    double class_weight = 1.0;
    double bce_clamp = 1e-7;
    double threshold = 0.5;
};

std::string manifest_text(const TrainOpts& opts, const std::string& scales_dir,
                          const epn_dataset* ds, const epn_train_result* result) {
    size_t sizes[3] = {0, 0, 0};
    epn_train_result_split_sizes(result, sizes);
    std::ostringstream m;
    m << "# run manifest: effective configuration plus run facts (run.* keys).\n";
    m << "# Reusable as --config for `epinet train` to reproduce the run.\n";
    m << "data = " << opts.data.data << "\n";
    m << "scales = " << scales_dir << "\n";
    m << "out = " << opts.out << "\n";
    m << "mode = " << opts.data.mode << "\n";
    m << "skip-invalid = " << (opts.data.skip_invalid ? "true" : "false") << "\n";
    m << "seed = " << opts.seed << "\n";
    m << "threshold = " << fmt_double(opts.threshold) << "\n";
    m << "train-frac = " << fmt_double(opts.split.train_frac) << "\n";
    m << "val-frac = " << fmt_double(opts.split.val_frac) << "\n";
    m << "test-frac = " << fmt_double(opts.split.test_frac) << "\n";
    m << "hidden = " << opts.hidden << "\n";
    m << "lr = " << fmt_double(opts.lr) << "\n";
    m << "beta1 = " << fmt_double(opts.beta1) << "\n";
    m << "beta2 = " << fmt_double(opts.beta2) << "\n";
    m << "adam-eps = " << fmt_double(opts.adam_eps) << "\n";
    m << "dropout = " << fmt_double(opts.dropout) << "\n";
    m << "batch = " << opts.batch << "\n";
    m << "epochs = " << opts.epochs << "\n";
    m << "patience = " << opts.patience << "\n";
    m << "class-weight = " << fmt_double(opts.class_weight) << "\n";
    m << "bce-clamp = " << fmt_double(opts.bce_clamp) << "\n";
    m << "run.dataset-checksum = " << fmt_checksum(epn_dataset_checksum(ds)) << "\n";
    m << "run.loaded = " << epn_dataset_size(ds) << "\n";
    m << "run.rejected = " << epn_dataset_rejected(ds) << "\n";
    m << "run.train-size = " << sizes[0] << "\n";
    m << "run.val-size = " << sizes[1] << "\n";
    m << "run.test-size = " << sizes[2] << "\n";
    m << "run.epochs-run = " << epn_train_result_epochs(result) << "\n";
    m << "run.best-epoch = " << epn_train_result_best_epoch(result) << "\n";
    m << "run.restored-best = "
      << (epn_train_result_restored_best(result) ? "true" : "false") << "\n";
    m << "run.model-file = model.txt\n";
    m << "run.loss-file = loss.csv\n";
    return m.str();
}

int run_train(const TrainOpts& opts) {
    if (opts.data.data.empty()) return usage_fail("train needs --data");
    std::vector<size_t> hidden;
    if (!parse_hidden_list(opts.hidden, hidden)) {
        return usage_fail("bad hidden layer list `" + opts.hidden +
                          "`; expected comma-separated positive integers");
    }

    const std::string scales_dir = resolve_scales(opts.data.scales);
    if (int rc = load_scales_or_fail(opts.data.scales)) return rc;
    DatasetPtr ds(nullptr, &epn_dataset_free);
    if (int rc = load_dataset(opts.data, ds)) return rc;
    std::printf("loaded %zu rows (%zu rejected)\n", epn_dataset_size(ds.get()),
                epn_dataset_rejected(ds.get()));

    epn_train_config config;
    epn_train_config_init(&config);
    config.hidden_dims = hidden.data();
    config.hidden_dims_len = hidden.size();
    config.learning_rate = opts.lr;
    config.beta1 = opts.beta1;
    config.beta2 = opts.beta2;
    config.epsilon_adam = opts.adam_eps;
    config.dropout_rate = opts.dropout;
    config.batch_size = opts.batch;
    config.max_epochs = opts.epochs;
    config.patience = opts.patience;
    config.seed = opts.seed;
    config.class_weight_positive = opts.class_weight;
    config.bce_clamp = opts.bce_clamp;
    config.train_fraction = opts.split.train_frac;
    config.val_fraction = opts.split.val_frac;
    config.test_fraction = opts.split.test_frac;
    config.recompute_features = opts.data.mode == "recompute" ? 1 : 0;
    config.threshold = opts.threshold;

    epn_train_result* raw = nullptr;
    epn_status st = epn_train(ds.get(), &config, &raw);
    if (st != EPN_OK) return fail_status(st);
    TrainPtr result(raw, &epn_train_result_free);

    std::error_code ec;
    std::filesystem::create_directories(opts.out, ec);
    if (ec) {
        std::fprintf(stderr, "error: cannot create output directory %s: %s\n",
                     opts.out.c_str(), ec.message().c_str());
        return static_cast<int>(EPN_ERROR_DATA);
    }
    const std::string model_path = opts.out + "/model.txt";
    const std::string loss_path = opts.out + "/loss.csv";
    const std::string manifest_path = opts.out + "/manifest.txt";

    st = epn_train_result_save_model(result.get(), model_path.c_str());
    if (st != EPN_OK) return fail_status(st);
    st = epn_train_result_save_loss_csv(result.get(), loss_path.c_str());
    if (st != EPN_OK) return fail_status(st);
    if (!write_text(manifest_path, manifest_text(opts, scales_dir, ds.get(), result.get()))) {
        std::fprintf(stderr, "error: cannot write %s\n", manifest_path.c_str());
        return static_cast<int>(EPN_ERROR_DATA);
    }

    size_t sizes[3];
    epn_train_result_split_sizes(result.get(), sizes);
    const size_t best = epn_train_result_best_epoch(result.get());
    std::printf("split sizes: train %zu, val %zu, test %zu\n", sizes[0], sizes[1], sizes[2]);
    std::printf("stopped after epoch %zu (best epoch %zu, best val loss %s)\n",
                epn_train_result_epochs(result.get()), best,
                fmt_double(epn_train_result_val_loss(result.get(), best)).c_str());
    std::printf("wrote %s, %s, %s\n", model_path.c_str(), loss_path.c_str(),
                manifest_path.c_str());
    return 0;
}

// ---- manifest reading (evaluate --manifest) -------------------------

struct Manifest {
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return &v;
        return nullptr;
    }
};

std::optional<Manifest> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    Manifest mf;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) mf.entries.emplace_back(std::move(key), std::move(value));
    }
    return mf;
}

// CLI11 only processes config files registered on the app it parses, so each
// subcommand's --config is applied here after parsing. Only options the
// command line left unset are filled in, which keeps the precedence
// flags > config > defaults; unknown keys (run.* facts) are ignored.
int apply_config_file(CLI::App* cmd) {
    CLI::Option* copt = cmd->get_config_ptr();
    if (copt == nullptr || copt->count() == 0) return 0;
    const std::string path = copt->as<std::string>();
    const auto config = read_manifest(path);
    if (!config) {
        std::fprintf(stderr, "error: cannot read config %s\n", path.c_str());
        return static_cast<int>(EPN_ERROR_DATA);
    }
    for (const auto& [key, value] : config->entries) {
        CLI::Option* op = cmd->get_option_no_throw("--" + key);
        if (op == nullptr || op == copt || !op->empty()) continue;
        try {
            op->add_result(value);
            op->run_callback();
        } catch (const CLI::Error& e) {
            return usage_fail(path + ": key `" + key + "`: " + e.what());
        }
    }
    return 0;
}

// ---- evaluate --------------------------------------------------------

struct EvaluateOpts {
    DataOpts data;
    SplitOpts split;
    std::string model;
    std::string manifest;
    std::string subset;
    std::string out = ".";
    std::string format = "text";
    uint64_t seed = 0;
};

int run_evaluate(EvaluateOpts opts) {
    uint64_t expected_checksum = 0;
    bool check_checksum = false;

    if (!opts.manifest.empty()) {
        const auto mf = read_manifest(opts.manifest);
        if (!mf) {
            std::fprintf(stderr, "error: cannot read manifest %s\n", opts.manifest.c_str());
            return static_cast<int>(EPN_ERROR_DATA);
        }
        auto take = [&](const char* key, std::string& into) {
            if (const std::string* v = mf->find(key)) into = *v;
        };
        if (opts.data.data.empty()) take("data", opts.data.data);
        if (opts.data.scales.empty()) take("scales", opts.data.scales);
        take("mode", opts.data.mode);
        if (const std::string* v = mf->find("skip-invalid"))
            opts.data.skip_invalid = *v == "true";
        if (const std::string* v = mf->find("seed"))
            opts.seed = std::strtoull(v->c_str(), nullptr, 10);
        auto take_frac = [&](const char* key, double& into) {
            if (const std::string* v = mf->find(key)) into = std::strtod(v->c_str(), nullptr);
        };
        take_frac("train-frac", opts.split.train_frac);
        take_frac("val-frac", opts.split.val_frac);
        take_frac("test-frac", opts.split.test_frac);
        if (const std::string* v = mf->find("run.dataset-checksum")) {
            expected_checksum = std::strtoull(v->c_str(), nullptr, 16);
            check_checksum = true;
        }
        if (opts.model.empty()) {
            const std::string* file = mf->find("run.model-file");
            const std::string name = file ? *file : "model.txt";
            opts.model =
                (std::filesystem::path(opts.manifest).parent_path() / name).string();
        }
        if (opts.subset.empty()) opts.subset = "test";
    }
    if (opts.subset.empty()) opts.subset = "all";
    if (opts.model.empty()) return usage_fail("evaluate needs --model or --manifest");
    if (opts.data.data.empty()) return usage_fail("evaluate needs --data or --manifest");

    if (int rc = load_scales_or_fail(opts.data.scales)) return rc;
    ModelPtr model(nullptr, &epn_model_free);
    if (int rc = load_model(opts.model, model)) return rc;
    DatasetPtr ds(nullptr, &epn_dataset_free);
    if (int rc = load_dataset(opts.data, ds)) return rc;

    if (check_checksum && epn_dataset_checksum(ds.get()) != expected_checksum) {
        std::fprintf(stderr,
                     "error: dataset checksum mismatch: manifest records %s, %s has %s\n",
                     fmt_checksum(expected_checksum).c_str(), opts.data.data.c_str(),
                     fmt_checksum(epn_dataset_checksum(ds.get())).c_str());
        return static_cast<int>(EPN_ERROR_DATA);
    }

    epn_eval_config config;
    epn_eval_config_init(&config);
    config.subset = subset_code(opts.subset);
    config.train_fraction = opts.split.train_frac;
    config.val_fraction = opts.split.val_frac;
    config.test_fraction = opts.split.test_frac;
    config.split_seed = opts.seed;
    config.recompute_features = opts.data.mode == "recompute" ? 1 : 0;

    epn_eval_result* raw = nullptr;
    const epn_status st = epn_evaluate(model.get(), ds.get(), &config, &raw);
    if (st != EPN_OK) return fail_status(st);
    EvalPtr result(raw, &epn_eval_result_free);

    std::fputs(opts.format == "csv" ? epn_eval_result_report_csv(result.get())
                                    : epn_eval_result_report_text(result.get()),
               stdout);

    std::error_code ec;
    std::filesystem::create_directories(opts.out, ec);
    if (ec) {
        std::fprintf(stderr, "error: cannot create output directory %s: %s\n",
                     opts.out.c_str(), ec.message().c_str());
        return static_cast<int>(EPN_ERROR_DATA);
    }
    const std::string text_path = opts.out + "/report.txt";
    const std::string csv_path = opts.out + "/report.csv";
    const std::string cm_path = opts.out + "/confusion.csv";
    if (!write_text(text_path, epn_eval_result_report_text(result.get())) ||
        !write_text(csv_path, epn_eval_result_report_csv(result.get())) ||
        !write_text(cm_path, epn_eval_result_confusion_csv(result.get()))) {
        std::fprintf(stderr, "error: cannot write into %s\n", opts.out.c_str());
        return static_cast<int>(EPN_ERROR_DATA);
    }
    std::printf("wrote %s, %s, %s\n", text_path.c_str(), csv_path.c_str(), cm_path.c_str());
    return 0;
}

// ---- predict ---------------------------------------------------------

struct PredictOpts {
    std::string model;
    std::string data;
    std::string out;
    std::string scales;
    bool from_sequences = false;
};

int run_predict(const PredictOpts& opts) {
    if (opts.model.empty()) return usage_fail("predict needs --model");
    if (opts.data.empty()) return usage_fail("predict needs --data");
    if (opts.out.empty()) return usage_fail("predict needs --out");
    if (int rc = load_scales_or_fail(opts.scales)) return rc;
    ModelPtr model(nullptr, &epn_model_free);
    if (int rc = load_model(opts.model, model)) return rc;
    const epn_status st = epn_predict_csv(model.get(), opts.data.c_str(), opts.out.c_str(),
                                          opts.from_sequences ? 1 : 0);
    if (st != EPN_OK) return fail_status(st);
    std::printf("wrote %s\n", opts.out.c_str());
    return 0;
}

// ---- importance -------------------------------------------------------

struct ImportanceOpts {
    DataOpts data;
    SplitOpts split;
    std::string model;
    std::string out;
    std::string metric = "accuracy";
    std::string subset = "all";
    size_t repeats = 10;
    uint64_t seed = 0;
};

int run_importance(const ImportanceOpts& opts) {
    if (opts.model.empty()) return usage_fail("importance needs --model");
    if (opts.data.data.empty()) return usage_fail("importance needs --data");
    if (opts.out.empty()) return usage_fail("importance needs --out");
    if (int rc = load_scales_or_fail(opts.data.scales)) return rc;
    ModelPtr model(nullptr, &epn_model_free);
    if (int rc = load_model(opts.model, model)) return rc;
    DatasetPtr ds(nullptr, &epn_dataset_free);
    if (int rc = load_dataset(opts.data, ds)) return rc;

    epn_eval_config config;
    epn_eval_config_init(&config);
    config.subset = subset_code(opts.subset);
    config.train_fraction = opts.split.train_frac;
    config.val_fraction = opts.split.val_frac;
    config.test_fraction = opts.split.test_frac;
    config.split_seed = opts.seed;
    config.recompute_features = opts.data.mode == "recompute" ? 1 : 0;

    epn_importance_result* raw = nullptr;
    const epn_status st = epn_importance(model.get(), ds.get(), &config, opts.metric.c_str(),
                                         opts.repeats, opts.seed, &raw);
    if (st != EPN_OK) return fail_status(st);
    ImportancePtr result(raw, &epn_importance_result_free);

    const char* csv = epn_importance_csv(result.get(), 1);
    std::fputs(csv, stdout);
    if (!write_text(opts.out, csv)) {
        std::fprintf(stderr, "error: cannot write %s\n", opts.out.c_str());
        return static_cast<int>(EPN_ERROR_DATA);
    }
    return 0;
}

void configure(CLI::App* cmd) {
    cmd->set_config("--config", "", "Read options from a flat key = value file");
    cmd->allow_config_extras(true);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"B-cell epitope prediction toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", epn_version());

    FeaturesOpts fo;
    auto* features = app.add_subcommand(
        "features", "Compute the eight descriptors for every row of a dataset CSV");
    configure(features);
    add_data_opts(features, fo.data);
    features->add_option("--out", fo.out, "Descriptor CSV output path");
    features->add_option("--summary", fo.summary, "Also write per-feature class summary CSV");
    features->add_option("--correlation", fo.correlation,
                         "Also write feature correlation matrix CSV");
    features->add_option("--compare", fo.compare,
                         "Also write passthrough vs recomputed comparison CSV");

    TrainOpts to;
    auto* train = app.add_subcommand("train", "Train a classifier and write run artifacts");
    configure(train);
    add_data_opts(train, to.data);
    add_split_opts(train, to.split);
    train->add_option("--out", to.out, "Output directory")->capture_default_str();
    train->add_option("--hidden", to.hidden, "Hidden layer widths, comma-separated")
        ->capture_default_str();
    train->add_option("--lr", to.lr, "Adam learning rate")->capture_default_str();
    train->add_option("--beta1", to.beta1, "Adam beta1")->capture_default_str();
    train->add_option("--beta2", to.beta2, "Adam beta2")->capture_default_str();
    train->add_option("--adam-eps", to.adam_eps, "Adam epsilon")->capture_default_str();
    train->add_option("--dropout", to.dropout, "Hidden layer dropout rate")
        ->capture_default_str();
    train->add_option("--batch", to.batch, "Minibatch size")->capture_default_str();
    train->add_option("--epochs", to.epochs, "Maximum epochs")->capture_default_str();
    train->add_option("--patience", to.patience, "Early stopping patience")
        ->capture_default_str();
    train->add_option("--seed", to.seed, "Master seed for split/init/shuffles/dropout")
        ->capture_default_str();
    train->add_option("--class-weight", to.class_weight, "Positive class loss weight")
        ->capture_default_str();
    train->add_option("--bce-clamp", to.bce_clamp, "Probability clamp inside the loss")
        ->capture_default_str();
    train->add_option("--threshold", to.threshold, "Decision threshold stored in the model")
        ->capture_default_str();

    EvaluateOpts eo;
    auto* evaluate =
        app.add_subcommand("evaluate", "Classification report + confusion matrix");
    configure(evaluate);
    add_data_opts(evaluate, eo.data);
    add_split_opts(evaluate, eo.split);
    evaluate->add_option("--model", eo.model, "Model file");
    evaluate->add_option("--manifest", eo.manifest,
                         "Run manifest; supplies data/model/split and verifies the "
                         "dataset checksum");
    evaluate->add_option("--subset", eo.subset,
                         "Rows to evaluate: all, train, val or test (default: all, or "
                         "test with --manifest)")
        ->check(CLI::IsMember({"all", "train", "val", "test"}));
    evaluate->add_option("--seed", eo.seed, "Split seed for non-all subsets")
        ->capture_default_str();
    evaluate->add_option("--out", eo.out, "Directory for report.txt/report.csv/confusion.csv")
        ->capture_default_str();
    evaluate->add_option("--format", eo.format, "Stdout report format: text or csv")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();

    PredictOpts po;
    auto* predict =
        app.add_subcommand("predict", "Append probability and label columns to a CSV");
    configure(predict);
    predict->add_option("--model", po.model, "Model file");
    predict->add_option("--data", po.data, "Input CSV path");
    predict->add_option("--out", po.out, "Output CSV path");
    predict->add_option("--scales", po.scales,
                        "Scale table directory (default: $EPINET_SCALES or data/scales)");
    predict->add_flag("--from-sequences", po.from_sequences,
                      "Input carries peptide_seq/protein_seq instead of feature columns");

    ImportanceOpts io;
    auto* importance =
        app.add_subcommand("importance", "Permutation feature importance CSV");
    configure(importance);
    add_data_opts(importance, io.data);
    add_split_opts(importance, io.split);
    importance->add_option("--model", io.model, "Model file");
    importance->add_option("--out", io.out, "Importance CSV output path");
    importance->add_option("--metric", io.metric, "Metric: accuracy or f1_positive")
        ->capture_default_str();
    importance->add_option("--subset", io.subset, "Rows to use: all, train, val or test")
        ->check(CLI::IsMember({"all", "train", "val", "test"}))
        ->capture_default_str();
    importance->add_option("--repeats", io.repeats, "Permutations per feature")
        ->capture_default_str();
    importance->add_option("--seed", io.seed, "Permutation seed (and split seed)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(EPN_ERROR_USAGE);
    }

    for (CLI::App* sub : app.get_subcommands()) {
        if (const int rc = apply_config_file(sub)) return rc;
    }

    if (features->parsed()) return run_features(fo);
    if (train->parsed()) return run_train(to);
    if (evaluate->parsed()) return run_evaluate(eo);
    if (predict->parsed()) return run_predict(po);
    if (importance->parsed()) return run_importance(io);
    return usage_fail("no subcommand given");
}
