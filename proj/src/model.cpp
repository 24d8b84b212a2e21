#include "epinet/model.hpp"

#include <sstream>

#include "epinet/errors.hpp"
#include "epinet/text.hpp"

namespace epinet {

double predict_proba(const Model& model, const std::array<double, kFeatureCount>& raw) {
    return forward_eval(model.params, model.standardizer.apply(raw)).yhat;
}

int predict_label(const Model& model, const std::array<double, kFeatureCount>& raw) {
    return predict_proba(model, raw) >= model.threshold ? 1 : 0;
}

namespace {

constexpr const char* kMagic = "epinet_model";
constexpr int kVersion = 1;

[[noreturn]] void schema_error(const std::string& message) {
    throw Error(ErrorCode::ModelSchemaMismatch, "model file: " + message);
}

class LineReader {
public:
    explicit LineReader(const std::string& text) : stream_(text) {}

    /// Next non-empty line split into tokens; fails if the file ended.
    std::vector<std::string> next(const char* context) {
        std::string line;
        while (std::getline(stream_, line)) {
            std::istringstream ls(line);
            std::vector<std::string> tokens;
            std::string tok;
            while (ls >> tok) tokens.push_back(tok);
            if (!tokens.empty()) return tokens;
        }
        schema_error(std::string("unexpected end of file, expected ") + context);
    }

private:
    std::istringstream stream_;
};

double parse_real(const std::string& token, const char* context) {
    const auto v = try_parse_double(token);
    if (!v) schema_error(std::string("bad number `") + token + "` in " + context);
    return *v;
}

std::size_t parse_count(const std::string& token, const char* context) {
    const auto v = try_parse_int(token);
    if (!v || *v < 0) schema_error(std::string("bad count `") + token + "` in " + context);
    return static_cast<std::size_t>(*v);
}

std::vector<std::string> expect(LineReader& reader, const char* keyword, std::size_t values) {
    auto tokens = reader.next(keyword);
    if (tokens[0] != keyword) {
        schema_error("expected `" + std::string(keyword) + "`, got `" + tokens[0] + "`");
    }
    if (tokens.size() != values + 1) {
        schema_error("`" + std::string(keyword) + "` expects " + std::to_string(values) +
                     " values, got " + std::to_string(tokens.size() - 1));
    }
    return tokens;
}

} // namespace

std::string model_to_text(const Model& model) {
    std::string out;
    out += std::string(kMagic) + " " + std::to_string(kVersion) + "\n";

    out += "layer_dims";
    for (const std::size_t d : model.params.layer_dims) out += " " + std::to_string(d);
    out += "\n";

    out += "features";
    for (const auto& name : kFeatureNames) out += " " + std::string(name);
    out += "\n";

    out += "threshold " + hexfloat(model.threshold) + "\n";

    out += "means";
    for (const double m : model.standardizer.means) out += " " + hexfloat(m);
    out += "\n";
    out += "stddevs";
    for (const double s : model.standardizer.stddevs) out += " " + hexfloat(s);
    out += "\n";
    out += "constant_flags";
    for (const bool f : model.standardizer.constant_feature) out += f ? " 1" : " 0";
    out += "\n";

    for (std::size_t l = 0; l < model.params.layer_count(); ++l) {
        const Matrix& w = model.params.weights[l];
        out += "layer " + std::to_string(l) + " " + std::to_string(w.rows) + " " +
               std::to_string(w.cols) + "\n";
        for (std::size_t i = 0; i < w.rows; ++i) {
            out += "w";
            for (std::size_t j = 0; j < w.cols; ++j) out += " " + hexfloat(w.at(i, j));
            out += "\n";
        }
        out += "b";
        for (const double b : model.params.biases[l]) out += " " + hexfloat(b);
        out += "\n";
    }
    out += "end\n";
    return out;
}

Model model_from_text(const std::string& text) {
    LineReader reader(text);

    auto magic = reader.next("header");
    if (magic.size() != 2 || magic[0] != kMagic) {
        schema_error("not a model file (bad magic)");
    }
    if (magic[1] != std::to_string(kVersion)) {
        schema_error("unsupported version `" + magic[1] + "`, expected " +
                     std::to_string(kVersion));
    }

    Model model;

    auto dims = reader.next("layer_dims");
    if (dims[0] != "layer_dims" || dims.size() < 3) schema_error("bad layer_dims line");
    for (std::size_t i = 1; i < dims.size(); ++i) {
        model.params.layer_dims.push_back(parse_count(dims[i], "layer_dims"));
    }

    auto features = expect(reader, "features", kFeatureCount);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        if (features[f + 1] != kFeatureNames[f]) {
            schema_error("feature order mismatch at position " + std::to_string(f) +
                         ": got `" + features[f + 1] + "`, expected `" +
                         std::string(kFeatureNames[f]) + "`");
        }
    }

    auto threshold = expect(reader, "threshold", 1);
    model.threshold = parse_real(threshold[1], "threshold");
    if (!(model.threshold >= 0.0 && model.threshold <= 1.0)) {
        schema_error("threshold outside [0, 1]");
    }

    auto means = expect(reader, "means", kFeatureCount);
    auto stddevs = expect(reader, "stddevs", kFeatureCount);
    auto flags = expect(reader, "constant_flags", kFeatureCount);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        model.standardizer.means[f] = parse_real(means[f + 1], "means");
        model.standardizer.stddevs[f] = parse_real(stddevs[f + 1], "stddevs");
        if (!(model.standardizer.stddevs[f] > 0.0)) schema_error("stddev must be positive");
        if (flags[f + 1] != "0" && flags[f + 1] != "1") schema_error("bad constant_flags");
        model.standardizer.constant_feature[f] = flags[f + 1] == "1";
    }

    for (std::size_t l = 0; l + 1 < model.params.layer_dims.size(); ++l) {
        auto header = expect(reader, "layer", 3);
        if (parse_count(header[1], "layer index") != l) schema_error("layer index out of order");
        const std::size_t rows = parse_count(header[2], "layer rows");
        const std::size_t cols = parse_count(header[3], "layer cols");
        if (rows != model.params.layer_dims[l + 1] || cols != model.params.layer_dims[l]) {
            schema_error("layer " + std::to_string(l) + " shape disagrees with layer_dims");
        }
        Matrix w(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            auto row = expect(reader, "w", cols);
            for (std::size_t j = 0; j < cols; ++j) {
                w.at(i, j) = parse_real(row[j + 1], "weights");
            }
        }
        model.params.weights.push_back(std::move(w));
        auto biases = expect(reader, "b", rows);
        std::vector<double> b(rows);
        for (std::size_t i = 0; i < rows; ++i) b[i] = parse_real(biases[i + 1], "biases");
        model.params.biases.push_back(std::move(b));
    }

    auto trailer = reader.next("end");
    if (trailer.size() != 1 || trailer[0] != "end") schema_error("missing `end` trailer");

    try {
        model.params.validate();
    } catch (const Error& e) {
        schema_error(e.what());
    }
    return model;
}

void save_model(const Model& model, const std::string& path) {
    write_file(path, model_to_text(model));
}

Model load_model(const std::string& path) { return model_from_text(read_file(path)); }

} // namespace epinet
