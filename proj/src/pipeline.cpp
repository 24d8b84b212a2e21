#include "epinet/pipeline.hpp"

#include <cmath>
#include <unordered_map>

#include "epinet/csv.hpp"
#include "epinet/errors.hpp"
#include "epinet/sequence.hpp"
#include "epinet/text.hpp"

namespace epinet {

EvalOutput evaluate_model(const Model& model, const std::vector<FeatureVector>& eval_set) {
    std::vector<int> labels;
    std::vector<int> predictions;
    labels.reserve(eval_set.size());
    predictions.reserve(eval_set.size());
    for (const auto& v : eval_set) {
        labels.push_back(v.y);
        predictions.push_back(predict_label(model, v.x));
    }
    EvalOutput out;
    out.cm = confusion(labels, predictions);
    out.report = classification_report(out.cm);
    return out;
}

namespace {

std::size_t find_column(const csv::Row& header, const std::string& name) {
    std::size_t found = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            if (found != header.size()) {
                throw Error(ErrorCode::UnexpectedColumn, "duplicate column `" + name + "`");
            }
            found = i;
        }
    }
    if (found == header.size()) {
        throw Error(ErrorCode::MissingColumn, "missing column `" + name + "`");
    }
    return found;
}

[[noreturn]] void bad_row(std::size_t row_no, const std::string& message) {
    throw Error(ErrorCode::BadValue, "data row " + std::to_string(row_no) + ": " + message);
}

} // namespace

std::string predict_csv(const Model& model, const std::string& csv_text, PredictInput input,
                        const ScaleRepository& scales) {
    const csv::Table table = csv::parse(csv_text);
    if (table.header.empty()) {
        throw Error(ErrorCode::MissingColumn, "input has no header row");
    }

    std::array<std::size_t, kFeatureCount> feature_cols{};
    std::size_t peptide_col = 0;
    std::size_t protein_col = 0;
    if (input == PredictInput::Features) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            feature_cols[f] = find_column(table.header, std::string(kFeatureNames[f]));
        }
    } else {
        peptide_col = find_column(table.header, "peptide_seq");
        protein_col = find_column(table.header, "protein_seq");
    }

    csv::Row out_header = table.header;
    out_header.emplace_back("probability");
    out_header.emplace_back("label");
    std::string out = csv::format_row(out_header);

    std::unordered_map<std::string, std::array<double, 4>> protein_cache;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const csv::Row& row = table.rows[r];
        const std::size_t row_no = r + 1;
        if (row.size() != table.header.size()) {
            bad_row(row_no, "wrong field count (got " + std::to_string(row.size()) +
                                ", expected " + std::to_string(table.header.size()) + ")");
        }

        std::array<double, kFeatureCount> x{};
        if (input == PredictInput::Features) {
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                const auto v = try_parse_double(row[feature_cols[f]]);
                if (!v || !std::isfinite(*v)) {
                    bad_row(row_no, "bad " + std::string(kFeatureNames[f]) + " value `" +
                                        row[feature_cols[f]] + "`");
                }
                x[f] = *v;
            }
        } else {
            std::string peptide;
            std::string protein;
            try {
                peptide = validate_sequence(row[peptide_col]);
                protein = validate_sequence(row[protein_col]);
            } catch (const Error& e) {
                bad_row(row_no, e.what());
            }
            x[0] = chou_fasman(peptide, scales);
            x[1] = emini(peptide, scales);
            x[2] = kolaskar_tongaonkar(peptide, scales);
            x[3] = parker(peptide, scales);
            auto it = protein_cache.find(protein);
            if (it == protein_cache.end()) {
                const std::array<double, 4> prot = {
                    isoelectric_point(protein, scales.pka),
                    aromaticity(protein),
                    gravy(protein, scales),
                    instability_index(protein, scales.diwv),
                };
                it = protein_cache.emplace(protein, prot).first;
            }
            for (std::size_t f = 0; f < 4; ++f) x[4 + f] = it->second[f];
        }

        const double probability = predict_proba(model, x);
        csv::Row out_row = row;
        out_row.push_back(g17(probability));
        out_row.push_back(probability >= model.threshold ? "1" : "0");
        out += csv::format_row(out_row);
    }
    return out;
}

} // namespace epinet
