#pragma once

#include <string>
#include <vector>

#include "epinet/metrics.hpp"
#include "epinet/model.hpp"

namespace epinet {

struct EvalOutput {
    ConfusionMatrix cm;
    ClassReport report;
};

/// Predicts every vector (raw features) and scores against its label.
EvalOutput evaluate_model(const Model& model, const std::vector<FeatureVector>& eval_set);

enum class PredictInput {
    Features,  // input CSV carries the eight feature columns
    Sequences, // input CSV carries peptide_seq + protein_seq; descriptors recomputed
};

/// Runs the model over an input CSV and returns the same CSV with
/// `probability` and `label` columns appended (input column order is
/// preserved). A header-only input yields a header-only output. Throws
/// MissingColumn / UnexpectedColumn on schema problems and BadValue on
/// unparseable rows (with the 1-based data row number).
std::string predict_csv(const Model& model, const std::string& csv_text, PredictInput input,
                        const ScaleRepository& scales);

} // namespace epinet
