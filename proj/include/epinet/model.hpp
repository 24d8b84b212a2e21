#pragma once

#include <string>

#include "epinet/dataset.hpp"
#include "epinet/network.hpp"

namespace epinet {

/// A trained classifier: network parameters, the standardizer fitted on
/// its training split, and the decision threshold.
struct Model {
    NetworkParams params;
    Standardizer standardizer;
    double threshold = 0.5;
};

/// Eval-mode probability for a raw (unstandardized) feature vector.
double predict_proba(const Model& model, const std::array<double, kFeatureCount>& raw);

/// 1 iff probability >= threshold (ties classify as positive).
int predict_label(const Model& model, const std::array<double, kFeatureCount>& raw);

/// Versioned structured-text encoding. All reals are written as hexfloats,
/// so save -> load round-trips every parameter bit-exactly.
std::string model_to_text(const Model& model);

/// Throws ModelSchemaMismatch on any structural problem (wrong magic or
/// version, feature order mismatch, bad shapes or counts, unparseable
/// numbers, missing trailer).
Model model_from_text(const std::string& text);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

} // namespace epinet
