#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "epinet/metrics.hpp"
#include "epinet/model.hpp"

namespace epinet {

enum class ImportanceMetric { Accuracy, F1Positive };

const char* importance_metric_name(ImportanceMetric metric);

struct FeatureImportance {
    double mean = 0.0;
    double stddev = 0.0;
};

struct ImportanceReport {
    std::array<FeatureImportance, kFeatureCount> features; // fixed feature order
    ImportanceMetric metric = ImportanceMetric::Accuracy;
    std::size_t repeats = 0;
    std::uint64_t seed = 0;
    double baseline = 0.0;
};

/// Permutation importance on raw feature vectors: baseline metric on the
/// intact set, then `repeats` independent seeded within-column shuffles per
/// feature; importance = mean(baseline - shuffled metric), stddev over
/// repeats (population). Each (feature, repeat) pair draws its own derived
/// seed, so repeats are order-independent and the whole report is
/// deterministic. Throws InvalidArgument (empty set or repeats = 0).
ImportanceReport permutation_importance(const Model& model,
                                        const std::vector<FeatureVector>& eval_set,
                                        ImportanceMetric metric, std::size_t repeats,
                                        std::uint64_t seed);

/// CSV `feature,importance_mean,importance_std`, optionally sorted by
/// descending mean (ties keep the fixed feature order).
std::string importance_csv(const ImportanceReport& report, bool sort_descending);

} // namespace epinet
