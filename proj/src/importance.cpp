#include "epinet/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "epinet/csv.hpp"
#include "epinet/errors.hpp"
#include "epinet/text.hpp"

namespace epinet {

const char* importance_metric_name(ImportanceMetric metric) {
    return metric == ImportanceMetric::Accuracy ? "accuracy" : "f1_positive";
}

namespace {

double metric_value(const Model& model, const std::vector<std::array<double, kFeatureCount>>& xs,
                    const std::vector<int>& ys, ImportanceMetric metric) {
    std::vector<int> predictions;
    predictions.reserve(xs.size());
    for (const auto& x : xs) predictions.push_back(predict_label(model, x));
    const ConfusionMatrix cm = confusion(ys, predictions);
    if (metric == ImportanceMetric::Accuracy) {
        return static_cast<double>(cm.tn + cm.tp) / static_cast<double>(cm.total());
    }
    return classification_report(cm).positive.f1;
}

} // namespace

ImportanceReport permutation_importance(const Model& model,
                                        const std::vector<FeatureVector>& eval_set,
                                        ImportanceMetric metric, std::size_t repeats,
                                        std::uint64_t seed) {
    if (eval_set.empty()) {
        throw Error(ErrorCode::InvalidArgument, "permutation importance needs a non-empty set");
    }
    if (repeats == 0) {
        throw Error(ErrorCode::InvalidArgument, "repeats must be at least 1");
    }

    std::vector<std::array<double, kFeatureCount>> xs;
    std::vector<int> ys;
    xs.reserve(eval_set.size());
    ys.reserve(eval_set.size());
    for (const auto& v : eval_set) {
        xs.push_back(v.x);
        ys.push_back(v.y);
    }

    ImportanceReport report;
    report.metric = metric;
    report.repeats = repeats;
    report.seed = seed;
    report.baseline = metric_value(model, xs, ys, metric);

    const std::size_t n = xs.size();
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        std::vector<double> drops(repeats);
        for (std::size_t r = 0; r < repeats; ++r) {
            Rng rng(derive_seed(seed, "importance.f" + std::to_string(f) + ".r" +
                                          std::to_string(r)));
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            rng.shuffle(perm);

            std::vector<std::array<double, kFeatureCount>> shuffled = xs;
            for (std::size_t i = 0; i < n; ++i) {
                shuffled[i][f] = xs[perm[i]][f];
            }
            drops[r] = report.baseline - metric_value(model, shuffled, ys, metric);
        }
        double sum = 0.0;
        for (const double d : drops) sum += d;
        const double mean = sum / static_cast<double>(repeats);
        double sq = 0.0;
        for (const double d : drops) sq += (d - mean) * (d - mean);
        report.features[f].mean = mean;
        report.features[f].stddev = std::sqrt(sq / static_cast<double>(repeats));
    }
    return report;
}

std::string importance_csv(const ImportanceReport& report, bool sort_descending) {
    std::array<std::size_t, kFeatureCount> order;
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (sort_descending) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return report.features[a].mean > report.features[b].mean;
        });
    }
    std::string out = "feature,importance_mean,importance_std\n";
    for (const std::size_t f : order) {
        out += csv::format_row({std::string(kFeatureNames[f]), g17(report.features[f].mean),
                                g17(report.features[f].stddev)});
    }
    return out;
}

} // namespace epinet
