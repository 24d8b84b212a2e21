#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "epinet/dataset.hpp"
#include "epinet/network.hpp"

namespace epinet {

struct TrainConfig {
    std::vector<std::size_t> hidden_dims = {64, 32};
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon_adam = 1e-8;
    double dropout_rate = 0.3;
    std::size_t batch_size = 32;
    std::size_t max_epochs = 200;
    std::size_t patience = 10;
    std::uint64_t seed = 0;
    double class_weight_positive = 1.0;
    double bce_clamp = 1e-7;

    void validate() const; // throws InvalidArgument

    AdamConfig adam() const { return {learning_rate, beta1, beta2, epsilon_adam}; }
};

/// Loss history and stopping bookkeeping. Epochs are 1-based; both series
/// have exactly stopped_epoch entries.
struct TrainReport {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::size_t best_epoch = 0;
    std::size_t stopped_epoch = 0;
    bool restored_best = false;

    /// CSV "epoch,train_loss,val_loss".
    std::string loss_csv() const;
};

/// Stop once the monitored loss has not strictly improved for `patience`
/// consecutive epochs.
class EarlyStopping {
public:
    explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

    /// Records epoch (1-based); returns true when training should stop.
    bool record(std::size_t epoch, double loss) {
        if (loss < best_loss_) {
            best_loss_ = loss;
            best_epoch_ = epoch;
        }
        return epoch - best_epoch_ >= patience_;
    }

    std::size_t best_epoch() const { return best_epoch_; }
    double best_loss() const { return best_loss_; }

private:
    std::size_t patience_;
    std::size_t best_epoch_ = 0;
    double best_loss_ = std::numeric_limits<double>::infinity();
};

struct TrainResult {
    NetworkParams params;
    Standardizer standardizer;
    TrainReport report;
};

/// Full deterministic training loop over raw (unstandardized) features:
/// fits the standardizer on the training split only, applies it to both
/// splits, then runs seeded mini-batch Adam with inverted dropout and early
/// stopping on full-pass validation loss, restoring the best-epoch
/// parameters.
TrainResult train(const std::vector<FeatureVector>& train_set,
                  const std::vector<FeatureVector>& val_set, const TrainConfig& config);

} // namespace epinet
