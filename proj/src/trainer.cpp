#include "epinet/trainer.hpp"

#include <numeric>

#include "epinet/errors.hpp"
#include "epinet/text.hpp"

namespace epinet {

void TrainConfig::validate() const {
    for (const std::size_t d : hidden_dims) {
        if (d == 0) throw Error(ErrorCode::InvalidArgument, "hidden dims must be positive");
    }
    if (!(learning_rate > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "learning_rate must be positive");
    }
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "beta1 and beta2 must lie in (0, 1)");
    }
    if (!(epsilon_adam > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon_adam must be positive");
    }
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "dropout_rate must lie in [0, 1)");
    }
    if (batch_size == 0) throw Error(ErrorCode::InvalidArgument, "batch_size must be positive");
    if (max_epochs == 0) throw Error(ErrorCode::InvalidArgument, "max_epochs must be positive");
    if (patience == 0) throw Error(ErrorCode::InvalidArgument, "patience must be positive");
    if (!(class_weight_positive > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "class_weight_positive must be positive");
    }
    if (!(bce_clamp > 0.0 && bce_clamp < 0.5)) {
        throw Error(ErrorCode::InvalidArgument, "bce_clamp must lie in (0, 0.5)");
    }
}

std::string TrainReport::loss_csv() const {
    std::string out = "epoch,train_loss,val_loss\n";
    for (std::size_t e = 0; e < train_loss.size(); ++e) {
        out += std::to_string(e + 1) + "," + g17(train_loss[e]) + "," + g17(val_loss[e]) + "\n";
    }
    return out;
}

namespace {

std::vector<FeatureVector> standardized(const Standardizer& st,
                                        const std::vector<FeatureVector>& vs) {
    std::vector<FeatureVector> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(st.apply(v));
    return out;
}

double eval_loss(const NetworkParams& params, const std::vector<FeatureVector>& set,
                 const TrainConfig& config) {
    std::vector<double> yhat;
    std::vector<int> y;
    yhat.reserve(set.size());
    y.reserve(set.size());
    for (const auto& v : set) {
        yhat.push_back(forward_eval(params, v.x).yhat);
        y.push_back(v.y);
    }
    return bce_loss(yhat, y, config.bce_clamp, config.class_weight_positive);
}

} // namespace

TrainResult train(const std::vector<FeatureVector>& train_set,
                  const std::vector<FeatureVector>& val_set, const TrainConfig& config) {
    config.validate();
    if (train_set.empty() || val_set.empty()) {
        throw Error(ErrorCode::InvalidArgument, "training and validation sets must be non-empty");
    }

    TrainResult result;
    result.standardizer = fit_standardizer(train_set);
    const std::vector<FeatureVector> train_std = standardized(result.standardizer, train_set);
    const std::vector<FeatureVector> val_std = standardized(result.standardizer, val_set);

    result.params = init_params(config.hidden_dims, config.seed);
    AdamState adam = AdamState::zeros_like(result.params);
    const AdamConfig adam_cfg = config.adam();

    Rng dropout_rng(derive_seed(config.seed, "dropout"));
    EarlyStopping stopper(config.patience);
    NetworkParams best_params = result.params;

    const std::size_t n = train_std.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(config.seed, "shuffle." + std::to_string(epoch)));
        shuffle_rng.shuffle(order);

        double epoch_loss_sum = 0.0;
        for (std::size_t begin = 0; begin < n; begin += config.batch_size) {
            const std::size_t end = std::min(begin + config.batch_size, n);
            const double inv_batch = 1.0 / static_cast<double>(end - begin);

            Gradients batch_grads = Gradients::zeros_like(result.params);
            for (std::size_t k = begin; k < end; ++k) {
                const FeatureVector& sample = train_std[order[k]];
                const ForwardCache cache =
                    forward_train(result.params, sample.x, config.dropout_rate, dropout_rng);
                epoch_loss_sum += bce_term(cache.yhat, sample.y, config.bce_clamp,
                                           config.class_weight_positive);
                const Gradients sample_grads = backward(result.params, cache, sample.y,
                                                        config.bce_clamp,
                                                        config.class_weight_positive);
                batch_grads.accumulate(sample_grads, inv_batch);
            }
            adam_step(result.params, batch_grads, adam, adam_cfg);
        }

        result.report.train_loss.push_back(epoch_loss_sum / static_cast<double>(n));
        const double val = eval_loss(result.params, val_std, config);
        result.report.val_loss.push_back(val);

        const double previous_best = stopper.best_loss();
        const bool stop = stopper.record(epoch, val);
        if (val < previous_best) best_params = result.params;
        if (stop) break;
    }

    result.report.stopped_epoch = result.report.train_loss.size();
    result.report.best_epoch = stopper.best_epoch();
    result.report.restored_best = result.report.best_epoch != result.report.stopped_epoch;
    if (result.report.restored_best) result.params = best_params;
    return result;
}

} // namespace epinet
