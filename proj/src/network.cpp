#include "epinet/network.hpp"

#include <cmath>

#include "epinet/errors.hpp"

namespace epinet {

void NetworkParams::validate() const {
    if (layer_dims.size() < 2 || layer_dims.front() != kFeatureCount || layer_dims.back() != 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "layer_dims must be [" + std::to_string(kFeatureCount) + ", ..., 1]");
    }
    for (const std::size_t d : layer_dims) {
        if (d == 0) throw Error(ErrorCode::InvalidArgument, "layer dims must be positive");
    }
    if (weights.size() != layer_dims.size() - 1 || biases.size() != weights.size()) {
        throw Error(ErrorCode::InvalidArgument, "parameter count does not match layer_dims");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (weights[l].rows != layer_dims[l + 1] || weights[l].cols != layer_dims[l] ||
            biases[l].size() != layer_dims[l + 1]) {
            throw Error(ErrorCode::InvalidArgument,
                        "parameter shapes do not match layer_dims at layer " + std::to_string(l));
        }
    }
}

NetworkParams init_params(const std::vector<std::size_t>& hidden_dims, std::uint64_t seed) {
    NetworkParams params;
    params.layer_dims.push_back(kFeatureCount);
    for (const std::size_t d : hidden_dims) params.layer_dims.push_back(d);
    params.layer_dims.push_back(1);

    Rng rng(derive_seed(seed, "init"));
    for (std::size_t l = 0; l + 1 < params.layer_dims.size(); ++l) {
        const std::size_t fan_in = params.layer_dims[l];
        const std::size_t fan_out = params.layer_dims[l + 1];
        Matrix w(fan_out, fan_in);
        const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
        for (double& value : w.data) value = rng.normal() * scale;
        params.weights.push_back(std::move(w));
        params.biases.emplace_back(fan_out, 0.0);
    }
    params.validate();
    return params;
}

Gradients Gradients::zeros_like(const NetworkParams& params) {
    Gradients g;
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        g.weights.emplace_back(params.weights[l].rows, params.weights[l].cols);
        g.biases.emplace_back(params.biases[l].size(), 0.0);
    }
    return g;
}

void Gradients::accumulate(const Gradients& other, double scale) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (std::size_t i = 0; i < weights[l].data.size(); ++i) {
            weights[l].data[i] += scale * other.weights[l].data[i];
        }
        for (std::size_t i = 0; i < biases[l].size(); ++i) {
            biases[l][i] += scale * other.biases[l][i];
        }
    }
}

AdamState AdamState::zeros_like(const NetworkParams& params) {
    AdamState state;
    state.m = Gradients::zeros_like(params);
    state.v = Gradients::zeros_like(params);
    state.t = 0;
    return state;
}

namespace {

void adam_update_span(double* theta, double* m, double* v, const double* g, std::size_t n,
                      const AdamConfig& cfg, double bc1, double bc2) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        theta[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
}

} // namespace

void adam_step(NetworkParams& params, const Gradients& grads, AdamState& state,
               const AdamConfig& config) {
    state.t += 1;
    const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        adam_update_span(params.weights[l].data.data(), state.m.weights[l].data.data(),
                         state.v.weights[l].data.data(), grads.weights[l].data.data(),
                         params.weights[l].data.size(), config, bc1, bc2);
        adam_update_span(params.biases[l].data(), state.m.biases[l].data(),
                         state.v.biases[l].data(), grads.biases[l].data(),
                         params.biases[l].size(), config, bc1, bc2);
    }
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

namespace {

enum class MaskSource { None, Sample, Replay };

ForwardCache forward_impl(const NetworkParams& params,
                          const std::array<double, kFeatureCount>& x, MaskSource source,
                          double dropout_rate, Rng* rng,
                          const std::vector<std::vector<double>>* replay) {
    const std::size_t layers = params.layer_count();
    ForwardCache cache;
    cache.inputs.resize(layers);
    cache.pre.resize(layers);
    if (source != MaskSource::None) cache.masks.resize(layers - 1);

    std::vector<double> activation(x.begin(), x.end());
    for (std::size_t l = 0; l < layers; ++l) {
        cache.inputs[l] = activation;
        const Matrix& w = params.weights[l];
        std::vector<double> z(w.rows);
        for (std::size_t i = 0; i < w.rows; ++i) {
            double sum = params.biases[l][i];
            for (std::size_t j = 0; j < w.cols; ++j) {
                sum += w.at(i, j) * activation[j];
            }
            z[i] = sum;
        }
        cache.pre[l] = z;

        if (l + 1 == layers) {
            cache.yhat = sigmoid(z[0]);
            break;
        }

        activation.resize(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) activation[i] = relu(z[i]);

        if (source == MaskSource::Sample) {
            std::vector<double> mask(activation.size(), 1.0);
            if (dropout_rate > 0.0) {
                const double keep_scale = 1.0 / (1.0 - dropout_rate);
                for (double& mk : mask) {
                    mk = rng->bernoulli(dropout_rate) ? 0.0 : keep_scale;
                }
            }
            for (std::size_t i = 0; i < activation.size(); ++i) activation[i] *= mask[i];
            cache.masks[l] = std::move(mask);
        } else if (source == MaskSource::Replay) {
            const std::vector<double>& mask = (*replay)[l];
            for (std::size_t i = 0; i < activation.size(); ++i) activation[i] *= mask[i];
            cache.masks[l] = mask;
        }
    }
    return cache;
}

} // namespace

ForwardCache forward_eval(const NetworkParams& params,
                          const std::array<double, kFeatureCount>& x) {
    return forward_impl(params, x, MaskSource::None, 0.0, nullptr, nullptr);
}

ForwardCache forward_train(const NetworkParams& params,
                           const std::array<double, kFeatureCount>& x, double dropout_rate,
                           Rng& rng) {
    return forward_impl(params, x, MaskSource::Sample, dropout_rate, &rng, nullptr);
}

ForwardCache forward_masked(const NetworkParams& params,
                            const std::array<double, kFeatureCount>& x,
                            const std::vector<std::vector<double>>& masks) {
    return forward_impl(params, x, MaskSource::Replay, 0.0, nullptr, &masks);
}

namespace {

double clamp_prob(double yhat, double clamp) {
    if (yhat < clamp) return clamp;
    if (yhat > 1.0 - clamp) return 1.0 - clamp;
    return yhat;
}

} // namespace

double bce_term(double yhat, int y, double clamp, double pos_weight) {
    const double yc = clamp_prob(yhat, clamp);
    if (y == 1) return -pos_weight * std::log(yc);
    return -std::log(1.0 - yc);
}

double bce_loss(const std::vector<double>& yhat, const std::vector<int>& y, double clamp,
                double pos_weight) {
    if (yhat.size() != y.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    "prediction/label count mismatch: " + std::to_string(yhat.size()) + " vs " +
                        std::to_string(y.size()));
    }
    if (yhat.empty()) {
        throw Error(ErrorCode::InvalidArgument, "bce_loss needs a non-empty batch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < yhat.size(); ++i) {
        sum += bce_term(yhat[i], y[i], clamp, pos_weight);
    }
    return sum / static_cast<double>(yhat.size());
}

Gradients backward(const NetworkParams& params, const ForwardCache& cache, int y,
                   double clamp, double pos_weight) {
    const std::size_t layers = params.layer_count();
    Gradients grads = Gradients::zeros_like(params);

    // dL/dz at the output. In the clamped regions the loss does not depend
    // on yhat, so the whole gradient is zero there.
    const double yhat = cache.yhat;
    double dz;
    if (yhat < clamp || yhat > 1.0 - clamp) {
        dz = 0.0;
    } else if (y == 1) {
        dz = -pos_weight * (1.0 - yhat);
    } else {
        dz = yhat;
    }

    std::vector<double> delta = {dz};
    for (std::size_t l = layers; l-- > 0;) {
        const Matrix& w = params.weights[l];
        for (std::size_t i = 0; i < w.rows; ++i) {
            grads.biases[l][i] = delta[i];
            for (std::size_t j = 0; j < w.cols; ++j) {
                grads.weights[l].at(i, j) = delta[i] * cache.inputs[l][j];
            }
        }
        if (l == 0) break;

        std::vector<double> prev(w.cols, 0.0);
        for (std::size_t j = 0; j < w.cols; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < w.rows; ++i) {
                sum += w.at(i, j) * delta[i];
            }
            // Backward through dropout (replayed multiplier) and ReLU.
            if (!cache.masks.empty()) sum *= cache.masks[l - 1][j];
            prev[j] = cache.pre[l - 1][j] > 0.0 ? sum : 0.0;
        }
        delta = std::move(prev);
    }
    return grads;
}

double grad_check(const NetworkParams& params, const std::array<double, kFeatureCount>& x,
                  int y, double clamp, double pos_weight, double step,
                  const std::vector<std::vector<double>>* masks) {
    const auto run_forward = [&](const NetworkParams& p) {
        return masks ? forward_masked(p, x, *masks) : forward_eval(p, x);
    };
    const auto loss_at = [&](const NetworkParams& p) {
        return bce_term(run_forward(p).yhat, y, clamp, pos_weight);
    };

    const Gradients analytic = backward(params, run_forward(params), y, clamp, pos_weight);

    NetworkParams probe = params;
    double max_rel = 0.0;
    const auto check_one = [&](double& theta, double analytic_g) {
        const double saved = theta;
        theta = saved + step;
        const double up = loss_at(probe);
        theta = saved - step;
        const double down = loss_at(probe);
        theta = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double denom = std::max(std::abs(analytic_g) + std::abs(numeric), 1e-12);
        const double rel = std::abs(analytic_g - numeric) / denom;
        if (rel > max_rel) max_rel = rel;
    };

    for (std::size_t l = 0; l < probe.layer_count(); ++l) {
        for (std::size_t i = 0; i < probe.weights[l].data.size(); ++i) {
            check_one(probe.weights[l].data[i], analytic.weights[l].data[i]);
        }
        for (std::size_t i = 0; i < probe.biases[l].size(); ++i) {
            check_one(probe.biases[l][i], analytic.biases[l][i]);
        }
    }
    return max_rel;
}

} // namespace epinet
