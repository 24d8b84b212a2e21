#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "epinet/descriptors.hpp"
#include "epinet/rng.hpp"

namespace epinet {

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data; // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Dense network parameters. layer_dims = [8, hidden..., 1]; weights[l] has
/// shape dims[l+1] x dims[l].
struct NetworkParams {
    std::vector<std::size_t> layer_dims;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    std::size_t layer_count() const { return weights.size(); }

    /// Shape consistency; first dim 8, last dim 1. Throws InvalidArgument.
    void validate() const;
};

/// He initialization: weights ~ N(0, 2/fan_in), biases zero. The stream is
/// derived from the seed, so identical seeds give bit-identical parameters.
NetworkParams init_params(const std::vector<std::size_t>& hidden_dims, std::uint64_t seed);

/// Same shapes as the parameters they differentiate.
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    static Gradients zeros_like(const NetworkParams& params);
    void accumulate(const Gradients& other, double scale);
};

struct AdamState {
    Gradients m;
    Gradients v;
    std::uint64_t t = 0;

    static AdamState zeros_like(const NetworkParams& params);
};

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// One Adam update: t <- t+1, moment recurrences, bias correction,
/// theta <- theta - lr * mhat / (sqrt(vhat) + eps).
void adam_step(NetworkParams& params, const Gradients& grads, AdamState& state,
               const AdamConfig& config);

inline double relu(double x) { return x > 0.0 ? x : 0.0; }
double sigmoid(double z);

/// Everything backprop needs from one forward pass: the input of each
/// layer, each pre-activation, the dropout multiplier applied to each
/// hidden activation (empty in eval mode), and the output probability.
struct ForwardCache {
    std::vector<std::vector<double>> inputs; // inputs[l] feeds layer l; size L
    std::vector<std::vector<double>> pre;    // pre-activations z_l; size L
    std::vector<std::vector<double>> masks;  // per hidden layer: 0 or 1/(1-rate)
    double yhat = 0.0;
};

ForwardCache forward_eval(const NetworkParams& params,
                          const std::array<double, kFeatureCount>& x);

/// Train-mode forward: inverted dropout on hidden activations, masks drawn
/// from `rng` (one Bernoulli per hidden unit; nothing is drawn when rate
/// is 0). Survivors are scaled by 1/(1-rate).
ForwardCache forward_train(const NetworkParams& params,
                           const std::array<double, kFeatureCount>& x,
                           double dropout_rate, Rng& rng);

/// Replays previously sampled masks; used by the finite-difference checker.
ForwardCache forward_masked(const NetworkParams& params,
                            const std::array<double, kFeatureCount>& x,
                            const std::vector<std::vector<double>>& masks);

/// One clamped cross-entropy term: -[w y log yc + (1-y) log(1-yc)] with
/// yc = clamp(yhat) into [clamp, 1-clamp] and w = pos_weight.
double bce_term(double yhat, int y, double clamp, double pos_weight);

/// Mean of bce_term over a batch. Throws LengthMismatch and InvalidArgument
/// on an empty batch.
double bce_loss(const std::vector<double>& yhat, const std::vector<int>& y, double clamp,
                double pos_weight);

/// Exact gradients of one sample's clamped BCE w.r.t. every weight and
/// bias. Dropout masks in the cache are replayed, never resampled. In the
/// clamped regions the loss is constant in yhat, so the gradient there is
/// exactly zero.
Gradients backward(const NetworkParams& params, const ForwardCache& cache, int y,
                   double clamp, double pos_weight);

/// Central-difference check of backward() on one sample; returns
/// max over parameters of |analytic - numeric| / max(|analytic| + |numeric|, 1e-12).
/// Pass masks to pin dropout; null means eval mode.
double grad_check(const NetworkParams& params, const std::array<double, kFeatureCount>& x,
                  int y, double clamp, double pos_weight, double step,
                  const std::vector<std::vector<double>>* masks = nullptr);

} // namespace epinet
