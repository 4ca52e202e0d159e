#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedshield/rng.hpp"

namespace fedshield::nn {

// Feedforward binary classifier: sigmoid after every affine layer including
// the single output unit, inverted dropout on the hidden activations during
// training. All math in 64-bit.
struct ModelConfig {
    int input_dim = 0;
    std::vector<int> hidden_dims{8, 16, 8};
    double dropout_hidden = 0.5;     // after every hidden layer except the last
    double dropout_preoutput = 0.2;  // after the last hidden layer
    double learning_rate = 0.01;
    int batch_size = 32;
    int local_epochs = 1;

    void validate() const {
        if (input_dim <= 0) throw std::invalid_argument("model: input_dim must be positive");
        for (int d : hidden_dims)
            if (d <= 0) throw std::invalid_argument("model: hidden dims must be positive");
        if (dropout_hidden < 0 || dropout_hidden >= 1 || dropout_preoutput < 0 ||
            dropout_preoutput >= 1)
            throw std::invalid_argument("model: dropout probabilities must lie in [0,1)");
        // 0 is allowed here so a no-op training step stays expressible;
        // experiment configs reject it upstream.
        if (learning_rate < 0) throw std::invalid_argument("model: learning_rate must be >= 0");
        if (batch_size <= 0) throw std::invalid_argument("model: batch_size must be > 0");
        if (local_epochs < 0) throw std::invalid_argument("model: local_epochs must be >= 0");
    }

    std::vector<int> layer_dims() const {
        std::vector<int> dims;
        dims.push_back(input_dim);
        dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
        dims.push_back(1);
        return dims;
    }
};

// Flattened weights+biases in fixed layer order: per layer, the fan_out x
// fan_in weight block (row-major), then the fan_out biases.
using ParamVector = std::vector<double>;
using Gradients = std::vector<double>;

struct Samples {
    std::size_t n = 0, d = 0;
    std::vector<double> x;        // row-major n x d
    std::vector<std::uint8_t> y;  // 0/1

    std::span<const double> row(std::size_t i) const { return {x.data() + i * d, d}; }
};

inline std::size_t param_count(const ModelConfig& cfg) {
    auto dims = cfg.layer_dims();
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l)
        total += static_cast<std::size_t>(dims[l]) * static_cast<std::size_t>(dims[l + 1]) +
                 static_cast<std::size_t>(dims[l + 1]);
    return total;
}

// Glorot-uniform weights, zero biases.
inline ParamVector init_model(const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    auto dims = cfg.layer_dims();
    ParamVector params;
    params.reserve(param_count(cfg));
    Rng rng = derive_rng(seed, "model-init");
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const int fan_in = dims[l], fan_out = dims[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        for (int i = 0; i < fan_out * fan_in; ++i)
            params.push_back((2.0 * rng.uniform01() - 1.0) * bound);
        for (int i = 0; i < fan_out; ++i) params.push_back(0.0);
    }
    return params;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

namespace detail {

struct LayerView {
    const double* w; // fan_out x fan_in
    const double* b; // fan_out
    int fan_in, fan_out;
};

inline std::vector<LayerView> layer_views(const ModelConfig& cfg, const ParamVector& params) {
    auto dims = cfg.layer_dims();
    if (params.size() != param_count(cfg))
        throw std::invalid_argument("model: parameter vector has wrong length");
    std::vector<LayerView> views;
    const double* ptr = params.data();
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        LayerView v{ptr, ptr + dims[l] * dims[l + 1], dims[l], dims[l + 1]};
        views.push_back(v);
        ptr += dims[l] * dims[l + 1] + dims[l + 1];
    }
    return views;
}

inline double dropout_prob(const ModelConfig& cfg, std::size_t hidden_index) {
    return hidden_index + 1 == cfg.hidden_dims.size() ? cfg.dropout_preoutput
                                                      : cfg.dropout_hidden;
}

// Activations (post-dropout) for one sample, plus the keep/scale factor of
// each hidden unit so backprop sees the same masks.
struct TraceBuffers {
    std::vector<std::vector<double>> act;   // act[0] = input row
    std::vector<std::vector<double>> mask;  // per hidden layer: 0 or 1/(1-p)
};

inline double forward_one(const ModelConfig& cfg, const std::vector<LayerView>& layers,
                          std::span<const double> row, bool train, Rng* rng,
                          TraceBuffers* trace) {
    thread_local std::vector<double> cur, next;
    cur.assign(row.begin(), row.end());
    if (trace) {
        trace->act.assign(layers.size() + 1, {});
        trace->mask.assign(layers.size() - 1, {});
        trace->act[0] = cur;
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& L = layers[l];
        next.assign(static_cast<std::size_t>(L.fan_out), 0.0);
        for (int o = 0; o < L.fan_out; ++o) {
            const double* wrow = L.w + o * L.fan_in;
            double z = L.b[o];
            for (int i = 0; i < L.fan_in; ++i) z += wrow[i] * cur[static_cast<std::size_t>(i)];
            next[static_cast<std::size_t>(o)] = sigmoid(z);
        }
        const bool hidden = l + 1 < layers.size();
        if (hidden) {
            const double p = dropout_prob(cfg, l);
            if (train && p > 0.0) {
                if (!rng) throw std::invalid_argument("model: train mode needs an rng");
                if (trace) trace->mask[l].assign(next.size(), 0.0);
                const double scale = 1.0 / (1.0 - p);
                for (std::size_t o = 0; o < next.size(); ++o) {
                    const double keep = rng->bernoulli(p) ? 0.0 : scale;
                    next[o] *= keep;
                    if (trace) trace->mask[l][o] = keep;
                }
            } else if (trace) {
                trace->mask[l].assign(next.size(), 1.0);
            }
        }
        cur.swap(next);
        if (trace) trace->act[l + 1] = cur;
    }
    return cur[0];
}

} // namespace detail

// Predictions in (0,1). Train mode consumes dropout masks from rng.
inline std::vector<double> forward(const ModelConfig& cfg, const ParamVector& params,
                                   const Samples& batch, bool train = false, Rng* rng = nullptr) {
    if (batch.d != static_cast<std::size_t>(cfg.input_dim))
        throw std::invalid_argument("model: batch width " + std::to_string(batch.d) +
                                    " does not match input_dim " +
                                    std::to_string(cfg.input_dim));
    auto layers = detail::layer_views(cfg, params);
    std::vector<double> preds(batch.n);
    for (std::size_t i = 0; i < batch.n; ++i)
        preds[i] = detail::forward_one(cfg, layers, batch.row(i), train, rng, nullptr);
    return preds;
}

// Mean binary cross-entropy (probabilities clamped at 1e-12 inside the logs)
// and its gradient through the same dropout masks.
inline std::pair<double, Gradients> loss_and_backward(const ModelConfig& cfg,
                                                      const ParamVector& params,
                                                      const Samples& batch, bool train = false,
                                                      Rng* rng = nullptr) {
    if (batch.n == 0) throw std::invalid_argument("model: empty batch");
    if (batch.d != static_cast<std::size_t>(cfg.input_dim))
        throw std::invalid_argument("model: batch width does not match input_dim");
    auto layers = detail::layer_views(cfg, params);
    auto dims = cfg.layer_dims();

    Gradients grads(params.size(), 0.0);
    // per-layer offsets into the flat vector
    std::vector<std::size_t> w_off(layers.size()), b_off(layers.size());
    {
        std::size_t off = 0;
        for (std::size_t l = 0; l < layers.size(); ++l) {
            w_off[l] = off;
            off += static_cast<std::size_t>(dims[l]) * static_cast<std::size_t>(dims[l + 1]);
            b_off[l] = off;
            off += static_cast<std::size_t>(dims[l + 1]);
        }
    }

    constexpr double eps = 1e-12;
    double loss = 0.0;
    detail::TraceBuffers trace;
    std::vector<double> delta, prev_delta;

    for (std::size_t s = 0; s < batch.n; ++s) {
        const double label = batch.y[s];
        const double p = detail::forward_one(cfg, layers, batch.row(s), train, rng, &trace);
        const double pc = std::min(std::max(p, eps), 1.0 - eps);
        loss += -(label * std::log(pc) + (1.0 - label) * std::log(1.0 - pc));

        // output delta: d(mean BCE)/dz for the sigmoid output
        delta.assign(1, (p - label) / static_cast<double>(batch.n));
        for (std::size_t l = layers.size(); l-- > 0;) {
            const auto& L = layers[l];
            const auto& below = trace.act[l];
            for (int o = 0; o < L.fan_out; ++o) {
                const double d = delta[static_cast<std::size_t>(o)];
                grads[b_off[l] + static_cast<std::size_t>(o)] += d;
                double* gw = grads.data() + w_off[l] + static_cast<std::size_t>(o * L.fan_in);
                for (int i = 0; i < L.fan_in; ++i) gw[i] += d * below[static_cast<std::size_t>(i)];
            }
            if (l == 0) break;
            prev_delta.assign(static_cast<std::size_t>(L.fan_in), 0.0);
            for (int i = 0; i < L.fan_in; ++i) {
                double acc = 0.0;
                for (int o = 0; o < L.fan_out; ++o)
                    acc += L.w[o * L.fan_in + i] * delta[static_cast<std::size_t>(o)];
                // through dropout (mask of hidden layer l-1) and its sigmoid
                const double a_masked = trace.act[l][static_cast<std::size_t>(i)];
                const double keep = trace.mask[l - 1][static_cast<std::size_t>(i)];
                const double a_raw = keep > 0.0 ? a_masked / keep : 0.0;
                prev_delta[static_cast<std::size_t>(i)] =
                    acc * keep * a_raw * (1.0 - a_raw);
            }
            delta.swap(prev_delta);
        }
    }
    loss /= static_cast<double>(batch.n);
    if (!std::isfinite(loss))
        throw std::runtime_error("model: non-finite training loss (diverged)");
    return {loss, std::move(grads)};
}

// Adam hyperparameters for local training. The stacked sigmoids squash
// per-sample signal so hard that unscaled gradient steps at this learning
// rate never leave the ln(2) loss plateau; the per-parameter normalization
// is what makes the configured rate usable.
inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

// Mini-batch local fit over the shard; returns the updated full parameter
// vector. Optimizer state is fresh per call: every round starts local
// training from the broadcast parameters alone.
inline ParamVector train_local(const ModelConfig& cfg, const ParamVector& global,
                               const Samples& shard, std::uint64_t seed) {
    if (shard.n == 0) throw std::invalid_argument("model: cannot train on an empty shard");
    cfg.validate();
    ParamVector params = global;
    ParamVector m(params.size(), 0.0), v(params.size(), 0.0);
    Rng rng = derive_rng(seed, "local-train");

    std::vector<std::uint32_t> order(shard.n);
    std::iota(order.begin(), order.end(), 0u);
    Samples batch;
    batch.d = shard.d;

    long step = 0;
    for (int epoch = 0; epoch < cfg.local_epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < shard.n;
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(shard.n, start + static_cast<std::size_t>(cfg.batch_size));
            batch.n = stop - start;
            batch.x.assign(batch.n * batch.d, 0.0);
            batch.y.assign(batch.n, 0);
            for (std::size_t i = start; i < stop; ++i) {
                auto row = shard.row(order[i]);
                std::copy(row.begin(), row.end(), batch.x.begin() + (i - start) * batch.d);
                batch.y[i - start] = shard.y[order[i]];
            }
            auto [loss, grads] = loss_and_backward(cfg, params, batch, true, &rng);
            (void)loss;
            ++step;
            const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
            for (std::size_t j = 0; j < params.size(); ++j) {
                m[j] = kAdamBeta1 * m[j] + (1.0 - kAdamBeta1) * grads[j];
                v[j] = kAdamBeta2 * v[j] + (1.0 - kAdamBeta2) * grads[j] * grads[j];
                params[j] -=
                    cfg.learning_rate * (m[j] / bc1) / (std::sqrt(v[j] / bc2) + kAdamEps);
            }
        }
    }
    return params;
}

// Accuracy with the 0.5 threshold; a prediction of exactly 0.5 counts as 1.
inline double evaluate(const ModelConfig& cfg, const ParamVector& params, const Samples& test) {
    if (test.n == 0) throw std::invalid_argument("model: empty test set");
    auto preds = forward(cfg, params, test, false, nullptr);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.n; ++i)
        correct += (preds[i] >= 0.5 ? 1 : 0) == test.y[i];
    return static_cast<double>(correct) / static_cast<double>(test.n);
}

} // namespace fedshield::nn
