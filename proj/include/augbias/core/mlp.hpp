#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/core/matrix.hpp"
#include "augbias/core/rng.hpp"

namespace augbias {

// Probabilities leaving a sigmoid head or entering a log are kept in
// [kProbEps, 1 - kProbEps].
inline constexpr double kProbEps = 1e-7;

enum class ActivationKind { relu, leaky_relu, tanh, sigmoid, linear, softmax };

struct Activation {
    ActivationKind kind = ActivationKind::linear;
    double slope = 0.0;  // leaky_relu only

    static Activation relu() { return {ActivationKind::relu, 0.0}; }
    static Activation leaky_relu(double slope = 0.2) { return {ActivationKind::leaky_relu, slope}; }
    static Activation tanh() { return {ActivationKind::tanh, 0.0}; }
    static Activation sigmoid() { return {ActivationKind::sigmoid, 0.0}; }
    static Activation linear() { return {ActivationKind::linear, 0.0}; }
    static Activation softmax() { return {ActivationKind::softmax, 0.0}; }

    friend bool operator==(const Activation&, const Activation&) = default;
};

inline std::string to_string(const Activation& a) {
    switch (a.kind) {
        case ActivationKind::relu: return "relu";
        case ActivationKind::leaky_relu: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "leaky_relu:%.17g", a.slope);
            return buf;
        }
        case ActivationKind::tanh: return "tanh";
        case ActivationKind::sigmoid: return "sigmoid";
        case ActivationKind::linear: return "linear";
        case ActivationKind::softmax: return "softmax";
    }
    return "?";
}

inline Activation parse_activation(const std::string& text) {
    if (text == "relu") return Activation::relu();
    if (text == "tanh") return Activation::tanh();
    if (text == "sigmoid") return Activation::sigmoid();
    if (text == "linear") return Activation::linear();
    if (text == "softmax") return Activation::softmax();
    if (text.rfind("leaky_relu", 0) == 0) {
        if (text.size() == 10) return Activation::leaky_relu();
        if (text[10] == ':') return Activation::leaky_relu(std::stod(text.substr(11)));
    }
    throw ParseError("unknown activation '" + text + "'");
}

// Layer sizes run input -> hidden... -> output; one activation per
// non-input layer.
struct MlpSpec {
    std::vector<std::size_t> layer_sizes;
    std::vector<Activation> activations;

    std::size_t input_size() const { return layer_sizes.front(); }
    std::size_t output_size() const { return layer_sizes.back(); }
    std::size_t layer_count() const { return activations.size(); }

    void validate() const {
        if (layer_sizes.size() < 3)
            throw InvalidSpec("MlpSpec: need input, at least one hidden layer, and output");
        if (activations.size() + 1 != layer_sizes.size())
            throw InvalidSpec("MlpSpec: one activation per non-input layer required");
        for (auto s : layer_sizes)
            if (s == 0) throw InvalidSpec("MlpSpec: layer sizes must be >= 1");
        for (std::size_t i = 0; i + 1 < activations.size(); ++i)
            if (activations[i].kind == ActivationKind::softmax)
                throw InvalidSpec("MlpSpec: softmax only allowed on the final layer");
    }

    friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

struct DenseLayer {
    Matrix weight;  // out x in
    std::vector<double> bias;

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Also used for gradients and optimizer moments, which share the shape.
struct MlpParams {
    std::vector<DenseLayer> layers;

    bool all_finite() const {
        for (const auto& l : layers) {
            if (!l.weight.all_finite()) return false;
            for (double b : l.bias)
                if (!std::isfinite(b)) return false;
        }
        return true;
    }

    MlpParams zeros_like() const {
        MlpParams out;
        for (const auto& l : layers)
            out.layers.push_back({Matrix(l.weight.rows(), l.weight.cols()),
                                  std::vector<double>(l.bias.size(), 0.0)});
        return out;
    }

    bool same_shape(const MlpParams& o) const {
        if (layers.size() != o.layers.size()) return false;
        for (std::size_t i = 0; i < layers.size(); ++i) {
            if (layers[i].weight.rows() != o.layers[i].weight.rows() ||
                layers[i].weight.cols() != o.layers[i].weight.cols() ||
                layers[i].bias.size() != o.layers[i].bias.size())
                return false;
        }
        return true;
    }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& l : layers) n += l.weight.size() + l.bias.size();
        return n;
    }

    // Visits every scalar parameter in a fixed order (layer, weights, bias).
    template <typename F>
    void for_each(F&& f) {
        for (auto& l : layers) {
            for (double& w : l.weight.data()) f(w);
            for (double& b : l.bias) f(b);
        }
    }
    template <typename F>
    void for_each(F&& f) const {
        for (const auto& l : layers) {
            for (double w : l.weight.data()) f(w);
            for (double b : l.bias) f(b);
        }
    }

    friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

inline void check_params(const MlpSpec& spec, const MlpParams& params) {
    if (params.layers.size() != spec.layer_count())
        throw InvalidInput("MlpParams: layer count does not match spec");
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        const auto& l = params.layers[i];
        if (l.weight.rows() != spec.layer_sizes[i + 1] || l.weight.cols() != spec.layer_sizes[i] ||
            l.bias.size() != spec.layer_sizes[i + 1])
            throw InvalidInput("MlpParams: layer " + std::to_string(i) + " shape mismatch");
    }
}

// Weights ~ normal(0, 0.02 * gain * sqrt(64 / fan_in)), biases 0. The fan-in
// factor is 1 for the 64-wide hidden layers of the default architectures and
// widens the draw for narrow inputs.
inline MlpParams init_params(const MlpSpec& spec, Rng& rng, double gain = 1.0) {
    spec.validate();
    MlpParams p;
    for (std::size_t i = 0; i + 1 < spec.layer_sizes.size(); ++i) {
        const std::size_t in = spec.layer_sizes[i];
        const std::size_t out = spec.layer_sizes[i + 1];
        const double stddev = 0.02 * gain * std::sqrt(64.0 / static_cast<double>(in));
        DenseLayer layer{Matrix(out, in), std::vector<double>(out, 0.0)};
        for (double& w : layer.weight.data()) w = rng.normal(0.0, stddev);
        p.layers.push_back(std::move(layer));
    }
    return p;
}

struct ForwardCache {
    std::vector<Matrix> inputs;          // input to each layer
    std::vector<Matrix> preactivations;  // z = x W^T + b
    std::vector<Matrix> outputs;         // activation(z)
};

struct ForwardResult {
    Matrix output;
    ForwardCache cache;
};

struct BackwardResult {
    MlpParams grads;
    Matrix input_grad;  // dL/d(batch), used to chain the discriminator into the generator
};

namespace detail {

inline double sigmoid(double z) noexcept {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline Matrix dense_forward(const DenseLayer& layer, const Matrix& x) {
    const std::size_t n = x.rows(), in = x.cols(), out = layer.weight.rows();
    Matrix z(n, out);
    for (std::size_t r = 0; r < n; ++r) {
        const double* xr = x.row(r).data();
        double* zr = z.row(r).data();
        for (std::size_t o = 0; o < out; ++o) {
            const double* w = layer.weight.row(o).data();
            double acc = layer.bias[o];
            for (std::size_t k = 0; k < in; ++k) acc += w[k] * xr[k];
            zr[o] = acc;
        }
    }
    return z;
}

inline Matrix activate(const Activation& act, const Matrix& z) {
    Matrix a(z.rows(), z.cols());
    const auto& zd = z.data();
    auto& ad = a.data();
    switch (act.kind) {
        case ActivationKind::relu:
            for (std::size_t i = 0; i < zd.size(); ++i) ad[i] = zd[i] > 0 ? zd[i] : 0.0;
            break;
        case ActivationKind::leaky_relu:
            for (std::size_t i = 0; i < zd.size(); ++i) ad[i] = zd[i] > 0 ? zd[i] : act.slope * zd[i];
            break;
        case ActivationKind::tanh:
            for (std::size_t i = 0; i < zd.size(); ++i) ad[i] = std::tanh(zd[i]);
            break;
        case ActivationKind::sigmoid:
            for (std::size_t i = 0; i < zd.size(); ++i)
                ad[i] = std::clamp(sigmoid(zd[i]), kProbEps, 1.0 - kProbEps);
            break;
        case ActivationKind::linear:
            ad = zd;
            break;
        case ActivationKind::softmax:
            for (std::size_t r = 0; r < z.rows(); ++r) {
                const auto zr = z.row(r);
                auto ar = a.row(r);
                const double mx = *std::max_element(zr.begin(), zr.end());
                double sum = 0.0;
                for (std::size_t c = 0; c < zr.size(); ++c) sum += (ar[c] = std::exp(zr[c] - mx));
                for (double& v : ar) v /= sum;
            }
            break;
    }
    return a;
}

// dL/dz from dL/da.
inline Matrix activation_backward(const Activation& act, const Matrix& z, const Matrix& a,
                                  const Matrix& grad) {
    Matrix dz(z.rows(), z.cols());
    const auto& zd = z.data();
    const auto& gd = grad.data();
    auto& out = dz.data();
    switch (act.kind) {
        case ActivationKind::relu:
            for (std::size_t i = 0; i < zd.size(); ++i) out[i] = zd[i] > 0 ? gd[i] : 0.0;
            break;
        case ActivationKind::leaky_relu:
            for (std::size_t i = 0; i < zd.size(); ++i)
                out[i] = zd[i] > 0 ? gd[i] : act.slope * gd[i];
            break;
        case ActivationKind::tanh:
            for (std::size_t i = 0; i < zd.size(); ++i) {
                const double t = std::tanh(zd[i]);
                out[i] = gd[i] * (1.0 - t * t);
            }
            break;
        case ActivationKind::sigmoid:
            // Zero where the output clamp is active, matching the clamped forward.
            for (std::size_t i = 0; i < zd.size(); ++i) {
                const double s = sigmoid(zd[i]);
                const bool clamped = s < kProbEps || s > 1.0 - kProbEps;
                out[i] = clamped ? 0.0 : gd[i] * s * (1.0 - s);
            }
            break;
        case ActivationKind::linear:
            out = gd;
            break;
        case ActivationKind::softmax:
            for (std::size_t r = 0; r < z.rows(); ++r) {
                const auto ar = a.row(r);
                const auto gr = grad.row(r);
                double dot = 0.0;
                for (std::size_t c = 0; c < ar.size(); ++c) dot += ar[c] * gr[c];
                auto dr = dz.row(r);
                for (std::size_t c = 0; c < ar.size(); ++c) dr[c] = ar[c] * (gr[c] - dot);
            }
            break;
    }
    return dz;
}

// Forward through a stack of dense layers without the MlpSpec shape rules,
// so single-layer models (logistic regression) share the same kernel.
inline ForwardResult forward_layers(const std::vector<DenseLayer>& layers,
                                    const std::vector<Activation>& acts, const Matrix& batch) {
    ForwardResult res;
    Matrix x = batch;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (x.cols() != layers[i].weight.cols())
            throw InvalidInput("forward: layer " + std::to_string(i) + " expects " +
                               std::to_string(layers[i].weight.cols()) + " inputs, got " +
                               std::to_string(x.cols()));
        Matrix z = dense_forward(layers[i], x);
        Matrix a = activate(acts[i], z);
        res.cache.inputs.push_back(std::move(x));
        res.cache.preactivations.push_back(std::move(z));
        x = a;
        res.cache.outputs.push_back(std::move(a));
    }
    res.output = std::move(x);
    return res;
}

// If `grad_is_preactivation`, `grad` is dL/dz of the last layer and the last
// activation's derivative is skipped (fused sigmoid/softmax + loss).
inline BackwardResult backward_layers(const std::vector<DenseLayer>& layers,
                                      const std::vector<Activation>& acts, const ForwardCache& cache,
                                      const Matrix& grad, bool grad_is_preactivation) {
    const std::size_t L = layers.size();
    if (cache.outputs.size() != L || cache.inputs.size() != L || cache.preactivations.size() != L)
        throw InvalidInput("backward: cache does not match the network");
    const Matrix& last = cache.outputs.back();
    if (grad.rows() != last.rows() || grad.cols() != last.cols())
        throw InvalidInput("backward: gradient shape does not match forward output");

    BackwardResult res;
    res.grads.layers.resize(L);
    Matrix g = grad;
    for (std::size_t li = L; li-- > 0;) {
        const DenseLayer& layer = layers[li];
        Matrix dz = (li == L - 1 && grad_is_preactivation)
                        ? std::move(g)
                        : activation_backward(acts[li], cache.preactivations[li],
                                              cache.outputs[li], g);
        const Matrix& x = cache.inputs[li];
        const std::size_t n = x.rows(), in = x.cols(), out = layer.weight.rows();
        DenseLayer d{Matrix(out, in), std::vector<double>(out, 0.0)};
        Matrix dx(n, in);
        for (std::size_t r = 0; r < n; ++r) {
            const double* xr = x.row(r).data();
            const double* dzr = dz.row(r).data();
            double* dxr = dx.row(r).data();
            for (std::size_t o = 0; o < out; ++o) {
                const double gz = dzr[o];
                if (gz == 0.0) continue;
                d.bias[o] += gz;
                double* dw = d.weight.row(o).data();
                const double* w = layer.weight.row(o).data();
                for (std::size_t k = 0; k < in; ++k) {
                    dw[k] += gz * xr[k];
                    dxr[k] += gz * w[k];
                }
            }
        }
        res.grads.layers[li] = std::move(d);
        g = std::move(dx);
    }
    res.input_grad = std::move(g);
    return res;
}

}  // namespace detail

inline ForwardResult forward(const MlpSpec& spec, const MlpParams& params, const Matrix& batch) {
    spec.validate();
    check_params(spec, params);
    if (batch.cols() != spec.input_size())
        throw InvalidInput("forward: batch has " + std::to_string(batch.cols()) +
                           " columns, network expects " + std::to_string(spec.input_size()));
    return detail::forward_layers(params.layers, spec.activations, batch);
}

// Gradient of the scalar batch loss with respect to every weight and bias,
// given dL/d(output) (or dL/d(last preactivation) when requested).
inline BackwardResult backward(const MlpSpec& spec, const MlpParams& params,
                               const ForwardCache& cache, const Matrix& loss_grad,
                               bool grad_is_preactivation = false) {
    spec.validate();
    check_params(spec, params);
    return detail::backward_layers(params.layers, spec.activations, cache, loss_grad,
                                   grad_is_preactivation);
}

}  // namespace augbias
