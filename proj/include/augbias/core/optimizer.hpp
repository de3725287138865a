#pragma once

#include <cmath>
#include <cstdint>

#include "augbias/core/error.hpp"
#include "augbias/core/mlp.hpp"

namespace augbias {

enum class OptimizerKind { sgd, adam };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::adam;
    double lr = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static OptimizerConfig sgd(double lr) { return {OptimizerKind::sgd, lr, 0.0, 0.0, 0.0}; }
    static OptimizerConfig adam(double lr = 2e-4, double beta1 = 0.5, double beta2 = 0.999,
                                double epsilon = 1e-8) {
        return {OptimizerKind::adam, lr, beta1, beta2, epsilon};
    }

    friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

class OptimizerState {
public:
    OptimizerState(OptimizerConfig config, const MlpParams& params)
        : config_(config), m_(params.zeros_like()), v_(params.zeros_like()) {}

    const OptimizerConfig& config() const noexcept { return config_; }
    std::uint64_t step_count() const noexcept { return step_; }
    const MlpParams& first_moment() const noexcept { return m_; }
    const MlpParams& second_moment() const noexcept { return v_; }

    // SGD: p -= lr * g.
    // Adam: m = b1 m + (1-b1) g; v = b2 v + (1-b2) g^2;
    //       p -= lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps).
    void step(MlpParams& params, const MlpParams& grads) {
        if (!params.same_shape(m_) || !grads.same_shape(m_))
            throw InvalidInput("optimizer_step: parameter/gradient shape mismatch");
        if (!grads.all_finite()) throw TrainingDiverged("optimizer_step: non-finite gradient");
        ++step_;
        if (config_.kind == OptimizerKind::sgd) {
            for (std::size_t l = 0; l < params.layers.size(); ++l) {
                sgd_update(params.layers[l].weight.data(), grads.layers[l].weight.data());
                sgd_update(params.layers[l].bias, grads.layers[l].bias);
            }
        } else {
            const double t = static_cast<double>(step_);
            const double c1 = 1.0 - std::pow(config_.beta1, t);
            const double c2 = 1.0 - std::pow(config_.beta2, t);
            for (std::size_t l = 0; l < params.layers.size(); ++l) {
                adam_update(params.layers[l].weight.data(), grads.layers[l].weight.data(),
                            m_.layers[l].weight.data(), v_.layers[l].weight.data(), c1, c2);
                adam_update(params.layers[l].bias, grads.layers[l].bias, m_.layers[l].bias,
                            v_.layers[l].bias, c1, c2);
            }
        }
        if (!params.all_finite()) throw TrainingDiverged("optimizer_step: parameters became non-finite");
    }

private:
    void sgd_update(std::vector<double>& p, const std::vector<double>& g) const {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= config_.lr * g[i];
    }

    void adam_update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                     std::vector<double>& v, double c1, double c2) const {
        const double b1 = config_.beta1, b2 = config_.beta2;
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * g[i];
            v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
            p[i] -= config_.lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.epsilon);
        }
    }

    OptimizerConfig config_;
    MlpParams m_;
    MlpParams v_;
    std::uint64_t step_ = 0;
};

inline void optimizer_step(OptimizerState& state, MlpParams& params, const MlpParams& grads) {
    state.step(params, grads);
}

}  // namespace augbias
