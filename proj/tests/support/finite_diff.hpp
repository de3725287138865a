#pragma once

// Central finite-difference oracle, independent of every backward pass in
// the library: it only ever calls a scalar loss function.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "augbias/core/matrix.hpp"
#include "augbias/core/mlp.hpp"
#include "augbias/gan/trainer.hpp"

namespace augbias::oracle {

inline constexpr double kFdStep = 1e-5;
inline constexpr double kFdRelTol = 1e-4;

// |a - n| / max(|a|, |n|, floor). The floor keeps near-zero entries from
// producing meaningless ratios; it sits well below typical gradient scales.
inline double rel_err(double analytic, double numeric, double floor = 1e-6) {
    return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

inline double central_diff(double& x, const std::function<double()>& f, double h = kFdStep) {
    const double saved = x;
    x = saved + h;
    const double up = f();
    x = saved - h;
    const double down = f();
    x = saved;
    return (up - down) / (2.0 * h);
}

inline Matrix numeric_grad(Matrix& m, const std::function<double()>& f, double h = kFdStep) {
    Matrix g(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.size(); ++i) g.data()[i] = central_diff(m.data()[i], f, h);
    return g;
}

inline std::vector<double> numeric_grad(MlpParams& p, const std::function<double()>& f,
                                        double h = kFdStep) {
    std::vector<double> g;
    p.for_each([&](double& x) { g.push_back(central_diff(x, f, h)); });
    return g;
}

inline std::vector<double> flatten(const MlpParams& p) {
    std::vector<double> out;
    p.for_each([&](double x) { out.push_back(x); });
    return out;
}

inline double max_rel_err(const std::vector<double>& analytic, const std::vector<double>& numeric) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i)
        worst = std::max(worst, rel_err(analytic[i], numeric[i]));
    return worst;
}

inline double max_rel_err(const Matrix& analytic, const Matrix& numeric) {
    return max_rel_err(analytic.data(), numeric.data());
}

// relu and leaky_relu are not differentiable at 0. When a pre-activation
// sits within `margin` of the kink the stencil can straddle it and the
// difference quotient mixes both slopes, so such instances are redrawn.
inline constexpr double kKinkMargin = 1e-3;

inline bool near_kink(const MlpSpec& spec, const MlpParams& p, const Matrix& x, double margin = kKinkMargin) {
    const auto fw = forward(spec, p, x);
    for (std::size_t l = 0; l < spec.activations.size(); ++l) {
        const auto k = spec.activations[l].kind;
        if (k != ActivationKind::relu && k != ActivationKind::leaky_relu) continue;
        for (double z : fw.cache.preactivations[l].data())
            if (std::abs(z) < margin) return true;
    }
    return false;
}

// Both players of one GAN step: generator on z, discriminator on the real
// rows and on the generated rows.
inline bool near_kink(const GanSpec& spec, const MlpParams& gen, const MlpParams& disc, const Matrix& real,
                      const Matrix& z, const Matrix& real_onehot, const Matrix& fake_onehot,
                      double margin = kKinkMargin) {
    using namespace gan_detail;
    const Matrix gz = gen_input(spec, z, fake_onehot);
    if (near_kink(spec.gen, gen, gz, margin)) return true;
    const Matrix fake = forward(spec.gen, gen, gz).output;
    return near_kink(spec.disc, disc, disc_input(spec, real, real_onehot), margin) ||
           near_kink(spec.disc, disc, disc_input(spec, fake, fake_onehot), margin);
}

}  // namespace augbias::oracle
