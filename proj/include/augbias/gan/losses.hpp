#pragma once

#include <algorithm>
#include <cmath>

#include "augbias/core/loss.hpp"
#include "augbias/core/matrix.hpp"
#include "augbias/gan/spec.hpp"

namespace augbias {

// Losses are written on discriminator logits l (D = sigmoid(l)). Gradients
// are with respect to the real and fake logits; an absent side is an empty
// 0x0 matrix for G losses that do not touch real logits.
struct GanLoss {
    double value = 0.0;
    Matrix real_grad;
    Matrix fake_grad;
};

namespace detail {

inline void require_column(const Matrix& m, const char* what) {
    if (m.cols() != 1 || m.rows() == 0)
        throw InvalidInput(std::string(what) + ": expected a non-empty column of logits");
}

// Cross-entropy of the softmax over every logit in the batch toward `w_real`
// mass on each real entry and `w_fake` on each fake entry.
inline GanLoss batch_softmax_ce(const Matrix& real, const Matrix& fake, double w_real, double w_fake) {
    double mx = -INFINITY;
    for (double v : real.data()) mx = std::max(mx, v);
    for (double v : fake.data()) mx = std::max(mx, v);
    double sum = 0.0;
    for (double v : real.data()) sum += std::exp(v - mx);
    for (double v : fake.data()) sum += std::exp(v - mx);
    const double log_z = mx + std::log(sum);

    GanLoss res{0.0, Matrix(real.rows(), 1), Matrix(fake.rows(), 1)};
    for (std::size_t i = 0; i < real.rows(); ++i) {
        const double logp = real(i, 0) - log_z;
        res.value -= w_real * logp;
        res.real_grad(i, 0) = std::exp(logp) - w_real;
    }
    for (std::size_t i = 0; i < fake.rows(); ++i) {
        const double logp = fake(i, 0) - log_z;
        res.value -= w_fake * logp;
        res.fake_grad(i, 0) = std::exp(logp) - w_fake;
    }
    return res;
}

}  // namespace detail

// vanilla / conditional / boundary_seeking:
//   -mean log D(real) - mean log(1 - D(fake))
// softmax: cross-entropy of the batch softmax toward uniform mass on the
//   real entries.
inline GanLoss d_loss(GanVariant variant, const Matrix& real_logits, const Matrix& fake_logits) {
    detail::require_column(real_logits, "d_loss");
    detail::require_column(fake_logits, "d_loss");
    if (variant == GanVariant::softmax)
        return detail::batch_softmax_ce(real_logits, fake_logits,
                                        1.0 / static_cast<double>(real_logits.rows()), 0.0);
    auto r = bce_with_logits(real_logits, Matrix(real_logits.rows(), 1, 1.0));
    auto f = bce_with_logits(fake_logits, Matrix(fake_logits.rows(), 1, 0.0));
    return {r.value + f.value, std::move(r.grad), std::move(f.grad)};
}

// vanilla / conditional: non-saturating -mean log D(fake).
// boundary_seeking: 0.5 * mean (log D - log(1 - D))^2 = 0.5 * mean l^2.
// softmax: cross-entropy of the batch softmax toward uniform mass on all
//   entries; only the fake logits carry generator gradient, so real_grad is
//   left empty.
inline GanLoss g_loss(GanVariant variant, const Matrix& fake_logits, const Matrix& real_logits = {}) {
    detail::require_column(fake_logits, "g_loss");
    const auto n = static_cast<double>(fake_logits.rows());
    GanLoss res{0.0, Matrix(), Matrix(fake_logits.rows(), 1)};
    switch (variant) {
        case GanVariant::vanilla:
        case GanVariant::conditional:
            for (std::size_t i = 0; i < fake_logits.rows(); ++i) {
                const double l = fake_logits(i, 0);
                res.value += detail::softplus(-l) / n;
                res.fake_grad(i, 0) = (detail::sigmoid(l) - 1.0) / n;
            }
            break;
        case GanVariant::boundary_seeking:
            for (std::size_t i = 0; i < fake_logits.rows(); ++i) {
                const double l = fake_logits(i, 0);
                res.value += 0.5 * l * l / n;
                res.fake_grad(i, 0) = l / n;
            }
            break;
        case GanVariant::softmax: {
            detail::require_column(real_logits, "g_loss");
            const double w = 1.0 / (n + static_cast<double>(real_logits.rows()));
            auto full = detail::batch_softmax_ce(real_logits, fake_logits, w, w);
            res.value = full.value;
            res.fake_grad = std::move(full.fake_grad);
            break;
        }
    }
    return res;
}

}  // namespace augbias
