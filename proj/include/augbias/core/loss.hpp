#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "augbias/core/error.hpp"
#include "augbias/core/matrix.hpp"
#include "augbias/core/mlp.hpp"

namespace augbias {

struct LossResult {
    double value = 0.0;
    Matrix grad;  // dL/d(input of the loss), same shape as the input
};

namespace detail {

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidInput(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) +
                           "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                           "x" + std::to_string(b.cols()) + ")");
}

// log(1 + e^x) without overflow.
inline double softplus(double x) noexcept {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace detail

// Binary cross-entropy on probabilities, averaged over every entry.
// Predictions are clamped to [kProbEps, 1 - kProbEps] before the logs.
inline LossResult bce_loss(const Matrix& pred, const Matrix& target) {
    detail::require_same_shape(pred, target, "bce_loss");
    const auto n = static_cast<double>(pred.size());
    LossResult res{0.0, Matrix(pred.rows(), pred.cols())};
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double p = std::clamp(pred.data()[i], kProbEps, 1.0 - kProbEps);
        const double t = target.data()[i];
        res.value -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
        res.grad.data()[i] = (p - t) / (p * (1.0 - p) * n);
    }
    res.value /= n;
    return res;
}

// Binary cross-entropy on logits (sigmoid folded in), averaged over every
// entry. The gradient is taken with respect to the logits.
inline LossResult bce_with_logits(const Matrix& logits, const Matrix& target) {
    detail::require_same_shape(logits, target, "bce_with_logits");
    const auto n = static_cast<double>(logits.size());
    LossResult res{0.0, Matrix(logits.rows(), logits.cols())};
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double l = logits.data()[i];
        const double t = target.data()[i];
        res.value += detail::softplus(l) - t * l;
        res.grad.data()[i] = (detail::sigmoid(l) - t) / n;
    }
    res.value /= n;
    return res;
}

// Row-wise softmax.
inline Matrix softmax_rows(const Matrix& logits) {
    return detail::activate(Activation::softmax(), logits);
}

// Cross-entropy -sum t log softmax(l) per row, averaged over rows. The
// gradient with respect to the logits is (softmax(l) - t) / rows.
inline LossResult softmax_ce_loss(const Matrix& logits, const Matrix& target) {
    detail::require_same_shape(logits, target, "softmax_ce_loss");
    const auto n = static_cast<double>(logits.rows());
    LossResult res{0.0, Matrix(logits.rows(), logits.cols())};
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        const auto lr = logits.row(r);
        const auto tr = target.row(r);
        const double mx = *std::max_element(lr.begin(), lr.end());
        double sum = 0.0;
        for (double v : lr) sum += std::exp(v - mx);
        const double log_z = mx + std::log(sum);
        auto gr = res.grad.row(r);
        for (std::size_t c = 0; c < lr.size(); ++c) {
            const double logp = lr[c] - log_z;
            if (tr[c] != 0.0) res.value -= tr[c] * logp;
            gr[c] = (std::exp(logp) - tr[c]) / n;
        }
    }
    res.value /= n;
    return res;
}

}  // namespace augbias
