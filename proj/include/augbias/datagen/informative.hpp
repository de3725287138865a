#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/distributions/fisher_f.hpp>

#include "augbias/core/error.hpp"
#include "augbias/datagen/dataset.hpp"

namespace augbias {

struct InformativeEstimate {
    std::size_t count = 0;
    std::vector<bool> flags;        // per feature
    std::vector<double> f_stats;    // per feature, +inf when within-class spread is zero
    double critical_value = 0.0;
};

// One-way ANOVA F test per feature across the classes present in `data`.
// A feature is informative when F exceeds the (1 - alpha) quantile of
// F(k - 1, n - k). Zero within-class variance with distinct class means
// gives F = +inf (informative); a constant feature has F = 0.
inline InformativeEstimate estimate_informative(const Dataset& data, double alpha = 0.01) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("estimate_informative: alpha must be in (0, 1)");
    const auto counts = data.class_counts();
    std::vector<std::size_t> present;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) continue;
        if (counts[c] < 2)
            throw InvalidInput("estimate_informative: class " + std::to_string(c) +
                               " has fewer than 2 samples");
        present.push_back(c);
    }
    if (present.size() < 2) throw InvalidInput("estimate_informative: need at least 2 classes");

    const std::size_t n = data.size(), d = data.dims(), k = present.size();
    const double df_between = static_cast<double>(k - 1);
    const double df_within = static_cast<double>(n - k);
    if (df_within <= 0) throw InvalidInput("estimate_informative: not enough samples");

    InformativeEstimate est;
    boost::math::fisher_f dist(df_between, df_within);
    est.critical_value = boost::math::quantile(dist, 1.0 - alpha);
    est.flags.assign(d, false);
    est.f_stats.assign(d, 0.0);

    std::vector<double> sum(counts.size()), mean(counts.size());
    for (std::size_t j = 0; j < d; ++j) {
        std::fill(sum.begin(), sum.end(), 0.0);
        double total = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            sum[data.labels[r]] += data.features(r, j);
            total += data.features(r, j);
        }
        const double grand = total / static_cast<double>(n);
        double ss_between = 0.0;
        for (auto c : present) {
            mean[c] = sum[c] / static_cast<double>(counts[c]);
            ss_between += static_cast<double>(counts[c]) * (mean[c] - grand) * (mean[c] - grand);
        }
        double ss_within = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double dev = data.features(r, j) - mean[data.labels[r]];
            ss_within += dev * dev;
        }
        double f = 0.0;
        if (ss_within > 0.0) f = (ss_between / df_between) / (ss_within / df_within);
        else if (ss_between > 0.0) f = std::numeric_limits<double>::infinity();
        est.f_stats[j] = f;
        est.flags[j] = f > est.critical_value;
        if (est.flags[j]) ++est.count;
    }
    return est;
}

}  // namespace augbias
