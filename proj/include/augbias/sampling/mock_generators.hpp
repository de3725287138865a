#pragma once

#include <algorithm>
#include <memory>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/datagen/dataset.hpp"
#include "augbias/sampling/bank.hpp"

namespace augbias {

// Reference generators with known behavior. They stand in for trained GANs
// when a test or a screen needs a controlled ground truth.

// Draws rows of class `cls` uniformly with replacement from `pool`. With a
// pool drawn from the true distribution this is a perfect generator.
inline SampleFn resample_generator(const Dataset& pool, std::size_t cls) {
    auto rows = std::make_shared<Matrix>();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (pool.labels[i] == cls) idx.push_back(i);
    if (idx.empty()) throw InvalidInput("resample_generator: class " + std::to_string(cls) + " absent from pool");
    *rows = pool.features.select_rows(idx);
    return [rows](std::size_t n, Rng& rng) {
        std::vector<std::size_t> pick(n);
        for (auto& p : pick) p = rng.uniform_int(rows->rows());
        return rows->select_rows(pick);
    };
}

// The `keep` rows of class `cls` nearest to the class row `anchor` (an
// index among that class's rows): one mode of a multi-modal class.
inline Dataset mode_rows(const Dataset& pool, std::size_t cls, std::size_t anchor, std::size_t keep) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (pool.labels[i] == cls) idx.push_back(i);
    if (idx.empty()) throw InvalidInput("mode_rows: class " + std::to_string(cls) + " absent from pool");
    if (keep == 0 || keep > idx.size()) throw InvalidInput("mode_rows: keep must be in [1, class size]");
    const auto a = pool.features.row(idx[anchor % idx.size()]);
    std::vector<std::pair<double, std::size_t>> dist;
    for (auto i : idx) {
        const auto r = pool.features.row(i);
        double d2 = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) d2 += (r[j] - a[j]) * (r[j] - a[j]);
        dist.push_back({d2, i});
    }
    std::stable_sort(dist.begin(), dist.end());
    std::vector<std::size_t> chosen;
    for (std::size_t k = 0; k < keep; ++k) chosen.push_back(dist[k].second);
    return pool.subset(chosen);
}

// Resamples one mode of the class: a generator that dropped the others.
inline SampleFn single_mode_generator(const Dataset& pool, std::size_t cls, std::size_t anchor, std::size_t keep) {
    return resample_generator(mode_rows(pool, cls, anchor, keep), cls);
}

// Emits `center` plus isotropic normal jitter: a fully collapsed generator.
inline SampleFn collapsed_generator(std::vector<double> center, double jitter = 0.0) {
    return [center = std::move(center), jitter](std::size_t n, Rng& rng) {
        Matrix out(n, center.size());
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t j = 0; j < center.size(); ++j)
                out(r, j) = center[j] + (jitter > 0.0 ? rng.normal(0.0, jitter) : 0.0);
        return out;
    };
}

// Per-feature mean of the rows of class `cls`.
inline std::vector<double> class_centroid(const Dataset& data, std::size_t cls) {
    std::vector<double> c(data.dims(), 0.0);
    std::size_t n = 0;
    for (std::size_t r = 0; r < data.size(); ++r) {
        if (data.labels[r] != cls) continue;
        ++n;
        for (std::size_t j = 0; j < data.dims(); ++j) c[j] += data.features(r, j);
    }
    if (n == 0) throw InvalidInput("class_centroid: class " + std::to_string(cls) + " absent");
    for (double& v : c) v /= static_cast<double>(n);
    return c;
}

// Registers a resample generator for every class of `pool` at `iteration`.
inline void add_resample_generators(GeneratorBank& bank, const Dataset& pool, std::size_t iteration) {
    for (std::size_t c = 0; c < pool.class_count; ++c) bank.add(c, iteration, resample_generator(pool, c));
}

}  // namespace augbias
