#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/core/matrix.hpp"
#include "augbias/core/rng.hpp"
#include "augbias/datagen/dataset.hpp"

namespace augbias {

struct SynthSpec {
    std::size_t n_samples = 100;
    std::size_t n_features = 20;
    std::size_t n_informative = 2;
    std::size_t n_redundant = 0;
    std::size_t n_classes = 2;
    std::size_t clusters_per_class = 2;
    double class_sep = 1.0;
    double flip_y = 0.0;
    bool shuffle = true;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_samples == 0 || n_features == 0 || n_informative == 0 || n_classes == 0 ||
            clusters_per_class == 0)
            throw InvalidSpec("SynthSpec: counts must be >= 1");
        if (n_informative + n_redundant > n_features)
            throw InvalidSpec("SynthSpec: n_informative + n_redundant > n_features");
        const std::size_t clusters = n_classes * clusters_per_class;
        if (n_informative < 63 && clusters > (std::size_t{1} << n_informative))
            throw InvalidSpec("SynthSpec: n_classes * clusters_per_class > 2^n_informative");
        if (!(class_sep > 0.0)) throw InvalidSpec("SynthSpec: class_sep must be positive");
        if (!(flip_y >= 0.0 && flip_y < 1.0)) throw InvalidSpec("SynthSpec: flip_y must be in [0, 1)");
        if (n_samples < clusters)
            throw InvalidSpec("SynthSpec: n_samples smaller than the number of clusters");
    }

    friend bool operator==(const SynthSpec&, const SynthSpec&) = default;
};

// Sample count for the variable-size setting: samples scale with the
// feature count at the ratio 500 samples per 784 features.
inline std::size_t variable_setting_samples(std::size_t n_features) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(n_features) * 500.0 / 784.0));
}

namespace detail {

// `count` distinct vertices of the unit hypercube in `dims` dimensions,
// entries in {0, 1}. The first min(dims, 30) coordinates are drawn as
// distinct integers; any coordinates beyond 30 are filled with random bits.
inline std::vector<std::vector<double>> hypercube_vertices(std::size_t count, std::size_t dims,
                                                           Rng& rng) {
    const std::size_t head = std::min<std::size_t>(dims, 30);
    const std::uint64_t space = std::uint64_t{1} << head;
    std::set<std::uint64_t> seen;
    std::vector<std::uint64_t> codes;
    while (codes.size() < count) {
        const auto code = rng.uniform_int(space);
        if (seen.insert(code).second) codes.push_back(code);
    }
    std::vector<std::vector<double>> out(count, std::vector<double>(dims, 0.0));
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t j = 0; j < head; ++j)
            out[k][j] = static_cast<double>((codes[k] >> j) & 1u);
        for (std::size_t j = head; j < dims; ++j)
            out[k][j] = static_cast<double>(rng.uniform_int(2));
    }
    return out;
}

}  // namespace detail

// Hypercube-cluster classification generator, following the published
// algorithm of scikit-learn's make_classification:
//
//  1. choose n_classes * clusters_per_class distinct hypercube vertices and
//     scale them to {-class_sep, +class_sep}
//  2. informative block: standard normal, then per cluster multiplied by a
//     random matrix with entries U(-1, 1) and shifted onto its vertex;
//     cluster k gets class k mod n_classes, samples split evenly with the
//     remainder going to the first clusters
//  3. redundant block = informative block times a U(-1, 1) matrix
//  4. remaining columns standard normal noise
//  5. each label replaced by a uniform random class with probability flip_y
//  6. rows shuffled, then columns shuffled; the column permutation and the
//     final positions of the informative columns are kept in meta
inline Dataset make_classification(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const std::size_t n = spec.n_samples, d = spec.n_features, k_inf = spec.n_informative;
    const std::size_t n_red = spec.n_redundant;
    const std::size_t clusters = spec.n_classes * spec.clusters_per_class;

    auto centroids = detail::hypercube_vertices(clusters, k_inf, rng);
    for (auto& c : centroids)
        for (double& v : c) v = v * 2.0 * spec.class_sep - spec.class_sep;

    Matrix x(n, d);
    std::vector<std::size_t> y(n, 0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < k_inf; ++j) x(r, j) = rng.normal();

    std::vector<std::size_t> per_cluster(clusters, n / clusters);
    for (std::size_t i = 0; i < n % clusters; ++i) ++per_cluster[i];

    std::size_t start = 0;
    std::vector<double> tmp(k_inf);
    for (std::size_t k = 0; k < clusters; ++k) {
        const std::size_t stop = start + per_cluster[k];
        Matrix a(k_inf, k_inf);
        for (double& v : a.data()) v = 2.0 * rng.uniform() - 1.0;
        for (std::size_t r = start; r < stop; ++r) {
            y[r] = k % spec.n_classes;
            for (std::size_t j = 0; j < k_inf; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < k_inf; ++i) acc += x(r, i) * a(i, j);
                tmp[j] = acc;
            }
            for (std::size_t j = 0; j < k_inf; ++j) x(r, j) = tmp[j] + centroids[k][j];
        }
        start = stop;
    }

    if (n_red > 0) {
        Matrix b(k_inf, n_red);
        for (double& v : b.data()) v = 2.0 * rng.uniform() - 1.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t j = 0; j < n_red; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < k_inf; ++i) acc += x(r, i) * b(i, j);
                x(r, k_inf + j) = acc;
            }
    }

    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = k_inf + n_red; j < d; ++j) x(r, j) = rng.normal();

    if (spec.flip_y > 0.0) {
        for (std::size_t r = 0; r < n; ++r)
            if (rng.uniform() < spec.flip_y)
                y[r] = static_cast<std::size_t>(rng.uniform_int(spec.n_classes));
    }

    std::vector<std::size_t> rows(n), cols(d);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    if (spec.shuffle) {
        rng.shuffle(rows);
        rng.shuffle(cols);
    }

    Dataset out;
    out.features = Matrix(n, d);
    out.labels.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        out.labels[r] = y[rows[r]];
        for (std::size_t j = 0; j < d; ++j) out.features(r, j) = x(rows[r], cols[j]);
    }
    out.class_count = spec.n_classes;
    out.meta.name = "make_classification";
    out.meta.declared_informative = k_inf;
    out.meta.seed = spec.seed;
    out.meta.column_permutation = cols;
    for (std::size_t j = 0; j < d; ++j)
        if (cols[j] < k_inf) out.meta.informative_columns.push_back(j);

    const auto counts = out.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] == 0)
            throw InvalidSpec("make_classification: label flipping emptied class " +
                              std::to_string(c) + "; increase n_samples or lower flip_y");
    return out;
}

}  // namespace augbias
