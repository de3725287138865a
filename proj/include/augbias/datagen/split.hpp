#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/core/rng.hpp"
#include "augbias/datagen/dataset.hpp"

namespace augbias {

struct SplitPair {
    Dataset train;
    Dataset test;
    double ratio = 0.5;  // train share
    bool stratified = false;
    std::vector<std::size_t> train_indices;  // rows of the source dataset
    std::vector<std::size_t> test_indices;
};

// Shuffle, then partition with round(ratio * n) rows in train. Stratified
// mode applies the rule per class, so each class keeps its proportion to
// within one sample.
inline SplitPair split(const Dataset& data, double ratio, bool stratified, Rng& rng) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidInput("split: ratio must be in (0, 1)");
    if (data.size() < 2) throw InvalidInput("split: need at least 2 samples");

    SplitPair out;
    out.ratio = ratio;
    out.stratified = stratified;
    auto take = [&](std::vector<std::size_t>& idx) {
        rng.shuffle(idx);
        auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(idx.size())));
        n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
        out.train_indices.insert(out.train_indices.end(), idx.begin(), idx.begin() + static_cast<long>(n_train));
        out.test_indices.insert(out.test_indices.end(), idx.begin() + static_cast<long>(n_train), idx.end());
    };

    if (stratified) {
        std::vector<std::vector<std::size_t>> by_class(data.class_count);
        for (std::size_t i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);
        for (std::size_t c = 0; c < by_class.size(); ++c) {
            if (by_class[c].empty()) continue;
            if (by_class[c].size() < 2)
                throw InvalidInput("split: class " + std::to_string(c) +
                                   " has fewer than 2 samples, cannot stratify");
            take(by_class[c]);
        }
        rng.shuffle(out.train_indices);
        rng.shuffle(out.test_indices);
    } else {
        std::vector<std::size_t> idx(data.size());
        std::iota(idx.begin(), idx.end(), 0);
        take(idx);
    }
    out.train = data.subset(out.train_indices);
    out.test = data.subset(out.test_indices);
    return out;
}

// One dataset per class id (in id order). Each keeps the full class
// universe so labels stay comparable across groups.
inline std::vector<Dataset> group_by_class(const Dataset& data) {
    std::vector<std::vector<std::size_t>> idx(data.class_count);
    for (std::size_t i = 0; i < data.size(); ++i) idx[data.labels[i]].push_back(i);
    std::vector<Dataset> groups;
    groups.reserve(idx.size());
    for (const auto& rows : idx) groups.push_back(data.subset(rows));
    return groups;
}

}  // namespace augbias
