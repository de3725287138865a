#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/core/matrix.hpp"

namespace augbias {

struct DatasetMeta {
    std::string name;
    std::optional<std::size_t> declared_informative;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> label_names;        // id -> original category (CSV input)
    std::vector<std::string> feature_names;      // column headers, empty = f0..f{d-1}
    std::vector<std::size_t> column_permutation; // generated column j came from pre-shuffle column perm[j]
    std::vector<std::size_t> informative_columns;

    friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

// Labeled feature matrix. Labels are class ids in [0, class_count).
struct Dataset {
    Matrix features;
    std::vector<std::size_t> labels;
    std::size_t class_count = 0;
    DatasetMeta meta;

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t dims() const noexcept { return features.cols(); }

    std::vector<std::size_t> class_counts() const {
        std::vector<std::size_t> counts(class_count, 0);
        for (auto l : labels) ++counts.at(l);
        return counts;
    }

    // allow_missing_classes covers splits and per-class subsets, which may
    // legitimately lack some ids.
    void validate(bool allow_missing_classes = false) const {
        if (labels.size() != features.rows())
            throw InvalidInput("Dataset: " + std::to_string(labels.size()) + " labels for " +
                               std::to_string(features.rows()) + " rows");
        for (auto l : labels)
            if (l >= class_count)
                throw InvalidInput("Dataset: label " + std::to_string(l) + " >= class_count " +
                                   std::to_string(class_count));
        if (!features.all_finite()) throw InvalidInput("Dataset: non-finite feature value");
        if (!allow_missing_classes) {
            const auto counts = class_counts();
            for (std::size_t c = 0; c < counts.size(); ++c)
                if (counts[c] == 0)
                    throw InvalidInput("Dataset: class " + std::to_string(c) + " has no samples");
        }
    }

    Dataset subset(std::span<const std::size_t> idx) const {
        Dataset out;
        out.features = features.select_rows(idx);
        out.labels.reserve(idx.size());
        for (auto i : idx) out.labels.push_back(labels[i]);
        out.class_count = class_count;
        out.meta = meta;
        return out;
    }

    void append(const Dataset& other) {
        if (size() == 0 && features.cols() == 0) {
            features = Matrix(0, other.dims());
            if (class_count == 0) class_count = other.class_count;
        }
        if (other.dims() != dims()) throw InvalidInput("Dataset::append: feature width mismatch");
        if (other.class_count != class_count)
            throw InvalidInput("Dataset::append: class universe mismatch");
        features.append_rows(other.features);
        labels.insert(labels.end(), other.labels.begin(), other.labels.end());
    }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace augbias
