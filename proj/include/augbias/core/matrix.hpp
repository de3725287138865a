#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/core/rng.hpp"

namespace augbias {

// Dense row-major matrix of doubles. Rows are samples, columns are features
// throughout the library.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw InvalidInput("Matrix: data length " + std::to_string(data_.size()) +
                               " != " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }

    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw InvalidInput("Matrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
    }

    void fill(double v) noexcept { std::fill(data_.begin(), data_.end(), v); }

    Matrix select_rows(std::span<const std::size_t> idx) const {
        Matrix out(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const auto src = row(idx[i]);
            std::copy(src.begin(), src.end(), out.row(i).begin());
        }
        return out;
    }

    void append_rows(const Matrix& other) {
        if (empty() && rows_ == 0) cols_ = other.cols_;
        if (other.cols_ != cols_) throw InvalidInput("append_rows: column mismatch");
        data_.insert(data_.end(), other.data_.begin(), other.data_.end());
        rows_ += other.rows_;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// [a | b], same row count.
inline Matrix hconcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw InvalidInput("hconcat: row mismatch");
    Matrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto dst = out.row(r);
        std::copy(a.row(r).begin(), a.row(r).end(), dst.begin());
        std::copy(b.row(r).begin(), b.row(r).end(), dst.begin() + static_cast<long>(a.cols()));
    }
    return out;
}

// Left `cols` columns.
inline Matrix left_cols(const Matrix& m, std::size_t cols) {
    Matrix out(m.rows(), cols);
    for (std::size_t r = 0; r < m.rows(); ++r)
        std::copy_n(m.row(r).begin(), cols, out.row(r).begin());
    return out;
}

inline Matrix one_hot(std::span<const std::size_t> labels, std::size_t classes) {
    Matrix out(labels.size(), classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= classes) throw InvalidInput("one_hot: label out of range");
        out(i, labels[i]) = 1.0;
    }
    return out;
}

inline Matrix standard_normal(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix out(rows, cols);
    for (double& v : out.data()) v = rng.normal();
    return out;
}

}  // namespace augbias
