#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace hintnet {

// Dense row-major matrix of doubles. Storage type for model parameters,
// adjacency matrices and per-cell feature blocks; arithmetic lives in
// hintnet::kernels.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), d_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return d_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return d_[r * cols_ + c];
    }

    double* data() { return d_.data(); }
    const double* data() const { return d_.data(); }
    double* row(std::size_t r) { return d_.data() + r * cols_; }
    const double* row(std::size_t r) const { return d_.data() + r * cols_; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return d_.size(); }
    bool empty() const { return d_.empty(); }

    void fill(double v) { d_.assign(d_.size(), v); }
    void resize(std::size_t rows, std::size_t cols, double fill = 0.0) {
        rows_ = rows;
        cols_ = cols;
        d_.assign(rows * cols, fill);
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && d_ == o.d_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> d_;
};

// Gridded [rows x cols] layer, element type T (road masks, level maps,
// aggregated counts).
template <typename T>
class Grid2 {
public:
    Grid2() = default;
    Grid2(std::size_t rows, std::size_t cols, T fill = T())
        : rows_(rows), cols_(cols), d_(rows * cols, fill) {}

    T& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return d_[r * cols_ + c];
    }
    T operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return d_[r * cols_ + c];
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return d_.size(); }
    bool empty() const { return d_.empty(); }
    const std::vector<T>& raw() const { return d_; }
    std::vector<T>& raw() { return d_; }

    bool operator==(const Grid2& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && d_ == o.d_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> d_;
};

// [rows x cols x depth] tensor, depth = days or channels.
template <typename T>
class Grid3 {
public:
    Grid3() = default;
    Grid3(std::size_t rows, std::size_t cols, std::size_t depth, T fill = T())
        : rows_(rows), cols_(cols), depth_(depth), d_(rows * cols * depth, fill) {}

    T& operator()(std::size_t r, std::size_t c, std::size_t k) {
        assert(r < rows_ && c < cols_ && k < depth_);
        return d_[(r * cols_ + c) * depth_ + k];
    }
    T operator()(std::size_t r, std::size_t c, std::size_t k) const {
        assert(r < rows_ && c < cols_ && k < depth_);
        return d_[(r * cols_ + c) * depth_ + k];
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t depth() const { return depth_; }
    std::size_t size() const { return d_.size(); }
    bool empty() const { return d_.empty(); }
    const std::vector<T>& raw() const { return d_; }
    std::vector<T>& raw() { return d_; }

private:
    std::size_t rows_ = 0, cols_ = 0, depth_ = 0;
    std::vector<T> d_;
};

// [rows x cols x days x channels] tensor (spatio-temporal features).
template <typename T>
class Grid4 {
public:
    Grid4() = default;
    Grid4(std::size_t rows, std::size_t cols, std::size_t days, std::size_t channels,
          T fill = T())
        : rows_(rows), cols_(cols), days_(days), channels_(channels),
          d_(rows * cols * days * channels, fill) {}

    T& operator()(std::size_t r, std::size_t c, std::size_t t, std::size_t k) {
        assert(r < rows_ && c < cols_ && t < days_ && k < channels_);
        return d_[((r * cols_ + c) * days_ + t) * channels_ + k];
    }
    T operator()(std::size_t r, std::size_t c, std::size_t t, std::size_t k) const {
        assert(r < rows_ && c < cols_ && t < days_ && k < channels_);
        return d_[((r * cols_ + c) * days_ + t) * channels_ + k];
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t days() const { return days_; }
    std::size_t channels() const { return channels_; }
    std::size_t size() const { return d_.size(); }
    bool empty() const { return d_.empty(); }
    const std::vector<T>& raw() const { return d_; }
    std::vector<T>& raw() { return d_; }

private:
    std::size_t rows_ = 0, cols_ = 0, days_ = 0, channels_ = 0;
    std::vector<T> d_;
};

}  // namespace hintnet
