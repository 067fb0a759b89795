#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "hintnet/grid.hpp"
#include "hintnet/matrix.hpp"

namespace hintnet::subregion {

// Pearson correlation of the w^2 window-cell accident series (one row per
// cell, columns are training days). Zero-variance series (including the
// all-zero series of padding cells) correlate 0 with everything else and 1
// with themselves.
Matrix pearson_adjacency_raw(const Matrix& series);

// raw + clamp negatives to 0 + row-normalize. Rows sum to 1 (diagonal is 1,
// entries nonnegative, so every row sum is >= 1 before normalizing).
Matrix pearson_adjacency(const Matrix& series);

Matrix row_normalize_clamped(Matrix a);

// w x w window of the per-cell count series around (row, col) over the given
// days: output is [w^2 x days.size()], zero rows for cells outside the grid.
Matrix window_series(const Grid3<int>& counts, const std::vector<int>& days, int row,
                     int col, int w);

// w x w x depth window of a static tensor, flattened row-major; zero-filled
// outside grid bounds.
std::vector<double> extract_window(const Grid3<double>& tensor, int row, int col, int w);

// same for one day slice of a 4-d tensor
void extract_window_day(const Grid4<double>& tensor, int row, int col, int w, int day,
                        double* out);

// One adjacency per center cell, computed once from training-period counts.
class AdjacencyCache {
public:
    AdjacencyCache() = default;
    AdjacencyCache(int rows, int cols, int w) : rows_(rows), cols_(cols), w_(w) {}

    int w() const { return w_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::shared_ptr<const Matrix> get(int row, int col) const {
        auto it = by_cell_.find(key(row, col));
        return it == by_cell_.end() ? nullptr : it->second;
    }
    void put(int row, int col, Matrix a) {
        by_cell_[key(row, col)] = std::make_shared<const Matrix>(std::move(a));
    }
    std::size_t size() const { return by_cell_.size(); }

private:
    long key(int row, int col) const { return static_cast<long>(row) * cols_ + col; }
    int rows_ = 0, cols_ = 0, w_ = 0;
    std::unordered_map<long, std::shared_ptr<const Matrix>> by_cell_;
};

// Builds adjacencies for every road cell from the training-day count series.
AdjacencyCache build_adjacency_cache(const Grid3<int>& counts,
                                     const Grid2<std::uint8_t>& mask,
                                     const std::vector<int>& train_days, int w);

}  // namespace hintnet::subregion
