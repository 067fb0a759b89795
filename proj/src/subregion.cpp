#include "hintnet/subregion.hpp"

#include <cmath>
#include <omp.h>
#include <stdexcept>

#include "hintnet/kernels.hpp"

namespace hintnet::subregion {

Matrix pearson_adjacency_raw(const Matrix& series) {
    const std::size_t n = series.rows();
    const std::size_t days = series.cols();
    if (days < 2) throw std::runtime_error("pearson_adjacency: series length must be >= 2");
    const auto& k = kernels::active();

    // center each series and precompute its sum of squares
    Matrix centered(n, days);
    std::vector<double> ss(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double mean = k.sum(series.row(i), static_cast<int>(days)) /
                            static_cast<double>(days);
        for (std::size_t t = 0; t < days; ++t) centered(i, t) = series(i, t) - mean;
        ss[i] = k.dot(centered.row(i), centered.row(i), static_cast<int>(days));
    }

    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double r = 0.0;
            if (ss[i] > 0.0 && ss[j] > 0.0) {
                r = k.dot(centered.row(i), centered.row(j), static_cast<int>(days)) /
                    std::sqrt(ss[i] * ss[j]);
            }
            a(i, j) = r;
            a(j, i) = r;
        }
    }
    return a;
}

Matrix row_normalize_clamped(Matrix a) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j) < 0.0) a(i, j) = 0.0;
            s += a(i, j);
        }
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) /= s;
    }
    return a;
}

Matrix pearson_adjacency(const Matrix& series) {
    return row_normalize_clamped(pearson_adjacency_raw(series));
}

Matrix window_series(const Grid3<int>& counts, const std::vector<int>& days, int row,
                     int col, int w) {
    const int half = w / 2;
    Matrix out(static_cast<std::size_t>(w) * w, days.size());
    for (int wr = 0; wr < w; ++wr) {
        for (int wc = 0; wc < w; ++wc) {
            const int r = row - half + wr;
            const int c = col - half + wc;
            if (r < 0 || r >= static_cast<int>(counts.rows()) || c < 0 ||
                c >= static_cast<int>(counts.cols()))
                continue;  // padding cell: all-zero series
            double* dst = out.row(static_cast<std::size_t>(wr) * w + wc);
            for (std::size_t t = 0; t < days.size(); ++t)
                dst[t] = counts(r, c, days[t]);
        }
    }
    return out;
}

std::vector<double> extract_window(const Grid3<double>& tensor, int row, int col, int w) {
    const int half = w / 2;
    const int depth = static_cast<int>(tensor.depth());
    std::vector<double> out(static_cast<std::size_t>(w) * w * depth, 0.0);
    for (int wr = 0; wr < w; ++wr) {
        for (int wc = 0; wc < w; ++wc) {
            const int r = row - half + wr;
            const int c = col - half + wc;
            if (r < 0 || r >= static_cast<int>(tensor.rows()) || c < 0 ||
                c >= static_cast<int>(tensor.cols()))
                continue;
            double* dst = out.data() + (static_cast<std::size_t>(wr) * w + wc) * depth;
            const double* src = &tensor.raw()[(static_cast<std::size_t>(r) * tensor.cols() + c) *
                                              tensor.depth()];
            for (int k = 0; k < depth; ++k) dst[k] = src[k];
        }
    }
    return out;
}

void extract_window_day(const Grid4<double>& tensor, int row, int col, int w, int day,
                        double* out) {
    const int half = w / 2;
    const int ch = static_cast<int>(tensor.channels());
    for (int wr = 0; wr < w; ++wr) {
        for (int wc = 0; wc < w; ++wc) {
            double* dst = out + (static_cast<std::size_t>(wr) * w + wc) * ch;
            const int r = row - half + wr;
            const int c = col - half + wc;
            if (r < 0 || r >= static_cast<int>(tensor.rows()) || c < 0 ||
                c >= static_cast<int>(tensor.cols())) {
                for (int k = 0; k < ch; ++k) dst[k] = 0.0;
                continue;
            }
            const double* src =
                &tensor.raw()[((static_cast<std::size_t>(r) * tensor.cols() + c) *
                                   tensor.days() +
                               day) *
                              tensor.channels()];
            for (int k = 0; k < ch; ++k) dst[k] = src[k];
        }
    }
}

AdjacencyCache build_adjacency_cache(const Grid3<int>& counts,
                                     const Grid2<std::uint8_t>& mask,
                                     const std::vector<int>& train_days, int w) {
    const int rows = static_cast<int>(counts.rows());
    const int cols = static_cast<int>(counts.cols());
    AdjacencyCache cache(rows, cols, w);

    std::vector<std::pair<int, int>> road_cells;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (mask(r, c)) road_cells.emplace_back(r, c);

    std::vector<Matrix> mats(road_cells.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < static_cast<long>(road_cells.size()); ++i) {
        const auto [r, c] = road_cells[i];
        mats[i] = pearson_adjacency(window_series(counts, train_days, r, c, w));
    }
    for (std::size_t i = 0; i < road_cells.size(); ++i)
        cache.put(road_cells[i].first, road_cells[i].second, std::move(mats[i]));
    return cache;
}

}  // namespace hintnet::subregion
