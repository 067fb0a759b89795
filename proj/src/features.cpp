#include <Eigen/Dense>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "hintnet/grid.hpp"

namespace hintnet::grid {

// Eigendecomposition of the road-cell graph Laplacian. Connected components
// are counted exactly (flood fill) so the null space is excluded without
// relying on an eigenvalue threshold.
int spectral_features(const RoadMask& mask, int n_spec, Grid3<double>& fs, int channel0) {
    const int rows = static_cast<int>(mask.mask.rows());
    const int cols = static_cast<int>(mask.mask.cols());

    std::vector<int> node_of(static_cast<std::size_t>(rows) * cols, -1);
    std::vector<std::pair<int, int>> cells;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (mask.mask(r, c)) {
                node_of[static_cast<std::size_t>(r) * cols + c] =
                    static_cast<int>(cells.size());
                cells.emplace_back(r, c);
            }
    const int n = static_cast<int>(cells.size());
    if (n == 0) throw std::runtime_error("spectral_features: road mask is empty");

    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const auto [r, c] = cells[i];
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const int rr = r + dr, cc = c + dc;
                if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
                const int j = node_of[static_cast<std::size_t>(rr) * cols + cc];
                if (j < 0) continue;
                lap(i, j) = -1.0;
                lap(i, i) += 1.0;
            }
        }
    }

    // connected components of the 8-neighbor road graph
    int n_components = 0;
    std::vector<int> comp(n, -1);
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = n_components;
        stack.assign(1, s);
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            const auto [r, c] = cells[i];
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
                    const int j = node_of[static_cast<std::size_t>(rr) * cols + cc];
                    if (j >= 0 && comp[j] < 0) {
                        comp[j] = n_components;
                        stack.push_back(j);
                    }
                }
            }
        }
        ++n_components;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectral_features: eigendecomposition failed");
    const auto& vecs = solver.eigenvectors();  // ascending eigenvalues

    const int filled = std::min(n_spec, n - n_components);
    if (filled < n_spec)
        std::cerr << "warning: road graph supports only " << std::max(filled, 0)
                  << " of " << n_spec << " spectral channels; padding with zeros\n";

    for (int k = 0; k < filled; ++k) {
        Eigen::VectorXd v = vecs.col(n_components + k);
        // sign convention: entry of largest magnitude positive; ties (up to
        // rounding) break toward the first index
        int arg = 0;
        for (int i = 1; i < n; ++i)
            if (std::fabs(v[i]) > std::fabs(v[arg]) * (1.0 + 1e-9)) arg = i;
        if (v[arg] < 0) v = -v;
        for (int i = 0; i < n; ++i) fs(cells[i].first, cells[i].second, channel0 + k) = v[i];
    }
    return std::max(filled, 0);
}

}  // namespace hintnet::grid
