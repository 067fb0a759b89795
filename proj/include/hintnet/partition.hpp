#pragma once

#include <cstdint>
#include <vector>

#include "hintnet/matrix.hpp"

namespace hintnet::partition {

// Risk-based spatial partitioning of a count raster. The neighborhood of a
// cell is the (2*epsilon+1)^2 block around it including itself.
struct RSPParams {
    int epsilon = 1;        // neighborhood radius in cells
    double gamma = 0.0;     // high-risk when count > gamma ...
    double lambda = 0.0;    // ... and count >= lambda
    int min_neighbors = 0;  // critical when #high-risk neighbors > min_neighbors
};

struct MRSPParams {
    int epsilon = 1;
    double gamma = 0.0;
    double lambda = 0.0;
    double eta = 0.0;  // region risk threshold (total accidents)
};

enum class CellClass : std::uint8_t { Outlier = 0, Border = 1, Critical = 2 };

Grid2<CellClass> classify_cells(const Grid2<double>& counts, const RSPParams& p);

// Region growing over critical cells; critical and border cells of a grown
// region share a label, outliers keep 0. Scan order is row-major, so output
// is deterministic.
Grid2<int> rsp(const Grid2<double>& counts, const RSPParams& p);

// Multi-level wrapper: iterates min_neighbors = 0..(2e+1)^2, assigning levels
// to regions whose accident total drops to <= eta and to noise cells; no-road
// cells are forced to level 0 at the end.
Grid2<int> m_rsp(const Grid2<double>& counts, const Grid2<std::uint8_t>& mask,
                 const MRSPParams& p);

// level 0 stays 0; level v >= 1 maps to ceil(v / k)
Grid2<int> aggregate_levels(const Grid2<int>& levels, int k);

double count_accidents(const std::vector<std::pair<int, int>>& region,
                       const Grid2<double>& counts);

// training-period count matrix (sum of daily counts over the given days)
Grid2<double> aggregate_counts(const Grid3<int>& counts, const std::vector<int>& days);

}  // namespace hintnet::partition
