#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hintnet/matrix.hpp"

namespace hintnet::kriging {

struct StationObservation {
    double x = 0.0, y = 0.0;  // km in grid-local coordinates
    double value = 0.0;
    int day = 0;
};

// Exponential semivariogram: gamma(h) = nugget + (sill-nugget)*(1-exp(-3h/range));
// gamma(0) = 0, so a positive nugget is a discontinuity at the origin.
struct VariogramModel {
    double nugget = 0.0;
    double sill = 1.0;
    double range_km = 1.0;

    double operator()(double h) const;
};

struct EmpiricalVariogram {
    std::vector<double> dist;    // bin centers (mean pair distance per bin)
    std::vector<double> gamma;   // mean semivariance per bin
    std::vector<int> pairs;      // pair count per bin
};

EmpiricalVariogram empirical_semivariogram(const std::vector<StationObservation>& obs,
                                           int n_bins);

// Method-of-moments binning + least-squares fit over (nugget, sill, range)
// with nonnegativity enforced; degenerate inputs fall back to
// (nugget=0, sill=max(sample variance, 1e-12), range=max_pair_dist/4).
VariogramModel fit_variogram(const std::vector<StationObservation>& obs, int n_bins = 15);

struct Point {
    double x = 0.0, y = 0.0;
};

using DistanceFn = std::function<double(const Point&, const Point&)>;

double euclidean(const Point& a, const Point& b);

// Ordinary Kriging: weights solve the semivariance system augmented with the
// unbiasedness row (weights sum to 1). Coincident stations are averaged.
std::vector<double> ordinary_krige(const std::vector<StationObservation>& obs,
                                   const VariogramModel& model,
                                   const std::vector<Point>& targets);

// Weights for a single target (exposed for the invariants).
std::vector<double> ordinary_krige_weights(const std::vector<StationObservation>& obs,
                                           const VariogramModel& model, const Point& target);

// Universal Kriging with drift basis {1, x, y} and a pluggable distance.
// Falls back to ordinary_krige (with a warning on stderr) when the drift
// design is rank-deficient or there are fewer than 4 distinct stations.
std::vector<double> universal_krige(const std::vector<StationObservation>& obs,
                                    const VariogramModel& model,
                                    const std::vector<Point>& targets,
                                    const DistanceFn& distance = euclidean);

// Shortest-path metric over the road-cell graph: 8-neighbor edges, edge
// length = cell size (sqrt(2) x cell size on diagonals). Points snap to their
// containing cell, or the nearest road cell when off-road; two points in the
// same cell are at Euclidean distance.
class RoadNetworkMetric {
public:
    RoadNetworkMetric(const Grid2<std::uint8_t>& mask, double cell_km);
    double operator()(const Point& a, const Point& b) const;

private:
    int snap(const Point& p) const;
    const std::vector<double>& distances_from(int cell) const;

    int rows_, cols_;
    double cell_km_;
    std::vector<std::uint8_t> road_;
    mutable std::vector<std::vector<double>> dist_cache_;  // per source cell
};

enum class ChannelKind { Weather, Traffic };

// Per-day interpolation of one channel onto the grid. Weather channels use
// ordinary kriging everywhere; traffic channels use universal kriging at road
// cells only (0 elsewhere). Days without observations copy the previous
// day's field (the first day falls back to the channel training mean, days
// with fewer than 5 observations to that day's observation mean).
Grid3<double> impute_channel(const std::vector<std::vector<StationObservation>>& obs_by_day,
                             int rows, int cols, double cell_km, ChannelKind kind,
                             const Grid2<std::uint8_t>* road_mask,
                             const DistanceFn* traffic_distance, double training_mean);

}  // namespace hintnet::kriging
