#include "hintnet/kriging.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

namespace hintnet::kriging {

double VariogramModel::operator()(double h) const {
    if (h <= 0.0) return 0.0;
    return nugget + (sill - nugget) * (1.0 - std::exp(-3.0 * h / range_km));
}

double euclidean(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

// coincident duplicate stations are averaged before solving
std::vector<StationObservation> dedupe(const std::vector<StationObservation>& obs) {
    std::map<std::pair<double, double>, std::pair<double, int>> acc;
    for (const auto& o : obs) {
        if (!std::isfinite(o.x) || !std::isfinite(o.y) || !std::isfinite(o.value))
            throw std::runtime_error("kriging: non-finite observation");
        auto& slot = acc[{o.x, o.y}];
        slot.first += o.value;
        slot.second += 1;
    }
    std::vector<StationObservation> out;
    out.reserve(acc.size());
    for (const auto& [pos, va] : acc)
        out.push_back({pos.first, pos.second, va.first / va.second, 0});
    return out;
}

// Solves with the shared factorization; a singular system (checked by
// residual) is retried with 1e-10 added to the semivariance diagonal.
Eigen::VectorXd solve_checked(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                              const Eigen::MatrixXd& k, const Eigen::VectorXd& rhs,
                              int ridge_dim) {
    Eigen::VectorXd sol = lu.solve(rhs);
    if (sol.allFinite() && (k * sol - rhs).norm() <= 1e-6 * (1.0 + rhs.norm())) return sol;
    Eigen::MatrixXd kr = k;
    for (int i = 0; i < ridge_dim; ++i) kr(i, i) += 1e-10;
    return kr.partialPivLu().solve(rhs);
}

}  // namespace

EmpiricalVariogram empirical_semivariogram(const std::vector<StationObservation>& obs,
                                           int n_bins) {
    EmpiricalVariogram ev;
    const int n = static_cast<int>(obs.size());
    double max_d = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            max_d = std::max(max_d, euclidean({obs[i].x, obs[i].y}, {obs[j].x, obs[j].y}));
    if (max_d <= 0.0 || n_bins < 1) return ev;

    std::vector<double> dsum(n_bins, 0.0), gsum(n_bins, 0.0);
    std::vector<int> cnt(n_bins, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = euclidean({obs[i].x, obs[i].y}, {obs[j].x, obs[j].y});
            if (d <= 0.0) continue;
            int b = static_cast<int>(d / max_d * n_bins);
            if (b >= n_bins) b = n_bins - 1;
            const double diff = obs[i].value - obs[j].value;
            dsum[b] += d;
            gsum[b] += 0.5 * diff * diff;
            ++cnt[b];
        }
    }
    for (int b = 0; b < n_bins; ++b) {
        if (cnt[b] == 0) continue;
        ev.dist.push_back(dsum[b] / cnt[b]);
        ev.gamma.push_back(gsum[b] / cnt[b]);
        ev.pairs.push_back(cnt[b]);
    }
    return ev;
}

VariogramModel fit_variogram(const std::vector<StationObservation>& obs, int n_bins) {
    if (obs.size() < 5)
        throw std::runtime_error(
            "fit_variogram: need at least 5 observations; use a constant fill instead");

    double mean = 0.0;
    for (const auto& o : obs) mean += o.value;
    mean /= static_cast<double>(obs.size());
    double var = 0.0;
    for (const auto& o : obs) var += (o.value - mean) * (o.value - mean);
    var /= static_cast<double>(obs.size());

    double max_d = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i)
        for (std::size_t j = i + 1; j < obs.size(); ++j)
            max_d = std::max(max_d, euclidean({obs[i].x, obs[i].y}, {obs[j].x, obs[j].y}));

    const auto ev = empirical_semivariogram(obs, n_bins);
    const double sill_floor = std::max(1e-12, 1e-9 * var);
    if (ev.dist.size() < 2 || var < 1e-24 || max_d <= 0.0)
        return {0.0, std::max(var, 1e-12), std::max(max_d / 4.0, 1e-6)};

    // weighted least squares in (nugget, partial sill) on a range grid
    VariogramModel best{0.0, std::max(var, 1e-12), std::max(max_d / 4.0, 1e-6)};
    double best_sse = std::numeric_limits<double>::infinity();
    const int n_candidates = 96;
    const double r_lo = std::max(max_d * 1e-3, 1e-6);
    const double r_hi = max_d * 4.0;
    for (int ic = 0; ic < n_candidates; ++ic) {
        const double r =
            r_lo * std::pow(r_hi / r_lo, static_cast<double>(ic) / (n_candidates - 1));
        // basis: gamma ~ n * 1 + p * b(h)
        double sww = 0, swb = 0, sbb = 0, swg = 0, sbg = 0;
        for (std::size_t b = 0; b < ev.dist.size(); ++b) {
            const double w = ev.pairs[b];
            const double bb = 1.0 - std::exp(-3.0 * ev.dist[b] / r);
            sww += w;
            swb += w * bb;
            sbb += w * bb * bb;
            swg += w * ev.gamma[b];
            sbg += w * bb * ev.gamma[b];
        }
        const double det = sww * sbb - swb * swb;
        double nug, psill;
        if (std::fabs(det) < 1e-12 * sww * std::max(sbb, 1.0)) {
            // basis collinear with the constant (flat curve): attribute to nugget
            psill = sill_floor;
            nug = std::max((swg - psill * swb) / sww, 0.0);
        } else {
            nug = (sbb * swg - swb * sbg) / det;
            psill = (sww * sbg - swb * swg) / det;
        }
        if (nug < 0.0) {
            nug = 0.0;
            psill = sbb > 0 ? sbg / sbb : sill_floor;
        }
        if (psill < sill_floor) {
            psill = sill_floor;
            nug = sww > 0 ? std::max((swg - psill * swb) / sww, 0.0) : 0.0;
        }
        double sse = 0.0;
        for (std::size_t b = 0; b < ev.dist.size(); ++b) {
            const double bb = 1.0 - std::exp(-3.0 * ev.dist[b] / r);
            const double e = ev.gamma[b] - nug - psill * bb;
            sse += ev.pairs[b] * e * e;
        }
        // candidates run smallest range first; ties go to the shorter range
        if (sse < best_sse * (1.0 - 1e-9)) {
            best_sse = sse;
            best = {nug, nug + psill, r};
        }
    }
    return best;
}

namespace {

struct OkSystem {
    std::vector<StationObservation> stations;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    bool ridge_applied = false;
    Eigen::MatrixXd k;
};

// Shared factorization across targets; only the right-hand side changes.
OkSystem build_ok_system(const std::vector<StationObservation>& raw,
                         const VariogramModel& model, const DistanceFn& dist) {
    OkSystem sys;
    sys.stations = dedupe(raw);
    const int n = static_cast<int>(sys.stations.size());
    sys.k = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double g = model(dist({sys.stations[i].x, sys.stations[i].y},
                                        {sys.stations[j].x, sys.stations[j].y}));
            sys.k(i, j) = g;
            sys.k(j, i) = g;
        }
        sys.k(i, n) = 1.0;
        sys.k(n, i) = 1.0;
    }
    sys.lu.compute(sys.k);
    return sys;
}

}  // namespace

std::vector<double> ordinary_krige(const std::vector<StationObservation>& obs,
                                   const VariogramModel& model,
                                   const std::vector<Point>& targets) {
    const auto stations = dedupe(obs);
    if (stations.empty()) throw std::runtime_error("ordinary_krige: no observations");
    if (stations.size() == 1)
        return std::vector<double>(targets.size(), stations[0].value);

    const int n = static_cast<int>(stations.size());
    auto sys = build_ok_system(obs, model, euclidean);
    Eigen::VectorXd rhs(n + 1);
    std::vector<double> out(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        for (int i = 0; i < n; ++i)
            rhs[i] = model(euclidean({sys.stations[i].x, sys.stations[i].y}, targets[t]));
        rhs[n] = 1.0;
        const Eigen::VectorXd sol = solve_checked(sys.lu, sys.k, rhs, n);
        double pred = 0.0;
        for (int i = 0; i < n; ++i) pred += sol[i] * sys.stations[i].value;
        out[t] = pred;
    }
    return out;
}

std::vector<double> ordinary_krige_weights(const std::vector<StationObservation>& obs,
                                           const VariogramModel& model,
                                           const Point& target) {
    const auto stations = dedupe(obs);
    if (stations.size() < 2)
        throw std::runtime_error("ordinary_krige_weights: need >= 2 distinct stations");
    const int n = static_cast<int>(stations.size());
    auto sys = build_ok_system(obs, model, euclidean);
    Eigen::VectorXd rhs(n + 1);
    for (int i = 0; i < n; ++i)
        rhs[i] = model(euclidean({sys.stations[i].x, sys.stations[i].y}, target));
    rhs[n] = 1.0;
    const Eigen::VectorXd sol = solve_checked(sys.lu, sys.k, rhs, n);
    return std::vector<double>(sol.data(), sol.data() + n);
}

std::vector<double> universal_krige(const std::vector<StationObservation>& obs,
                                    const VariogramModel& model,
                                    const std::vector<Point>& targets,
                                    const DistanceFn& distance) {
    const auto stations = dedupe(obs);
    if (stations.empty()) throw std::runtime_error("universal_krige: no observations");
    if (stations.size() == 1)
        return std::vector<double>(targets.size(), stations[0].value);
    const int n = static_cast<int>(stations.size());

    bool drift_ok = n >= 4;
    if (drift_ok) {
        Eigen::MatrixXd f(n, 3);
        for (int i = 0; i < n; ++i) {
            f(i, 0) = 1.0;
            f(i, 1) = stations[i].x;
            f(i, 2) = stations[i].y;
        }
        drift_ok = Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(f).rank() == 3;
    }
    if (!drift_ok) {
        std::cerr << "warning: universal_krige drift design is rank-deficient; "
                     "falling back to ordinary kriging\n";
        return ordinary_krige(obs, model, targets);
    }

    const int dim = n + 3;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double g = model(distance({stations[i].x, stations[i].y},
                                            {stations[j].x, stations[j].y}));
            k(i, j) = g;
            k(j, i) = g;
        }
        k(i, n) = k(n, i) = 1.0;
        k(i, n + 1) = k(n + 1, i) = stations[i].x;
        k(i, n + 2) = k(n + 2, i) = stations[i].y;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(k);

    Eigen::VectorXd rhs(dim);
    std::vector<double> out(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        for (int i = 0; i < n; ++i)
            rhs[i] = model(distance({stations[i].x, stations[i].y}, targets[t]));
        rhs[n] = 1.0;
        rhs[n + 1] = targets[t].x;
        rhs[n + 2] = targets[t].y;
        const Eigen::VectorXd sol = solve_checked(lu, k, rhs, n);
        double pred = 0.0;
        for (int i = 0; i < n; ++i) pred += sol[i] * stations[i].value;
        out[t] = pred;
    }
    return out;
}

RoadNetworkMetric::RoadNetworkMetric(const Grid2<std::uint8_t>& mask, double cell_km)
    : rows_(static_cast<int>(mask.rows())), cols_(static_cast<int>(mask.cols())),
      cell_km_(cell_km), road_(mask.raw()),
      dist_cache_(static_cast<std::size_t>(rows_) * cols_) {
    if (std::none_of(road_.begin(), road_.end(), [](std::uint8_t v) { return v != 0; }))
        throw std::runtime_error("road network metric: empty road mask");
}

int RoadNetworkMetric::snap(const Point& p) const {
    const int c0 = std::clamp(static_cast<int>(std::floor(p.x / cell_km_)), 0, cols_ - 1);
    const int r0 = std::clamp(static_cast<int>(std::floor(p.y / cell_km_)), 0, rows_ - 1);
    if (road_[static_cast<std::size_t>(r0) * cols_ + c0])
        return r0 * cols_ + c0;
    // nearest road cell center, row-major on ties
    double best = std::numeric_limits<double>::infinity();
    int arg = -1;
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            if (!road_[static_cast<std::size_t>(r) * cols_ + c]) continue;
            const double d = std::hypot((c + 0.5) * cell_km_ - p.x,
                                        (r + 0.5) * cell_km_ - p.y);
            if (d < best) {
                best = d;
                arg = r * cols_ + c;
            }
        }
    }
    return arg;
}

const std::vector<double>& RoadNetworkMetric::distances_from(int cell) const {
    auto& d = dist_cache_[cell];
    if (!d.empty()) return d;
    d.assign(static_cast<std::size_t>(rows_) * cols_,
             std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[cell] = 0.0;
    pq.push({0.0, cell});
    const double diag = cell_km_ * std::sqrt(2.0);
    while (!pq.empty()) {
        const auto [dist, u] = pq.top();
        pq.pop();
        if (dist > d[u]) continue;
        const int r = u / cols_, c = u % cols_;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const int rr = r + dr, cc = c + dc;
                if (rr < 0 || rr >= rows_ || cc < 0 || cc >= cols_) continue;
                const int v = rr * cols_ + cc;
                if (!road_[v]) continue;
                const double w = (dr != 0 && dc != 0) ? diag : cell_km_;
                if (d[u] + w < d[v]) {
                    d[v] = d[u] + w;
                    pq.push({d[v], v});
                }
            }
        }
    }
    return d;
}

double RoadNetworkMetric::operator()(const Point& a, const Point& b) const {
    const int ca = snap(a), cb = snap(b);
    if (ca == cb) return euclidean(a, b);
    return distances_from(ca)[cb];
}

Grid3<double> impute_channel(const std::vector<std::vector<StationObservation>>& obs_by_day,
                             int rows, int cols, double cell_km, ChannelKind kind,
                             const Grid2<std::uint8_t>* road_mask,
                             const DistanceFn* traffic_distance, double training_mean) {
    const int days = static_cast<int>(obs_by_day.size());
    Grid3<double> out(rows, cols, days, 0.0);
    if (kind == ChannelKind::Traffic && !road_mask)
        throw std::runtime_error("impute_channel: traffic channels need a road mask");

    std::vector<Point> targets;
    std::vector<std::pair<int, int>> target_cells;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (kind == ChannelKind::Traffic && !(*road_mask)(r, c)) continue;
            targets.push_back({(c + 0.5) * cell_km, (r + 0.5) * cell_km});
            target_cells.emplace_back(r, c);
        }

    bool have_previous = false;
    for (int t = 0; t < days; ++t) {
        const auto& obs = obs_by_day[t];
        if (obs.empty()) {
            if (have_previous) {
                for (int r = 0; r < rows; ++r)
                    for (int c = 0; c < cols; ++c) out(r, c, t) = out(r, c, t - 1);
            } else {
                for (const auto& [r, c] : target_cells) out(r, c, t) = training_mean;
            }
            have_previous = true;
            continue;
        }

        std::vector<double> values;
        if (obs.size() < 5) {
            double m = 0.0;
            for (const auto& o : obs) m += o.value;
            m /= static_cast<double>(obs.size());
            values.assign(targets.size(), m);
        } else {
            const auto model = fit_variogram(obs);
            values = kind == ChannelKind::Weather
                         ? ordinary_krige(obs, model, targets)
                         : universal_krige(obs, model, targets,
                                           traffic_distance ? *traffic_distance
                                                            : DistanceFn(euclidean));
        }
        for (std::size_t i = 0; i < target_cells.size(); ++i)
            out(target_cells[i].first, target_cells[i].second, t) = values[i];
        have_previous = true;
    }
    return out;
}

}  // namespace hintnet::kriging
