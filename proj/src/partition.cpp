#include "hintnet/partition.hpp"

#include <limits>
#include <stdexcept>

namespace hintnet::partition {

namespace {

void check(const Grid2<double>& counts, int epsilon) {
    if (counts.empty()) throw std::runtime_error("partition: empty count matrix");
    if (epsilon < 1) throw std::runtime_error("partition: epsilon must be >= 1");
    for (double v : counts.raw())
        if (v < 0) throw std::runtime_error("partition: negative accident count");
}

}  // namespace

Grid2<CellClass> classify_cells(const Grid2<double>& counts, const RSPParams& p) {
    check(counts, p.epsilon);
    const int rows = static_cast<int>(counts.rows());
    const int cols = static_cast<int>(counts.cols());
    const int e = p.epsilon;

    Grid2<std::uint8_t> high(rows, cols, 0);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            high(r, c) = counts(r, c) > p.gamma && counts(r, c) >= p.lambda;

    Grid2<std::uint8_t> critical(rows, cols, 0);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            int n = 0;
            for (int dr = -e; dr <= e; ++dr)
                for (int dc = -e; dc <= e; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr >= 0 && rr < rows && cc >= 0 && cc < cols) n += high(rr, cc);
                }
            critical(r, c) = n > p.min_neighbors;
        }
    }

    Grid2<CellClass> out(rows, cols, CellClass::Outlier);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (critical(r, c)) {
                out(r, c) = CellClass::Critical;
                continue;
            }
            for (int dr = -e; dr <= e && out(r, c) == CellClass::Outlier; ++dr)
                for (int dc = -e; dc <= e; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr >= 0 && rr < rows && cc >= 0 && cc < cols && critical(rr, cc)) {
                        out(r, c) = CellClass::Border;
                        break;
                    }
                }
        }
    }
    return out;
}

Grid2<int> rsp(const Grid2<double>& counts, const RSPParams& p) {
    const auto cls = classify_cells(counts, p);
    const int rows = static_cast<int>(counts.rows());
    const int cols = static_cast<int>(counts.cols());
    const int e = p.epsilon;

    Grid2<int> labels(rows, cols, 0);
    int next_id = 1;
    std::vector<std::pair<int, int>> queue;
    for (int r0 = 0; r0 < rows; ++r0) {
        for (int c0 = 0; c0 < cols; ++c0) {
            if (cls(r0, c0) != CellClass::Critical || labels(r0, c0) != 0) continue;
            const int id = next_id++;
            labels(r0, c0) = id;
            queue.assign(1, {r0, c0});
            std::size_t head = 0;
            while (head < queue.size()) {
                const auto [r, c] = queue[head++];
                // only critical cells expand; borders join but stop the growth
                for (int dr = -e; dr <= e; ++dr) {
                    for (int dc = -e; dc <= e; ++dc) {
                        const int rr = r + dr, cc = c + dc;
                        if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
                        if (labels(rr, cc) != 0 || cls(rr, cc) == CellClass::Outlier)
                            continue;
                        labels(rr, cc) = id;
                        if (cls(rr, cc) == CellClass::Critical) queue.push_back({rr, cc});
                    }
                }
            }
        }
    }
    return labels;
}

Grid2<int> m_rsp(const Grid2<double>& counts, const Grid2<std::uint8_t>& mask,
                 const MRSPParams& p) {
    check(counts, p.epsilon);
    if (!(p.eta > 0)) throw std::runtime_error("partition: eta must be > 0");
    if (mask.rows() != counts.rows() || mask.cols() != counts.cols())
        throw std::runtime_error("partition: mask shape mismatch");
    const int rows = static_cast<int>(counts.rows());
    const int cols = static_cast<int>(counts.cols());
    const int iters = (2 * p.epsilon + 1) * (2 * p.epsilon + 1);

    Grid2<std::uint8_t> assigned(rows, cols, 0);
    Grid2<int> result(rows, cols, -1);

    for (int beta = 0; beta <= iters; ++beta) {
        RSPParams rp{p.epsilon, p.gamma, p.lambda, beta};
        const auto labels = rsp(counts, rp);
        const double eta_now =
            beta == iters ? std::numeric_limits<double>::infinity() : p.eta;

        int max_label = 0;
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                max_label = std::max(max_label, labels(r, c));
                if (labels(r, c) == 0 && !assigned(r, c)) {
                    assigned(r, c) = 1;
                    result(r, c) = beta - 1;
                }
            }
        }

        std::vector<double> region_total(max_label + 1, 0.0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                if (labels(r, c) > 0) region_total[labels(r, c)] += counts(r, c);

        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                const int id = labels(r, c);
                if (id > 0 && region_total[id] <= eta_now && !assigned(r, c)) {
                    assigned(r, c) = 1;
                    result(r, c) = beta;
                }
            }
        }
    }

    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            ++result(r, c);
            if (!mask(r, c)) result(r, c) = 0;
        }
    return result;
}

Grid2<int> aggregate_levels(const Grid2<int>& levels, int k) {
    if (k < 1) throw std::runtime_error("partition: aggregation k must be >= 1");
    Grid2<int> out(levels.rows(), levels.cols(), 0);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const int v = levels.raw()[i];
        out.raw()[i] = v <= 0 ? 0 : (v + k - 1) / k;
    }
    return out;
}

double count_accidents(const std::vector<std::pair<int, int>>& region,
                       const Grid2<double>& counts) {
    double s = 0.0;
    for (const auto& [r, c] : region) s += counts(r, c);
    return s;
}

Grid2<double> aggregate_counts(const Grid3<int>& counts, const std::vector<int>& days) {
    Grid2<double> out(counts.rows(), counts.cols(), 0.0);
    for (std::size_t r = 0; r < counts.rows(); ++r)
        for (std::size_t c = 0; c < counts.cols(); ++c) {
            double s = 0.0;
            for (int t : days) s += counts(r, c, t);
            out(r, c) = s;
        }
    return out;
}

}  // namespace hintnet::partition
