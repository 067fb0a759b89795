#include "hintnet/samples.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace hintnet::samples {

namespace {

constexpr double kSdFloor = 1e-12;

void standardize_channel_stats(std::vector<double>& mean, std::vector<double>& sd,
                               std::vector<std::uint8_t>& pass,
                               const std::vector<std::uint8_t>& binary, int channels,
                               const std::function<void(int, double&, double&, long long&)>& accum) {
    mean.assign(channels, 0.0);
    sd.assign(channels, 1.0);
    pass.assign(binary.begin(), binary.end());
    for (int k = 0; k < channels; ++k) {
        if (pass[k]) continue;
        double s = 0.0, s2 = 0.0;
        long long n = 0;
        accum(k, s, s2, n);
        if (n == 0) {
            pass[k] = 1;
            continue;
        }
        const double m = s / static_cast<double>(n);
        const double var = std::max(0.0, s2 / static_cast<double>(n) - m * m);
        const double dev = std::sqrt(var);
        if (dev < kSdFloor) {
            // constant channel: shift to zero, leave scale alone
            mean[k] = m;
            sd[k] = 1.0;
        } else {
            mean[k] = m;
            sd[k] = dev;
        }
    }
}

}  // namespace

Standardizer Standardizer::fit(const grid::FeatureSet& f, const std::vector<int>& train_days) {
    if (train_days.empty())
        throw std::runtime_error("standardizer: empty training day set");
    Standardizer z;

    // spatial channels: population is all cells
    standardize_channel_stats(
        z.fs.mean, z.fs.sd, z.fs.passthrough, f.fs_binary, f.n_s(),
        [&](int k, double& s, double& s2, long long& n) {
            for (std::size_t r = 0; r < f.fs.rows(); ++r)
                for (std::size_t c = 0; c < f.fs.cols(); ++c) {
                    const double v = f.fs(r, c, k);
                    s += v;
                    s2 += v * v;
                    ++n;
                }
        });

    // temporal channels: population is training days
    standardize_channel_stats(
        z.ft.mean, z.ft.sd, z.ft.passthrough, f.ft_binary, f.n_t(),
        [&](int k, double& s, double& s2, long long& n) {
            for (int t : train_days) {
                const double v = f.ft(t, k);
                s += v;
                s2 += v * v;
                ++n;
            }
        });

    // spatio-temporal channels: population is all cells x training days
    standardize_channel_stats(
        z.fst.mean, z.fst.sd, z.fst.passthrough, f.fst_binary, f.n_st(),
        [&](int k, double& s, double& s2, long long& n) {
            for (std::size_t r = 0; r < f.fst.rows(); ++r)
                for (std::size_t c = 0; c < f.fst.cols(); ++c)
                    for (int t : train_days) {
                        const double v = f.fst(r, c, t, k);
                        s += v;
                        s2 += v * v;
                        ++n;
                    }
        });
    return z;
}

grid::FeatureSet Standardizer::apply(const grid::FeatureSet& f) const {
    grid::FeatureSet out = f;
    for (std::size_t r = 0; r < out.fs.rows(); ++r)
        for (std::size_t c = 0; c < out.fs.cols(); ++c)
            for (int k = 0; k < out.n_s(); ++k)
                if (!fs.passthrough[k])
                    out.fs(r, c, k) = (out.fs(r, c, k) - fs.mean[k]) / fs.sd[k];
    for (std::size_t t = 0; t < out.ft.rows(); ++t)
        for (int k = 0; k < out.n_t(); ++k)
            if (!ft.passthrough[k]) out.ft(t, k) = (out.ft(t, k) - ft.mean[k]) / ft.sd[k];
    for (std::size_t r = 0; r < out.fst.rows(); ++r)
        for (std::size_t c = 0; c < out.fst.cols(); ++c)
            for (std::size_t t = 0; t < out.fst.days(); ++t)
                for (int k = 0; k < out.n_st(); ++k)
                    if (!fst.passthrough[k])
                        out.fst(r, c, t, k) = (out.fst(r, c, t, k) - fst.mean[k]) / fst.sd[k];
    return out;
}

void materialize_sample(const SampleContext& ctx, int row, int col, int day,
                        SubregionSample& out) {
    const auto& f = *ctx.features;
    const int w = ctx.w;
    if (w % 2 == 0) throw std::runtime_error("window size w must be odd");
    if (day < kWindowDays) throw std::runtime_error("target day index must be >= 7");
    const int n_st = f.n_st();
    const int n_t = f.n_t();

    out.row = row;
    out.col = col;
    out.day = day;
    out.st_window.resize(static_cast<std::size_t>(kWindowDays) * w * w * n_st);
    if (out.temporal.rows() != kWindowDays ||
        out.temporal.cols() != static_cast<std::size_t>(n_t))
        out.temporal.resize(kWindowDays, n_t);

    for (int d = 0; d < kWindowDays; ++d) {
        const int t = day - kWindowDays + d;
        subregion::extract_window_day(
            f.fst, row, col, w, t,
            out.st_window.data() + static_cast<std::size_t>(d) * w * w * n_st);
        for (int k = 0; k < n_t; ++k) out.temporal(d, k) = f.ft(t, k);
    }
    out.spatial = subregion::extract_window(f.fs, row, col, w);
    out.adjacency = ctx.adjacency->get(row, col);
    if (!out.adjacency)
        throw std::runtime_error("no cached adjacency for cell (" + std::to_string(row) +
                                 "," + std::to_string(col) + ")");
    out.target = (*ctx.counts)(row, col, day);
}

std::vector<LazySamples::Ref> level_sample_refs(const Grid2<std::uint8_t>& mask,
                                                const Grid2<int>& levels, int level,
                                                const std::vector<int>& target_days) {
    std::vector<LazySamples::Ref> refs;
    for (int r = 0; r < static_cast<int>(levels.rows()); ++r)
        for (int c = 0; c < static_cast<int>(levels.cols()); ++c)
            if (mask(r, c) && levels(r, c) == level)
                for (int day : target_days) refs.push_back({r, c, day});
    return refs;
}

std::vector<SubregionSample> make_samples(const SampleContext& ctx,
                                          const Grid2<std::uint8_t>& mask,
                                          const Grid2<int>& levels, int level,
                                          const std::vector<int>& target_days) {
    const auto refs = level_sample_refs(mask, levels, level, target_days);
    std::vector<SubregionSample> out(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i)
        materialize_sample(ctx, refs[i].row, refs[i].col, refs[i].day, out[i]);
    return out;
}

}  // namespace hintnet::samples
