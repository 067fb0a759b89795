#pragma once

#include <memory>
#include <vector>

#include "hintnet/grid.hpp"
#include "hintnet/matrix.hpp"
#include "hintnet/subregion.hpp"

namespace hintnet::samples {

inline constexpr int kWindowDays = 7;  // seven consecutive days predict the eighth

// Per-channel z-scoring fitted on training-split data only. Binary channels
// and constant channels are passed through unchanged.
struct ChannelStats {
    std::vector<double> mean, sd;
    std::vector<std::uint8_t> passthrough;
};

struct Standardizer {
    ChannelStats fs, ft, fst;

    static Standardizer fit(const grid::FeatureSet& f, const std::vector<int>& train_days);
    // returns a standardized copy of the feature tensors
    grid::FeatureSet apply(const grid::FeatureSet& f) const;
};

// One (cell, day) training instance: the model's whole view of the world.
struct SubregionSample {
    int row = 0, col = 0;
    int day = 0;  // target day t; window covers t-7 .. t-1
    std::vector<double> st_window;  // [7 x w x w x n_st]
    Matrix temporal;                // [7 x n_t]
    std::vector<double> spatial;    // [w x w x n_s]
    std::shared_ptr<const Matrix> adjacency;  // [w^2 x w^2], row-normalized
    double target = 0.0;
};

struct SampleContext {
    const Grid3<int>* counts = nullptr;           // targets
    const grid::FeatureSet* features = nullptr;   // standardized tensors
    const subregion::AdjacencyCache* adjacency = nullptr;
    int w = 5;
};

// Fills `out` with the sample for (row, col, target day). Buffers are resized
// on first use and reused afterwards.
void materialize_sample(const SampleContext& ctx, int row, int col, int day,
                        SubregionSample& out);

// All samples for road cells of the given level and the given target days,
// ordered row-major by cell then by day.
std::vector<SubregionSample> make_samples(const SampleContext& ctx,
                                          const Grid2<std::uint8_t>& mask,
                                          const Grid2<int>& levels, int level,
                                          const std::vector<int>& target_days);

// Uniform access for the trainer: materialized vectors for small runs, lazy
// (cell, day) views for the full pipeline. get() may fill `scratch` and
// return a reference to it; each thread must own its scratch.
class SampleSource {
public:
    virtual ~SampleSource() = default;
    virtual std::size_t size() const = 0;
    virtual const SubregionSample& get(std::size_t i, SubregionSample& scratch) const = 0;
};

class MaterializedSamples final : public SampleSource {
public:
    explicit MaterializedSamples(std::vector<SubregionSample> s) : s_(std::move(s)) {}
    std::size_t size() const override { return s_.size(); }
    const SubregionSample& get(std::size_t i, SubregionSample&) const override {
        return s_[i];
    }

private:
    std::vector<SubregionSample> s_;
};

class LazySamples final : public SampleSource {
public:
    struct Ref {
        int row, col, day;
    };
    LazySamples(SampleContext ctx, std::vector<Ref> refs)
        : ctx_(ctx), refs_(std::move(refs)) {}
    std::size_t size() const override { return refs_.size(); }
    const SubregionSample& get(std::size_t i, SubregionSample& scratch) const override {
        const auto& r = refs_[i];
        materialize_sample(ctx_, r.row, r.col, r.day, scratch);
        return scratch;
    }

private:
    SampleContext ctx_;
    std::vector<Ref> refs_;
};

// (cell, day) refs for road cells of one level, row-major cells then days
std::vector<LazySamples::Ref> level_sample_refs(const Grid2<std::uint8_t>& mask,
                                                const Grid2<int>& levels, int level,
                                                const std::vector<int>& target_days);

}  // namespace hintnet::samples
