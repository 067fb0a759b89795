#include "hintnet/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <omp.h>
#include <random>

#include "hintnet/kernels.hpp"

namespace hintnet::model {

namespace {
constexpr int kEvalBlocks = 16;  // fixed blocks so the reduction order is stable
constexpr double kDivergenceLimit = 1e6;
}  // namespace

double evaluate_mse(const samples::SampleSource& set, const ModelParams& p,
                    const HyperParams& hp) {
    const std::size_t n = set.size();
    if (n == 0) throw std::runtime_error("evaluate_mse: empty sample set");
    double block_sse[kEvalBlocks] = {0.0};
#pragma omp parallel for schedule(static, 1)
    for (int b = 0; b < kEvalBlocks; ++b) {
        const std::size_t lo = n * b / kEvalBlocks;
        const std::size_t hi = n * (b + 1) / kEvalBlocks;
        if (lo == hi) continue;
        ForwardCache cache;
        samples::SubregionSample scratch;
        double sse = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& s = set.get(i, scratch);
            const double e = forward(s, p, hp, cache) - s.target;
            sse += e * e;
        }
        block_sse[b] = sse;
    }
    double total = 0.0;
    for (double v : block_sse) total += v;
    return total / static_cast<double>(n);
}

TrainResult train_level(const samples::SampleSource& train,
                        const samples::SampleSource& val, ModelParams init,
                        const HyperParams& hp, std::uint64_t shuffle_seed) {
    hp.validate();
    if (train.size() == 0) throw std::runtime_error("train_level: no training samples");
    if (val.size() == 0) throw std::runtime_error("train_level: no validation samples");

    const auto t0 = std::chrono::steady_clock::now();
    TrainReport report;
    report.init_fingerprint = params_fingerprint(init);

    ModelParams params = std::move(init);
    ModelParams best = params;
    ModelParams velocity = hp.momentum > 0.0 ? ModelParams::shaped(hp) : ModelParams();
    std::mt19937_64 rng(shuffle_seed);

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> batch;

    double best_val = std::numeric_limits<double>::infinity();
    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        int n_batches = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(hp.batch_size)) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(hp.batch_size));
            batch.assign(order.begin() + start, order.begin() + end);

            double sse = 0.0;
            ModelParams grads = gradients(train, batch, params, hp, &sse);
            const double batch_loss = sse / static_cast<double>(batch.size());
            loss_sum += batch_loss;
            ++n_batches;
            if (!(batch_loss < kDivergenceLimit)) {
                report.epochs_run = epoch;
                throw TrainingDiverged("train_level: loss " + std::to_string(batch_loss) +
                                           " exceeded divergence limit",
                                       std::move(report));
            }

            auto pt = params.tensors();
            const auto gt = grads.tensors();
            if (hp.momentum > 0.0) {
                auto vt = velocity.tensors();
                for (std::size_t t = 0; t < pt.size(); ++t) {
                    kernels::active().scale(hp.momentum, vt[t].data,
                                            static_cast<int>(vt[t].size));
                    kernels::active().axpy(-hp.learning_rate, gt[t].data, vt[t].data,
                                           static_cast<int>(vt[t].size));
                    kernels::active().add(pt[t].data, vt[t].data, pt[t].data,
                                          static_cast<int>(pt[t].size));
                }
            } else {
                for (std::size_t t = 0; t < pt.size(); ++t)
                    kernels::active().axpy(-hp.learning_rate, gt[t].data, pt[t].data,
                                           static_cast<int>(pt[t].size));
            }
        }

        report.train_loss.push_back(loss_sum / std::max(1, n_batches));
        const double v = evaluate_mse(val, params, hp);
        report.val_loss.push_back(v);
        report.epochs_run = epoch + 1;
        if (v < best_val) {
            best_val = v;
            best = params;
            report.best_epoch = epoch;
        }
        if (epoch - report.best_epoch >= hp.patience) break;
    }
    report.best_val = best_val;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(best), std::move(report)};
}

}  // namespace hintnet::model
