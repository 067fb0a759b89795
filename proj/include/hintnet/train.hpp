#pragma once

#include <stdexcept>
#include <vector>

#include "hintnet/model.hpp"

namespace hintnet::model {

struct TrainReport {
    std::vector<double> train_loss;  // per epoch (mean of minibatch losses)
    std::vector<double> val_loss;    // per epoch
    int epochs_run = 0;
    int best_epoch = -1;
    double best_val = 0.0;
    double wall_seconds = 0.0;
    std::uint64_t init_fingerprint = 0;  // parameters the run started from
};

struct TrainingDiverged : std::runtime_error {
    TrainingDiverged(const std::string& msg, TrainReport r)
        : std::runtime_error(msg), report(std::move(r)) {}
    TrainReport report;
};

struct TrainResult {
    ModelParams params;  // parameters at the best validation epoch
    TrainReport report;
};

// Mini-batch gradient descent with seeded shuffling and early stopping on
// validation MSE. The descent step is theta <- theta - alpha * grad; an
// optional momentum term is off by default. Aborts (TrainingDiverged) when
// the train loss exceeds 1e6.
TrainResult train_level(const samples::SampleSource& train,
                        const samples::SampleSource& val, ModelParams init,
                        const HyperParams& hp, std::uint64_t shuffle_seed);

// Mean squared error of the model over a sample set (forward only).
double evaluate_mse(const samples::SampleSource& set, const ModelParams& p,
                    const HyperParams& hp);

}  // namespace hintnet::model
