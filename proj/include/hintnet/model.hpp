#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hintnet/matrix.hpp"
#include "hintnet/samples.hpp"

namespace hintnet::model {

struct HyperParams {
    int w = 5;              // sub-region window (odd)
    int gc_hidden = 16;     // graph-convolution width h
    int lstm_input = 16;    // fused per-day embedding m
    int lstm_hidden = 32;   // LSTM state width
    int spatial_dim = 16;   // spatial-branch embedding
    double learning_rate = 1e-3;
    int epochs = 100;
    int batch_size = 64;
    int patience = 10;
    double momentum = 0.0;           // plain gradient descent by default
    bool identity_activation = false;  // replaces ReLU with identity (diagnostics)
    std::uint64_t seed = 42;

    // input channel widths, fixed by the dataset
    int n_st = 13;
    int n_s = 29;
    int n_t = 5;

    void validate() const;
};

// Named view of one parameter tensor; gradients share shapes with parameters.
struct TensorRef {
    const char* name;
    double* data;
    std::size_t size;
};

struct ModelParams {
    // ST branch: two graph-convolution layers
    Matrix w1;  // [n_st x h]
    Matrix w2;  // [h x h]
    // spatial branch: one graph-convolution layer
    Matrix v1;  // [n_s x h]
    // per-day fusion of flattened GC output and the day's temporal vector
    Matrix w_in;               // [m x (w^2 h + n_t)]
    std::vector<double> b_in;  // [m]
    // LSTM gates (input, forget, output, candidate)
    Matrix wi, ui;
    std::vector<double> bi;
    Matrix wf, uf;
    std::vector<double> bf;
    Matrix wo, uo;
    std::vector<double> bo;
    Matrix wg, ug;
    std::vector<double> bg;
    // spatial embedding and output head
    Matrix w_sp;               // [s_d x (w^2 h)]
    std::vector<double> b_sp;  // [s_d]
    Matrix w_out;              // [1 x (h_l + s_d)]
    std::vector<double> b_out;  // [1]

    static ModelParams shaped(const HyperParams& hp);       // zero-initialized
    static ModelParams init(const HyperParams& hp, std::uint64_t seed);

    std::vector<TensorRef> tensors();
    std::vector<TensorRef> tensors() const;  // const-casted views for reading
    std::size_t count() const;
    bool all_finite() const;
};

std::uint64_t params_fingerprint(const ModelParams& p);

// Activations and intermediates of one forward pass, kept for the backward
// pass. Buffers are sized on first use and reused.
struct ForwardCache {
    Matrix x_cell;   // [w^2 x 7 n_st]  window transposed cell-major
    Matrix p;        // [w^2 x 7 n_st]  A * x_cell
    Matrix p_day;    // [7 w^2 x n_st]  day-major restack
    Matrix m1, h1;   // [7 w^2 x h]
    Matrix q;        // [7 w^2 x h]     per-day A * H1
    Matrix m2, h2;   // [7 w^2 x h]
    Matrix z;        // [7 x (w^2 h + n_t)]
    Matrix a_in, u;  // [7 x m]
    Matrix gi, gf, go, gg;  // [7 x h_l] gate activations
    Matrix c, h;            // [7 x h_l] cell/hidden states
    Matrix tanh_c;          // [7 x h_l]
    // spatial branch
    Matrix ps;                   // [w^2 x n_s]
    Matrix ms, g;                // [w^2 x h]
    std::vector<double> a_sp, s;  // [s_d]
    std::vector<double> r;        // [h_l + s_d]
    double yhat = 0.0;
};

// Scratch for the backward pass (shapes mirror the cache).
struct BackwardScratch {
    Matrix dh2, dm2, dq, dh1, dm1;
    Matrix dz, da_in, du;
    std::vector<double> dh, dc;
    Matrix dgi, dgf, dgo, dgg;  // gate pre-activation grads per day
    Matrix dg_mat, dms;
    std::vector<double> da_sp, ds, dr;
};

double forward(const samples::SubregionSample& s, const ModelParams& p,
               const HyperParams& hp, ForwardCache& cache);

// Accumulates d(loss)/d(params) into grads given dy = d(loss)/d(yhat).
void backward(const samples::SubregionSample& s, const ModelParams& p,
              const HyperParams& hp, const ForwardCache& cache, double dy,
              ModelParams& grads, BackwardScratch& scratch);

double loss_mse(const std::vector<double>& predictions, const std::vector<double>& targets);

// Exact batch-MSE gradient via reverse accumulation, fixed sample order.
// When batch_sse is non-null it receives the batch's sum of squared errors.
ModelParams gradients(const samples::SampleSource& batch,
                      const std::vector<std::size_t>& indices, const ModelParams& p,
                      const HyperParams& hp, double* batch_sse = nullptr);

// single graph-convolution layer: out = act(A * h_prev * w)
Matrix gc_forward(const Matrix& h_prev, const Matrix& a, const Matrix& w,
                  bool identity_activation = false);

// one LSTM step on plain buffers (also used by the layer-level tests)
void lstm_step(const double* x, const double* h_prev, const double* c_prev,
               const ModelParams& p, int m, int h_l, double* h_out, double* c_out);

}  // namespace hintnet::model
