#include "hintnet/model.hpp"

#include <cmath>
#include <cstring>
#include <omp.h>
#include <random>
#include <stdexcept>

#include "hintnet/hash.hpp"
#include "hintnet/kernels.hpp"

namespace hintnet::model {

namespace {

constexpr int kDays = samples::kWindowDays;
constexpr int kGradBlocks = 8;  // fixed reduction blocks, independent of threads

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void ensure(Matrix& m, std::size_t r, std::size_t c) {
    if (m.rows() != r || m.cols() != c) m.resize(r, c);
}
void ensure(std::vector<double>& v, std::size_t n) {
    if (v.size() != n) v.assign(n, 0.0);
}

void apply_activation(const double* pre, double* out, int n, bool identity) {
    if (identity)
        std::memcpy(out, pre, static_cast<std::size_t>(n) * sizeof(double));
    else
        kernels::active().relu(pre, out, n);
}

void activation_backward(const double* pre, const double* dy, double* dx, int n,
                         bool identity) {
    if (identity)
        std::memcpy(dx, dy, static_cast<std::size_t>(n) * sizeof(double));
    else
        kernels::active().relu_mask(pre, dy, dx, n);
}

}  // namespace

void HyperParams::validate() const {
    if (w < 1 || w % 2 == 0) throw std::runtime_error("hyper: w must be odd and >= 1");
    if (gc_hidden < 1 || lstm_input < 1 || lstm_hidden < 1 || spatial_dim < 1)
        throw std::runtime_error("hyper: layer widths must be positive");
    if (!(learning_rate >= 0)) throw std::runtime_error("hyper: bad learning rate");
    if (epochs < 1 || batch_size < 1 || patience < 1)
        throw std::runtime_error("hyper: epochs, batch size and patience must be positive");
    if (n_st < 1 || n_s < 1 || n_t < 1)
        throw std::runtime_error("hyper: channel widths must be positive");
}

ModelParams ModelParams::shaped(const HyperParams& hp) {
    hp.validate();
    const int k = hp.w * hp.w;
    const int h = hp.gc_hidden;
    const int m = hp.lstm_input;
    const int hl = hp.lstm_hidden;
    const int zdim = k * h + hp.n_t;

    ModelParams p;
    p.w1 = Matrix(hp.n_st, h);
    p.w2 = Matrix(h, h);
    p.v1 = Matrix(hp.n_s, h);
    p.w_in = Matrix(m, zdim);
    p.b_in.assign(m, 0.0);
    for (Matrix* w : {&p.wi, &p.wf, &p.wo, &p.wg}) *w = Matrix(hl, m);
    for (Matrix* u : {&p.ui, &p.uf, &p.uo, &p.ug}) *u = Matrix(hl, hl);
    for (auto* b : {&p.bi, &p.bf, &p.bo, &p.bg}) b->assign(hl, 0.0);
    p.w_sp = Matrix(hp.spatial_dim, k * h);
    p.b_sp.assign(hp.spatial_dim, 0.0);
    p.w_out = Matrix(1, hl + hp.spatial_dim);
    p.b_out.assign(1, 0.0);
    return p;
}

ModelParams ModelParams::init(const HyperParams& hp, std::uint64_t seed) {
    ModelParams p = shaped(hp);
    std::mt19937_64 rng(seed);
    auto fill = [&rng](Matrix& w, int fan_in, int fan_out) {
        const double b = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> u(-b, b);
        for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = u(rng);
    };
    fill(p.w1, hp.n_st, hp.gc_hidden);
    fill(p.w2, hp.gc_hidden, hp.gc_hidden);
    fill(p.v1, hp.n_s, hp.gc_hidden);
    fill(p.w_in, static_cast<int>(p.w_in.cols()), hp.lstm_input);
    fill(p.wi, hp.lstm_input, hp.lstm_hidden);
    fill(p.ui, hp.lstm_hidden, hp.lstm_hidden);
    fill(p.wf, hp.lstm_input, hp.lstm_hidden);
    fill(p.uf, hp.lstm_hidden, hp.lstm_hidden);
    fill(p.wo, hp.lstm_input, hp.lstm_hidden);
    fill(p.uo, hp.lstm_hidden, hp.lstm_hidden);
    fill(p.wg, hp.lstm_input, hp.lstm_hidden);
    fill(p.ug, hp.lstm_hidden, hp.lstm_hidden);
    fill(p.w_sp, static_cast<int>(p.w_sp.cols()), hp.spatial_dim);
    fill(p.w_out, static_cast<int>(p.w_out.cols()), 1);
    // forget-gate bias starts open so early training can carry state
    for (auto& b : p.bf) b = 1.0;
    return p;
}

std::vector<TensorRef> ModelParams::tensors() {
    return {
        {"w1", w1.data(), w1.size()},       {"w2", w2.data(), w2.size()},
        {"v1", v1.data(), v1.size()},       {"w_in", w_in.data(), w_in.size()},
        {"b_in", b_in.data(), b_in.size()}, {"wi", wi.data(), wi.size()},
        {"ui", ui.data(), ui.size()},       {"bi", bi.data(), bi.size()},
        {"wf", wf.data(), wf.size()},       {"uf", uf.data(), uf.size()},
        {"bf", bf.data(), bf.size()},       {"wo", wo.data(), wo.size()},
        {"uo", uo.data(), uo.size()},       {"bo", bo.data(), bo.size()},
        {"wg", wg.data(), wg.size()},       {"ug", ug.data(), ug.size()},
        {"bg", bg.data(), bg.size()},       {"w_sp", w_sp.data(), w_sp.size()},
        {"b_sp", b_sp.data(), b_sp.size()}, {"w_out", w_out.data(), w_out.size()},
        {"b_out", b_out.data(), b_out.size()},
    };
}

std::vector<TensorRef> ModelParams::tensors() const {
    return const_cast<ModelParams*>(this)->tensors();
}

std::size_t ModelParams::count() const {
    std::size_t n = 0;
    for (const auto& t : tensors()) n += t.size;
    return n;
}

bool ModelParams::all_finite() const {
    for (const auto& t : tensors())
        for (std::size_t i = 0; i < t.size; ++i)
            if (!std::isfinite(t.data[i])) return false;
    return true;
}

std::uint64_t params_fingerprint(const ModelParams& p) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& t : p.tensors()) h = fnv1a64(t.data, t.size * sizeof(double), h);
    return h;
}

Matrix gc_forward(const Matrix& h_prev, const Matrix& a, const Matrix& w,
                  bool identity_activation) {
    if (a.rows() != a.cols() || a.cols() != h_prev.rows() || h_prev.cols() != w.rows())
        throw std::runtime_error("gc_forward: inconsistent shapes");
    const auto& k = kernels::active();
    Matrix ah(h_prev.rows(), h_prev.cols());
    k.gemm(a.data(), h_prev.data(), ah.data(), static_cast<int>(a.rows()),
           static_cast<int>(a.cols()), static_cast<int>(h_prev.cols()), false);
    Matrix out(h_prev.rows(), w.cols());
    k.gemm(ah.data(), w.data(), out.data(), static_cast<int>(ah.rows()),
           static_cast<int>(ah.cols()), static_cast<int>(w.cols()), false);
    if (!identity_activation)
        k.relu(out.data(), out.data(), static_cast<int>(out.size()));
    return out;
}

void lstm_step(const double* x, const double* h_prev, const double* c_prev,
               const ModelParams& p, int m, int h_l, double* h_out, double* c_out) {
    const auto& k = kernels::active();
    std::vector<double> pre(h_l), gi(h_l), gf(h_l), go(h_l), gg(h_l);
    auto gate = [&](const Matrix& w, const Matrix& u, const std::vector<double>& b,
                    double* out, bool is_tanh) {
        k.gemv(w.data(), x, pre.data(), h_l, m, false);
        k.gemv(u.data(), h_prev, pre.data(), h_l, h_l, true);
        for (int i = 0; i < h_l; ++i)
            out[i] = is_tanh ? std::tanh(pre[i] + b[i]) : sigmoid(pre[i] + b[i]);
    };
    gate(p.wi, p.ui, p.bi, gi.data(), false);
    gate(p.wf, p.uf, p.bf, gf.data(), false);
    gate(p.wo, p.uo, p.bo, go.data(), false);
    gate(p.wg, p.ug, p.bg, gg.data(), true);
    for (int i = 0; i < h_l; ++i) {
        c_out[i] = gf[i] * c_prev[i] + gi[i] * gg[i];
        h_out[i] = go[i] * std::tanh(c_out[i]);
    }
}

double forward(const samples::SubregionSample& s, const ModelParams& p,
               const HyperParams& hp, ForwardCache& cache) {
    const auto& kr = kernels::active();
    const int w2 = hp.w * hp.w;
    const int h = hp.gc_hidden;
    const int m = hp.lstm_input;
    const int hl = hp.lstm_hidden;
    const int sd = hp.spatial_dim;
    const int nst = hp.n_st;
    const int zdim = w2 * h + hp.n_t;
    const Matrix& a = *s.adjacency;
    if (static_cast<int>(a.rows()) != w2)
        throw std::runtime_error("forward: adjacency does not match window size");
    if (static_cast<int>(s.st_window.size()) != kDays * w2 * nst ||
        static_cast<int>(s.spatial.size()) != w2 * hp.n_s ||
        static_cast<int>(s.temporal.cols()) != hp.n_t)
        throw std::runtime_error("forward: sample does not match hyperparameters");

    ensure(cache.x_cell, w2, kDays * nst);
    ensure(cache.p, w2, kDays * nst);
    ensure(cache.p_day, kDays * w2, nst);
    ensure(cache.m1, kDays * w2, h);
    ensure(cache.h1, kDays * w2, h);
    ensure(cache.q, kDays * w2, h);
    ensure(cache.m2, kDays * w2, h);
    ensure(cache.h2, kDays * w2, h);
    ensure(cache.z, kDays, zdim);
    ensure(cache.a_in, kDays, m);
    ensure(cache.u, kDays, m);
    for (Matrix* g : {&cache.gi, &cache.gf, &cache.go, &cache.gg, &cache.c, &cache.h,
                      &cache.tanh_c})
        ensure(*g, kDays, hl);
    ensure(cache.ps, w2, hp.n_s);
    ensure(cache.ms, w2, h);
    ensure(cache.g, w2, h);
    ensure(cache.a_sp, sd);
    ensure(cache.s, sd);
    ensure(cache.r, hl + sd);

    // ST branch: all seven days share A, W1, W2, so the day dimension is
    // folded into the gemm columns/rows.
    for (int cell = 0; cell < w2; ++cell)
        for (int d = 0; d < kDays; ++d)
            for (int k = 0; k < nst; ++k)
                cache.x_cell(cell, d * nst + k) =
                    s.st_window[(static_cast<std::size_t>(d) * w2 + cell) * nst + k];
    kr.gemm(a.data(), cache.x_cell.data(), cache.p.data(), w2, w2, kDays * nst, false);
    for (int d = 0; d < kDays; ++d)
        for (int cell = 0; cell < w2; ++cell)
            for (int k = 0; k < nst; ++k)
                cache.p_day(d * w2 + cell, k) = cache.p(cell, d * nst + k);
    kr.gemm(cache.p_day.data(), p.w1.data(), cache.m1.data(), kDays * w2, nst, h, false);
    apply_activation(cache.m1.data(), cache.h1.data(), kDays * w2 * h,
                     hp.identity_activation);
    for (int d = 0; d < kDays; ++d)
        kr.gemm(a.data(), cache.h1.row(static_cast<std::size_t>(d) * w2),
                cache.q.row(static_cast<std::size_t>(d) * w2), w2, w2, h, false);
    kr.gemm(cache.q.data(), p.w2.data(), cache.m2.data(), kDays * w2, h, h, false);
    apply_activation(cache.m2.data(), cache.h2.data(), kDays * w2 * h,
                     hp.identity_activation);

    // per-day fusion + LSTM sweep
    std::vector<double> pre(hl);
    for (int d = 0; d < kDays; ++d) {
        double* z = cache.z.row(d);
        std::memcpy(z, cache.h2.row(static_cast<std::size_t>(d) * w2),
                    static_cast<std::size_t>(w2) * h * sizeof(double));
        for (int k = 0; k < hp.n_t; ++k) z[w2 * h + k] = s.temporal(d, k);
        double* ain = cache.a_in.row(d);
        kr.gemv(p.w_in.data(), z, ain, m, zdim, false);
        kr.add(ain, p.b_in.data(), ain, m);
        apply_activation(ain, cache.u.row(d), m, hp.identity_activation);

        const double* u = cache.u.row(d);
        const double* h_prev = d > 0 ? cache.h.row(d - 1) : nullptr;
        auto gate = [&](const Matrix& wg_, const Matrix& ug_, const std::vector<double>& bg_,
                        double* out, bool is_tanh) {
            kr.gemv(wg_.data(), u, pre.data(), hl, m, false);
            if (h_prev) kr.gemv(ug_.data(), h_prev, pre.data(), hl, hl, true);
            for (int i = 0; i < hl; ++i)
                out[i] = is_tanh ? std::tanh(pre[i] + bg_[i]) : sigmoid(pre[i] + bg_[i]);
        };
        gate(p.wi, p.ui, p.bi, cache.gi.row(d), false);
        gate(p.wf, p.uf, p.bf, cache.gf.row(d), false);
        gate(p.wo, p.uo, p.bo, cache.go.row(d), false);
        gate(p.wg, p.ug, p.bg, cache.gg.row(d), true);
        for (int i = 0; i < hl; ++i) {
            const double c_prev = d > 0 ? cache.c(d - 1, i) : 0.0;
            cache.c(d, i) = cache.gf(d, i) * c_prev + cache.gi(d, i) * cache.gg(d, i);
            cache.tanh_c(d, i) = std::tanh(cache.c(d, i));
            cache.h(d, i) = cache.go(d, i) * cache.tanh_c(d, i);
        }
    }

    // spatial branch
    kr.gemm(a.data(), s.spatial.data(), cache.ps.data(), w2, w2, hp.n_s, false);
    kr.gemm(cache.ps.data(), p.v1.data(), cache.ms.data(), w2, hp.n_s, h, false);
    apply_activation(cache.ms.data(), cache.g.data(), w2 * h, hp.identity_activation);
    kr.gemv(p.w_sp.data(), cache.g.data(), cache.a_sp.data(), sd, w2 * h, false);
    kr.add(cache.a_sp.data(), p.b_sp.data(), cache.a_sp.data(), sd);
    apply_activation(cache.a_sp.data(), cache.s.data(), sd, hp.identity_activation);

    // head: last LSTM state joined with the spatial embedding
    std::memcpy(cache.r.data(), cache.h.row(kDays - 1),
                static_cast<std::size_t>(hl) * sizeof(double));
    std::memcpy(cache.r.data() + hl, cache.s.data(),
                static_cast<std::size_t>(sd) * sizeof(double));
    cache.yhat = kr.dot(p.w_out.data(), cache.r.data(), hl + sd) + p.b_out[0];

    if (!std::isfinite(cache.yhat)) {
        auto finite = [](const Matrix& mtx) {
            for (std::size_t i = 0; i < mtx.size(); ++i)
                if (!std::isfinite(mtx.data()[i])) return false;
            return true;
        };
        const char* layer = "output head";
        if (!finite(cache.m1)) layer = "graph convolution 1 (st)";
        else if (!finite(cache.m2)) layer = "graph convolution 2 (st)";
        else if (!finite(cache.a_in)) layer = "fc-in";
        else if (!finite(cache.c)) layer = "lstm";
        else if (!finite(cache.ms)) layer = "graph convolution (spatial)";
        throw std::runtime_error(std::string("forward: non-finite values in ") + layer);
    }
    return cache.yhat;
}

void backward(const samples::SubregionSample& s, const ModelParams& p,
              const HyperParams& hp, const ForwardCache& cache, double dy,
              ModelParams& grads, BackwardScratch& w) {
    const auto& kr = kernels::active();
    const int w2 = hp.w * hp.w;
    const int h = hp.gc_hidden;
    const int m = hp.lstm_input;
    const int hl = hp.lstm_hidden;
    const int sd = hp.spatial_dim;
    const int nst = hp.n_st;
    const int zdim = w2 * h + hp.n_t;
    const Matrix& a = *s.adjacency;

    ensure(w.dh2, kDays * w2, h);
    ensure(w.dm2, kDays * w2, h);
    ensure(w.dq, kDays * w2, h);
    ensure(w.dh1, kDays * w2, h);
    ensure(w.dm1, kDays * w2, h);
    ensure(w.da_in, kDays, m);
    ensure(w.du, kDays, m);
    ensure(w.dh, hl);
    ensure(w.dc, hl);
    for (Matrix* g : {&w.dgi, &w.dgf, &w.dgo, &w.dgg}) ensure(*g, kDays, hl);
    ensure(w.dg_mat, w2, h);
    ensure(w.dms, w2, h);
    ensure(w.da_sp, sd);
    ensure(w.ds, sd);
    ensure(w.dr, hl + sd);
    ensure(w.dz, kDays, zdim);

    // head
    kr.axpy(dy, cache.r.data(), grads.w_out.data(), hl + sd);
    grads.b_out[0] += dy;
    for (int j = 0; j < hl + sd; ++j) w.dr[j] = dy * p.w_out(0, j);
    std::memcpy(w.dh.data(), w.dr.data(), static_cast<std::size_t>(hl) * sizeof(double));
    std::memcpy(w.ds.data(), w.dr.data() + hl, static_cast<std::size_t>(sd) * sizeof(double));

    // spatial branch
    activation_backward(cache.a_sp.data(), w.ds.data(), w.da_sp.data(), sd,
                        hp.identity_activation);
    kr.ger_acc(w.da_sp.data(), cache.g.data(), grads.w_sp.data(), sd, w2 * h);
    kr.add(grads.b_sp.data(), w.da_sp.data(), grads.b_sp.data(), sd);
    w.dg_mat.fill(0.0);
    kr.gemv_t_acc(p.w_sp.data(), w.da_sp.data(), w.dg_mat.data(), sd, w2 * h);
    activation_backward(cache.ms.data(), w.dg_mat.data(), w.dms.data(), w2 * h,
                        hp.identity_activation);
    kr.gemm_tn_acc(cache.ps.data(), w.dms.data(), grads.v1.data(), w2, hp.n_s, h);

    // LSTM backward over the seven days
    std::fill(w.dc.begin(), w.dc.end(), 0.0);
    for (int d = kDays - 1; d >= 0; --d) {
        for (int i = 0; i < hl; ++i) {
            const double th = cache.tanh_c(d, i);
            w.dc[i] += w.dh[i] * cache.go(d, i) * (1.0 - th * th);
            const double go = cache.go(d, i);
            w.dgo(d, i) = w.dh[i] * th * go * (1.0 - go);
            const double gi = cache.gi(d, i);
            w.dgi(d, i) = w.dc[i] * cache.gg(d, i) * gi * (1.0 - gi);
            const double gg = cache.gg(d, i);
            w.dgg(d, i) = w.dc[i] * gi * (1.0 - gg * gg);
            const double c_prev = d > 0 ? cache.c(d - 1, i) : 0.0;
            const double gf = cache.gf(d, i);
            w.dgf(d, i) = w.dc[i] * c_prev * gf * (1.0 - gf);
        }
        const double* u = cache.u.row(d);
        const double* h_prev = d > 0 ? cache.h.row(d - 1) : nullptr;
        double* du = w.du.row(d);
        std::fill(du, du + m, 0.0);
        std::fill(w.dh.begin(), w.dh.end(), 0.0);
        auto gate_bwd = [&](const Matrix& wg_, const Matrix& ug_, Matrix& dwg,
                            Matrix& dug, std::vector<double>& dbg, const double* dpre) {
            kr.ger_acc(dpre, u, dwg.data(), hl, m);
            if (h_prev) kr.ger_acc(dpre, h_prev, dug.data(), hl, hl);
            kr.add(dbg.data(), dpre, dbg.data(), hl);
            kr.gemv_t_acc(wg_.data(), dpre, du, hl, m);
            kr.gemv_t_acc(ug_.data(), dpre, w.dh.data(), hl, hl);
        };
        gate_bwd(p.wi, p.ui, grads.wi, grads.ui, grads.bi, w.dgi.row(d));
        gate_bwd(p.wf, p.uf, grads.wf, grads.uf, grads.bf, w.dgf.row(d));
        gate_bwd(p.wo, p.uo, grads.wo, grads.uo, grads.bo, w.dgo.row(d));
        gate_bwd(p.wg, p.ug, grads.wg, grads.ug, grads.bg, w.dgg.row(d));
        // dh now holds the recurrent gradient for day d-1
        for (int i = 0; i < hl; ++i) w.dc[i] *= cache.gf(d, i);
    }

    // fc-in backward, filling the ST-branch gradient per day
    for (int d = 0; d < kDays; ++d) {
        activation_backward(cache.a_in.row(d), w.du.row(d), w.da_in.row(d), m,
                            hp.identity_activation);
        kr.ger_acc(w.da_in.row(d), cache.z.row(d), grads.w_in.data(), m, zdim);
        kr.add(grads.b_in.data(), w.da_in.row(d), grads.b_in.data(), m);
        double* dz = w.dz.row(d);
        std::fill(dz, dz + zdim, 0.0);
        kr.gemv_t_acc(p.w_in.data(), w.da_in.row(d), dz, m, zdim);
        std::memcpy(w.dh2.row(static_cast<std::size_t>(d) * w2), dz,
                    static_cast<std::size_t>(w2) * h * sizeof(double));
    }

    // ST graph convolutions
    activation_backward(cache.m2.data(), w.dh2.data(), w.dm2.data(), kDays * w2 * h,
                        hp.identity_activation);
    kr.gemm_tn_acc(cache.q.data(), w.dm2.data(), grads.w2.data(), kDays * w2, h, h);
    kr.gemm_nt(w.dm2.data(), p.w2.data(), w.dq.data(), kDays * w2, h, h, false);
    w.dh1.fill(0.0);
    for (int d = 0; d < kDays; ++d)
        kr.gemm_tn_acc(a.data(), w.dq.row(static_cast<std::size_t>(d) * w2),
                       w.dh1.row(static_cast<std::size_t>(d) * w2), w2, w2, h);
    activation_backward(cache.m1.data(), w.dh1.data(), w.dm1.data(), kDays * w2 * h,
                        hp.identity_activation);
    kr.gemm_tn_acc(cache.p_day.data(), w.dm1.data(), grads.w1.data(), kDays * w2, nst, h);
}

double loss_mse(const std::vector<double>& predictions,
                const std::vector<double>& targets) {
    if (predictions.size() != targets.size() || predictions.empty())
        throw std::runtime_error("loss_mse: size mismatch or empty input");
    return kernels::active().sumsq_diff(predictions.data(), targets.data(),
                                        static_cast<int>(predictions.size())) /
           static_cast<double>(predictions.size());
}

ModelParams gradients(const samples::SampleSource& batch,
                      const std::vector<std::size_t>& indices, const ModelParams& p,
                      const HyperParams& hp, double* batch_sse) {
    if (indices.empty()) throw std::runtime_error("gradients: empty batch");
    const double inv = 2.0 / static_cast<double>(indices.size());

    // fixed sub-blocks keep the reduction order independent of thread count
    std::vector<ModelParams> block_grads(kGradBlocks, ModelParams::shaped(hp));
    double block_sse[kGradBlocks] = {0.0};
#pragma omp parallel for schedule(static, 1)
    for (int b = 0; b < kGradBlocks; ++b) {
        const std::size_t lo = indices.size() * b / kGradBlocks;
        const std::size_t hi = indices.size() * (b + 1) / kGradBlocks;
        if (lo == hi) continue;
        ForwardCache cache;
        BackwardScratch scratch;
        samples::SubregionSample scratch_sample;
        double sse = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& s = batch.get(indices[i], scratch_sample);
            const double yhat = forward(s, p, hp, cache);
            sse += (yhat - s.target) * (yhat - s.target);
            backward(s, p, hp, cache, inv * (yhat - s.target), block_grads[b], scratch);
        }
        block_sse[b] = sse;
    }

    ModelParams out = std::move(block_grads[0]);
    auto dst = out.tensors();
    for (int b = 1; b < kGradBlocks; ++b) {
        const auto src = block_grads[b].tensors();
        for (std::size_t t = 0; t < dst.size(); ++t)
            kernels::active().add(dst[t].data, src[t].data, dst[t].data,
                                  static_cast<int>(dst[t].size));
    }
    if (batch_sse) {
        double total = 0.0;
        for (double v : block_sse) total += v;
        *batch_sse = total;
    }
    if (!out.all_finite()) throw std::runtime_error("gradients: non-finite gradient");
    return out;
}

}  // namespace hintnet::model
