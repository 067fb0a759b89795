#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hintnet/kernels.hpp"

using namespace hintnet;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

double max_abs_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({1.0, std::fabs(a[i]), std::fabs(b[i])});
        worst = std::max(worst, std::fabs(a[i] - b[i]) / scale);
    }
    return worst;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("lane listing always contains the scalar reference") {
    auto lanes = kernels::available_lanes();
    REQUIRE(!lanes.empty());
    CHECK(std::string(lanes[0]->name) == "scalar");
    CHECK(kernels::lane_by_name("scalar") == &kernels::scalar());
    CHECK(kernels::lane_by_name("no-such-lane") == nullptr);
}

TEST_CASE("elementwise ops are bit-identical across lanes") {
    std::mt19937_64 rng(7);
    for (const auto* lane : kernels::available_lanes()) {
        for (int n : {1, 3, 4, 7, 64, 129}) {
            const auto x = random_vec(rng, n);
            const auto y = random_vec(rng, n);
            std::vector<double> ref(n), got(n);

            kernels::scalar().add(x.data(), y.data(), ref.data(), n);
            lane->add(x.data(), y.data(), got.data(), n);
            CHECK(ref == got);

            kernels::scalar().sub(x.data(), y.data(), ref.data(), n);
            lane->sub(x.data(), y.data(), got.data(), n);
            CHECK(ref == got);

            kernels::scalar().mul(x.data(), y.data(), ref.data(), n);
            lane->mul(x.data(), y.data(), got.data(), n);
            CHECK(ref == got);

            kernels::scalar().relu(x.data(), ref.data(), n);
            lane->relu(x.data(), got.data(), n);
            CHECK(ref == got);

            kernels::scalar().relu_mask(x.data(), y.data(), ref.data(), n);
            lane->relu_mask(x.data(), y.data(), got.data(), n);
            CHECK(ref == got);

            ref = y;
            got = y;
            kernels::scalar().scale(1.7, ref.data(), n);
            lane->scale(1.7, got.data(), n);
            CHECK(ref == got);
        }
    }
}

TEST_CASE("fused ops agree with the scalar lane within rounding") {
    std::mt19937_64 rng(11);
    for (const auto* lane : kernels::available_lanes()) {
        for (int n : {1, 5, 16, 63, 200}) {
            const auto x = random_vec(rng, n);
            const auto y = random_vec(rng, n);
            auto ref = random_vec(rng, n);
            auto got = ref;

            kernels::scalar().axpy(0.37, x.data(), ref.data(), n);
            lane->axpy(0.37, x.data(), got.data(), n);
            CHECK(max_abs_rel_diff(ref, got) < 1e-15);

            kernels::scalar().mul_acc(x.data(), y.data(), ref.data(), n);
            lane->mul_acc(x.data(), y.data(), got.data(), n);
            CHECK(max_abs_rel_diff(ref, got) < 1e-15);
        }
    }
}

TEST_CASE("reductions agree with the scalar lane within reassociation error") {
    std::mt19937_64 rng(13);
    for (const auto* lane : kernels::available_lanes()) {
        for (int n : {1, 2, 7, 64, 500, 1001}) {
            const auto x = random_vec(rng, n);
            const auto y = random_vec(rng, n);
            const double tol = 1e-13 * n;
            CHECK(std::fabs(lane->dot(x.data(), y.data(), n) -
                            kernels::scalar().dot(x.data(), y.data(), n)) < tol);
            CHECK(std::fabs(lane->sum(x.data(), n) - kernels::scalar().sum(x.data(), n)) <
                  tol);
            CHECK(std::fabs(lane->sumsq_diff(x.data(), y.data(), n) -
                            kernels::scalar().sumsq_diff(x.data(), y.data(), n)) < tol);
        }
    }
}

TEST_CASE("matrix products agree across lanes on odd shapes") {
    std::mt19937_64 rng(17);
    struct Shape {
        int m, k, n;
    };
    for (const auto* lane : kernels::available_lanes()) {
        for (const auto [m, k, n] :
             {Shape{1, 1, 1}, Shape{3, 5, 7}, Shape{25, 13, 16}, Shape{25, 25, 91},
              Shape{8, 8, 8}, Shape{175, 16, 16}, Shape{6, 31, 9}}) {
            const auto a = random_vec(rng, m * k);
            const auto b = random_vec(rng, k * n);
            std::vector<double> ref(m * n), got(m * n);
            kernels::scalar().gemm(a.data(), b.data(), ref.data(), m, k, n, false);
            lane->gemm(a.data(), b.data(), got.data(), m, k, n, false);
            CHECK(max_abs_rel_diff(ref, got) < 1e-13);

            // accumulate variant
            auto ref_acc = random_vec(rng, m * n);
            auto got_acc = ref_acc;
            kernels::scalar().gemm(a.data(), b.data(), ref_acc.data(), m, k, n, true);
            lane->gemm(a.data(), b.data(), got_acc.data(), m, k, n, true);
            CHECK(max_abs_rel_diff(ref_acc, got_acc) < 1e-13);

            // a^T * b with a as [m x k], b as [m x n'] requires matching lead dim;
            // reuse shapes: c[k x n] += a[m x k]^T b[m x n] with n := k dims swapped
            std::vector<double> c_ref(k * n, 0.25), c_got(k * n, 0.25);
            const auto b2 = random_vec(rng, m * n);
            kernels::scalar().gemm_tn_acc(a.data(), b2.data(), c_ref.data(), m, k, n);
            lane->gemm_tn_acc(a.data(), b2.data(), c_got.data(), m, k, n);
            CHECK(max_abs_rel_diff(c_ref, c_got) < 1e-13);

            // a[m x n''] * b[k x n'']^T
            const auto a3 = random_vec(rng, m * n);
            const auto b3 = random_vec(rng, k * n);
            std::vector<double> d_ref(m * k), d_got(m * k);
            kernels::scalar().gemm_nt(a3.data(), b3.data(), d_ref.data(), m, n, k, false);
            lane->gemm_nt(a3.data(), b3.data(), d_got.data(), m, n, k, false);
            CHECK(max_abs_rel_diff(d_ref, d_got) < 1e-13);
        }
    }
}

TEST_CASE("gemv family agrees across lanes") {
    std::mt19937_64 rng(23);
    for (const auto* lane : kernels::available_lanes()) {
        for (int m : {1, 4, 16, 33}) {
            for (int n : {1, 5, 32, 405}) {
                const auto w = random_vec(rng, m * n);
                const auto x = random_vec(rng, n);
                const auto y = random_vec(rng, m);
                std::vector<double> ref(m), got(m);
                kernels::scalar().gemv(w.data(), x.data(), ref.data(), m, n, false);
                lane->gemv(w.data(), x.data(), got.data(), m, n, false);
                CHECK(max_abs_rel_diff(ref, got) < 1e-13);

                std::vector<double> xr(n, 0.5), xg(n, 0.5);
                kernels::scalar().gemv_t_acc(w.data(), y.data(), xr.data(), m, n);
                lane->gemv_t_acc(w.data(), y.data(), xg.data(), m, n);
                CHECK(max_abs_rel_diff(xr, xg) < 1e-13);

                auto wr = w;
                auto wg = w;
                kernels::scalar().ger_acc(y.data(), x.data(), wr.data(), m, n);
                lane->ger_acc(y.data(), x.data(), wg.data(), m, n);
                CHECK(max_abs_rel_diff(wr, wg) < 1e-13);
            }
        }
    }
}

TEST_CASE("gemm against a hand-rolled triple loop") {
    std::mt19937_64 rng(29);
    const int m = 4, k = 3, n = 2;
    const auto a = random_vec(rng, m * k);
    const auto b = random_vec(rng, k * n);
    std::vector<double> naive(m * n, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < k; ++l) naive[i * n + j] += a[i * k + l] * b[l * n + j];
    for (const auto* lane : kernels::available_lanes()) {
        std::vector<double> got(m * n);
        lane->gemm(a.data(), b.data(), got.data(), m, k, n, false);
        CHECK(max_abs_rel_diff(naive, got) < 1e-13);
    }
}

}  // TEST_SUITE
