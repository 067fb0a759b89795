#include <doctest.h>

#include <cmath>
#include <random>

#include "hintnet/subregion.hpp"

using namespace hintnet;
using namespace hintnet::subregion;

namespace {

// direct transcription of the correlation-coefficient formula, kept separate
// from the implementation on purpose
double pearson_naive(const double* x, const double* y, int n) {
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double num = 0, dx = 0, dy = 0;
    for (int i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        dx += (x[i] - mx) * (x[i] - mx);
        dy += (y[i] - my) * (y[i] - my);
    }
    if (dx == 0 || dy == 0) return 0.0;
    return num / std::sqrt(dx * dy);
}

}  // namespace

TEST_SUITE("subregion") {

TEST_CASE("pearson: identical nonconstant series correlate 1") {
    Matrix s(2, 3);
    for (int t = 0; t < 3; ++t) {
        s(0, t) = t + 1;
        s(1, t) = t + 1;
    }
    const auto a = pearson_adjacency_raw(s);
    CHECK(a(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a(0, 0) == 1.0);
}

TEST_CASE("pearson: opposite series correlate -1, clamped to 0") {
    Matrix s(2, 3);
    s(0, 0) = 1; s(0, 1) = 2; s(0, 2) = 3;
    s(1, 0) = 3; s(1, 1) = 2; s(1, 2) = 1;
    const auto raw = pearson_adjacency_raw(s);
    CHECK(raw(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    const auto a = pearson_adjacency(s);
    CHECK(a(0, 1) == 0.0);
    CHECK(a(0, 0) == 1.0);  // row {1, 0} normalizes to itself
}

TEST_CASE("pearson: all-constant window becomes the identity") {
    Matrix s(4, 5, 2.0);
    const auto a = pearson_adjacency(s);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(a(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("pearson: series shorter than 2 days is an error") {
    CHECK_THROWS(pearson_adjacency(Matrix(3, 1, 1.0)));
}

TEST_CASE("pearson raw matches the naive formula on random integer series") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> counts(0, 6);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 9, days = 2 + static_cast<int>(rng() % 30);
        Matrix s(n, days);
        for (int i = 0; i < n; ++i)
            for (int t = 0; t < days; ++t) s(i, t) = counts(rng);
        const auto raw = pearson_adjacency_raw(s);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double expect =
                    i == j ? 1.0 : pearson_naive(s.row(i), s.row(j), days);
                CHECK(std::fabs(raw(i, j) - expect) < 1e-12);
            }
        }
    }
}

TEST_CASE("row-normalized adjacency is right-stochastic with nonnegative entries") {
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<int> counts(0, 4);
    for (int rep = 0; rep < 50; ++rep) {
        Matrix s(25, 40);
        for (std::size_t i = 0; i < s.size(); ++i) s.data()[i] = counts(rng);
        const auto a = pearson_adjacency(s);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            double sum = 0;
            for (std::size_t j = 0; j < a.cols(); ++j) {
                CHECK(a(i, j) >= 0.0);
                sum += a(i, j);
            }
            CHECK(std::fabs(sum - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("window_series: padding cells carry all-zero series") {
    Grid3<int> counts(4, 4, 6, 1);
    const std::vector<int> days{0, 2, 4};
    const auto s = window_series(counts, days, 0, 0, 3);
    // center (0,0) with w=3: top-left 2x2 of the window is outside the grid
    CHECK(s.rows() == 9);
    CHECK(s.cols() == 3);
    for (int t = 0; t < 3; ++t) {
        CHECK(s(0, t) == 0.0);  // (-1,-1)
        CHECK(s(4, t) == 1.0);  // (0,0)
        CHECK(s(8, t) == 1.0);  // (1,1)
    }
}

TEST_CASE("extract_window: interior slice and corner zero padding") {
    Grid3<double> t(4, 4, 2, 0.0);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            for (int k = 0; k < 2; ++k) t(r, c, k) = r * 10 + c + k * 100;
    const auto inner = extract_window(t, 2, 2, 3);
    CHECK(inner[0 * 2 + 0] == 11.0);  // window cell (0,0) = grid (1,1)
    CHECK(inner[8 * 2 + 1] == 133.0); // window cell (2,2) = grid (3,3), channel 1

    const auto corner = extract_window(t, 0, 0, 5);
    int zeros = 0;
    for (int wr = 0; wr < 5; ++wr)
        for (int wc = 0; wc < 5; ++wc)
            if (corner[(wr * 5 + wc) * 2] == 0.0 && corner[(wr * 5 + wc) * 2 + 1] == 0.0)
                ++zeros;
    // grid (0,0) holds value 0 in channel 0 but 100 in channel 1, so exactly
    // the 16 out-of-grid positions are all-zero
    CHECK(zeros == 16);

    double sum_window = 0, sum_tensor = 0;
    for (double v : corner) sum_window += v;
    for (double v : t.raw()) sum_tensor += v;
    CHECK(sum_window <= sum_tensor);
}

TEST_CASE("adjacency cache covers exactly the road cells") {
    Grid3<int> counts(5, 5, 12, 0);
    std::mt19937_64 rng(11);
    for (auto& v : counts.raw()) v = static_cast<int>(rng() % 3);
    Grid2<std::uint8_t> mask(5, 5, 0);
    mask(1, 1) = mask(2, 3) = 1;
    const std::vector<int> train_days{0, 1, 2, 3, 4, 5, 6, 7};
    const auto cache = build_adjacency_cache(counts, mask, train_days, 3);
    CHECK(cache.size() == 2);
    CHECK(cache.get(1, 1) != nullptr);
    CHECK(cache.get(2, 3) != nullptr);
    CHECK(cache.get(0, 0) == nullptr);
    CHECK(cache.get(1, 1)->rows() == 9);

    // cached matrix equals a direct computation from the same series
    const auto direct = pearson_adjacency(window_series(counts, train_days, 1, 1, 3));
    CHECK(*cache.get(1, 1) == direct);
}

}  // TEST_SUITE
