#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "hintnet/grid.hpp"
#include "hintnet/samples.hpp"

using namespace hintnet;
using namespace hintnet::grid;

namespace {

GridSpec small_spec(int rows = 4, int cols = 4, int days = 10) {
    GridSpec s;
    s.rows = rows;
    s.cols = cols;
    s.cell_km = 5.0;
    s.origin_lat = 41.0;
    s.origin_lon = -94.0;
    s.time_start = Date{2016, 1, 1};
    s.num_days = days;
    return s;
}

// lat/lon of a point at local km offsets (dx east, dy north)
void latlon_at(const GridSpec& s, double dx, double dy, double& lat, double& lon) {
    s.to_latlon(dx, dy, lat, lon);
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("map_events_to_grid: empty input gives a zero tensor") {
    IngestStats st;
    const auto t = map_events_to_grid({}, small_spec(), st);
    CHECK(t.total() == 0);
    CHECK(st.skipped_out_of_bounds == 0);
}

TEST_CASE("map_events_to_grid: event at the origin lands in cell (0,0) day 0") {
    const auto s = small_spec();
    EventRecord e{Date{2016, 1, 1}, s.origin_lat, s.origin_lon};
    IngestStats st;
    const auto t = map_events_to_grid({e}, s, st);
    CHECK(t.counts(0, 0, 0) == 1);
    CHECK(t.total() == 1);
}

TEST_CASE("map_events_to_grid: per-cell totals match a brute-force recount") {
    const auto s = small_spec();
    std::vector<EventRecord> events;
    double lat, lon;
    latlon_at(s, 7.0, 12.0, lat, lon);  // cell (2,1)
    for (int i = 0; i < 3; ++i) events.push_back({Date{2016, 1, 3}, lat, lon});
    latlon_at(s, 16.0, 2.0, lat, lon);  // cell (0,3)
    events.push_back({Date{2016, 1, 3}, lat, lon});
    IngestStats st;
    const auto t = map_events_to_grid(events, s, st);
    CHECK(t.counts(2, 1, 2) == 3);
    CHECK(t.counts(0, 3, 2) == 1);
    CHECK(t.total() == 4);
}

TEST_CASE("map_events_to_grid: conservation with out-of-bounds and out-of-period") {
    const auto s = small_spec();
    std::vector<EventRecord> events;
    double lat, lon;
    latlon_at(s, 1.0, 1.0, lat, lon);
    events.push_back({Date{2016, 1, 2}, lat, lon});
    latlon_at(s, 100.0, 1.0, lat, lon);  // east of the grid
    events.push_back({Date{2016, 1, 2}, lat, lon});
    latlon_at(s, 1.0, -0.5, lat, lon);  // south of the grid
    events.push_back({Date{2016, 1, 2}, lat, lon});
    latlon_at(s, 1.0, 1.0, lat, lon);
    events.push_back({Date{2015, 12, 31}, lat, lon});  // before the period
    IngestStats st;
    const auto t = map_events_to_grid(events, s, st);
    CHECK(t.total() + st.skipped_out_of_bounds + st.skipped_out_of_period ==
          static_cast<long long>(events.size()));
    CHECK(st.skipped_out_of_bounds == 2);
    CHECK(st.skipped_out_of_period == 1);
}

TEST_CASE("map_events_to_grid: non-finite coordinates are rejected") {
    IngestStats st;
    CHECK_THROWS(map_events_to_grid(
        {{Date{2016, 1, 2}, std::nan(""), -94.0}}, small_spec(), st));
}

TEST_CASE("rasterize_roads: no segments, blank mask") {
    const auto mask = rasterize_roads({}, small_spec());
    CHECK(mask.road_cell_count() == 0);
}

TEST_CASE("rasterize_roads: a short in-cell segment marks exactly that cell") {
    const auto s = small_spec();
    double lat1, lon1, lat2, lon2;
    latlon_at(s, 6.0, 6.0, lat1, lon1);
    latlon_at(s, 8.0, 8.0, lat2, lon2);
    const auto mask = rasterize_roads({{lat1, lon1, lat2, lon2, 55, 1000, 1}}, s);
    CHECK(mask.road_cell_count() == 1);
    CHECK(mask.mask(1, 1) == 1);
}

TEST_CASE("rasterize_roads: diagonal segment matches dense point sampling") {
    const auto s = small_spec(3, 3);
    double lat1, lon1, lat2, lon2;
    latlon_at(s, 0.1, 0.1, lat1, lon1);
    latlon_at(s, 14.9, 14.9, lat2, lon2);
    const auto mask = rasterize_roads({{lat1, lon1, lat2, lon2, 55, 1000, 1}}, s);

    // oracle: sample the segment densely and collect touched cells
    Grid2<std::uint8_t> oracle(3, 3, 0);
    for (int i = 0; i <= 100000; ++i) {
        const double f = i / 100000.0;
        const double x = 0.1 + f * (14.9 - 0.1);
        const double y = 0.1 + f * (14.9 - 0.1);
        const auto cell = s.cell_of_local(x, y);
        REQUIRE(cell.has_value());
        oracle(cell->first, cell->second) = 1;
    }
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(mask.mask(r, c) == oracle(r, c));
}

TEST_CASE("rasterize_roads: attribute channels average over intersecting segments") {
    const auto s = small_spec();
    Grid3<double> fs(s.rows, s.cols, kPoiCategories + kRoadAttrChannels + 2, 0.0);
    double lat1, lon1, lat2, lon2;
    latlon_at(s, 6.0, 6.0, lat1, lon1);
    latlon_at(s, 8.0, 8.0, lat2, lon2);
    const auto mask = rasterize_roads({{lat1, lon1, lat2, lon2, 60, 2000, 1},
                                       {lat1, lon1, lat2, lon2, 40, 1000, 2}},
                                      s, &fs);
    CHECK(mask.mask(1, 1) == 1);
    CHECK(fs(1, 1, kPoiCategories) == 1.0);          // mask channel
    CHECK(fs(1, 1, kPoiCategories + 1) == doctest::Approx(50.0));   // mean speed
    CHECK(fs(1, 1, kPoiCategories + 2) == doctest::Approx(1500.0)); // mean aadt
    CHECK(fs(1, 1, kPoiCategories + 3) == doctest::Approx(0.5));    // class 1 share
    CHECK(fs(1, 1, kPoiCategories + 4) == doctest::Approx(0.5));    // class 2 share
    CHECK(fs(0, 0, kPoiCategories + 1) == 0.0);  // off-road cells stay zero
}

TEST_CASE("calendar_features: fixed dates") {
    HolidaySet hol{Date{2016, 1, 1}};
    const auto f1 = calendar_features(Date{2016, 1, 1}, hol);
    CHECK(f1 == std::array<double, 5>{4, 1, 1, 0, 1});
    const auto f2 = calendar_features(Date{2016, 1, 2}, hol);
    CHECK(f2 == std::array<double, 5>{5, 2, 1, 1, 0});
    // pure function of (date, holiday list)
    CHECK(calendar_features(Date{2016, 1, 1}, hol) == f1);
    CHECK(calendar_features(Date{2016, 1, 1}, HolidaySet{})[4] == 0.0);
}

TEST_CASE("map_poi: category counts per cell") {
    const auto s = small_spec();
    Grid3<double> fs(s.rows, s.cols, 29, 0.0);
    CHECK(map_poi({}, s, fs) == 0);
    double lat, lon;
    latlon_at(s, 2.0, 2.0, lat, lon);
    std::vector<PoiPoint> pts = {{lat, lon, 1}, {lat, lon, 1}, {lat, lon, 7}};
    latlon_at(s, 300.0, 2.0, lat, lon);
    pts.push_back({lat, lon, 3});  // out of bounds
    CHECK(map_poi(pts, s, fs) == 1);
    CHECK(fs(0, 0, 0) == 2.0);
    CHECK(fs(0, 0, 6) == 1.0);

    // per-channel sums equal per-category input counts
    double ch0 = 0;
    for (std::size_t r = 0; r < fs.rows(); ++r)
        for (std::size_t c = 0; c < fs.cols(); ++c) ch0 += fs(r, c, 0);
    CHECK(ch0 == 2.0);
    CHECK_THROWS(map_poi({{41.0, -94.0, 14}}, s, fs));
}

TEST_CASE("spectral_features: 3-cell path graph") {
    // mask with exactly 3 road cells in a horizontal line, far apart rows
    RoadMask mask;
    mask.mask = Grid2<std::uint8_t>(1, 3, 0);
    for (int c = 0; c < 3; ++c) mask.mask(0, c) = 1;
    Grid3<double> fs(1, 3, 2, 0.0);
    const int filled = spectral_features(mask, 2, fs, 0);
    CHECK(filled == 2);
    // Laplacian [[1,-1,0],[-1,2,-1],[0,-1,1]]: first nonzero eigenvalue 1 with
    // eigenvector (1,0,-1)/sqrt(2), sign-fixed to positive first entry
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(fs(0, 0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-9));
    CHECK(fs(0, 1, 0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fs(0, 2, 0) == doctest::Approx(-inv_sqrt2).epsilon(1e-9));
    // second channel: eigenvalue 3, eigenvector prop to (1,-2,1), sign-fixed so
    // the largest-magnitude entry is positive -> (-1,2,-1)/sqrt(6)
    const double inv_sqrt6 = 1.0 / std::sqrt(6.0);
    CHECK(fs(0, 0, 1) == doctest::Approx(-inv_sqrt6).epsilon(1e-9));
    CHECK(fs(0, 1, 1) == doctest::Approx(2 * inv_sqrt6).epsilon(1e-9));
    CHECK(fs(0, 2, 1) == doctest::Approx(-inv_sqrt6).epsilon(1e-9));
}

TEST_CASE("spectral_features: disconnected graph excludes the whole null space") {
    // two 2-cell components separated by a gap
    RoadMask mask;
    mask.mask = Grid2<std::uint8_t>(1, 5, 0);
    mask.mask(0, 0) = mask.mask(0, 1) = mask.mask(0, 3) = mask.mask(0, 4) = 1;
    Grid3<double> fs(1, 5, 3, 0.0);
    const int filled = spectral_features(mask, 3, fs, 0);
    // 4 nodes, 2 components -> only 2 nonzero eigenvalues available
    CHECK(filled == 2);
    for (int c = 0; c < 5; ++c) CHECK(fs(0, c, 2) == 0.0);
    // channels must not be (near-)constant within a component, which would
    // indicate a null-space vector leaked through
    CHECK(std::fabs(fs(0, 0, 0) - fs(0, 1, 0)) + std::fabs(fs(0, 3, 0) - fs(0, 4, 0)) >
          1e-6);
}

TEST_CASE("spectral_features: empty mask is an error") {
    RoadMask mask;
    mask.mask = Grid2<std::uint8_t>(2, 2, 0);
    Grid3<double> fs(2, 2, 1, 0.0);
    CHECK_THROWS(spectral_features(mask, 1, fs, 0));
}

TEST_CASE("spectral_features: invariant to road-cell relabeling (grid transpose)") {
    std::mt19937_64 rng(5);
    Grid2<std::uint8_t> m(6, 6, 0);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) m(r, c) = rng() % 3 != 0;
    RoadMask a{m};
    RoadMask b;  // transposed mask: nodes enumerate in a different order
    b.mask = Grid2<std::uint8_t>(6, 6, 0);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) b.mask(c, r) = m(r, c);
    Grid3<double> fa(6, 6, 4, 0.0), fb(6, 6, 4, 0.0);
    const int na = spectral_features(a, 4, fa, 0);
    const int nb = spectral_features(b, 4, fb, 0);
    REQUIRE(na == nb);
    for (int k = 0; k < na; ++k)
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c)
                CHECK(fa(r, c, k) == doctest::Approx(fb(c, r, k)).epsilon(1e-7));
}

TEST_CASE("holiday list parsing skips comments and blanks") {
    const char* path = "holidays_test.txt";
    {
        std::ofstream out(path);
        out << "# fixture\n2016-01-01\n\n2016-07-04\n";
    }
    const auto h = load_holidays(path);
    CHECK(h.size() == 2);
    CHECK(h.count(Date{2016, 7, 4}) == 1);
    std::remove(path);
}

}  // TEST_SUITE
