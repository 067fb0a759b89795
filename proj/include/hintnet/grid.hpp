#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hintnet/date.hpp"
#include "hintnet/matrix.hpp"

namespace hintnet::grid {

// Local equirectangular projection constants (km per degree at mid-latitudes).
inline constexpr double kKmPerDegLat = 110.574;
inline constexpr double kKmPerDegLonAtEquator = 111.320;

// The L x T discretization everything is indexed by: rows x cols cells of
// cell_km x cell_km, daily time steps starting at time_start. Row 0 / col 0
// is the south-west corner; cells are half-open [x, x+d) so boundary points
// map uniquely.
struct GridSpec {
    int rows = 0;
    int cols = 0;
    double cell_km = 5.0;
    double origin_lat = 0.0;
    double origin_lon = 0.0;
    Date time_start;
    int num_days = 0;

    void validate() const;  // throws on violated invariants

    double km_per_deg_lon() const {
        return kKmPerDegLonAtEquator * std::cos(origin_lat * M_PI / 180.0);
    }
    // grid-local km coordinates (x east, y north)
    void to_local(double lat, double lon, double& x, double& y) const {
        x = (lon - origin_lon) * km_per_deg_lon();
        y = (lat - origin_lat) * kKmPerDegLat;
    }
    void to_latlon(double x, double y, double& lat, double& lon) const {
        lat = origin_lat + y / kKmPerDegLat;
        lon = origin_lon + x / km_per_deg_lon();
    }
    std::optional<std::pair<int, int>> cell_of_local(double x, double y) const {
        if (x < 0 || y < 0) return std::nullopt;
        const int c = static_cast<int>(std::floor(x / cell_km));
        const int r = static_cast<int>(std::floor(y / cell_km));
        if (r >= rows || c >= cols) return std::nullopt;
        return std::make_pair(r, c);
    }
    std::optional<std::pair<int, int>> cell_of(double lat, double lon) const {
        double x, y;
        to_local(lat, lon, x, y);
        return cell_of_local(x, y);
    }
    // day index relative to time_start; may fall outside [0, num_days)
    int day_index(const Date& d) const {
        return static_cast<int>(to_serial(d) - to_serial(time_start));
    }
};

struct EventRecord {
    Date date;
    double lat = 0.0;
    double lon = 0.0;
};

struct AccidentTensor {
    Grid3<int> counts;  // [rows x cols x num_days]
    long long total() const;
};

struct RoadMask {
    Grid2<std::uint8_t> mask;  // [rows x cols], 1 = has road
    int road_cell_count() const;
};

struct RoadSegment {
    double lat1, lon1, lat2, lon2;
    double speed_limit = 0.0;
    double aadt = 0.0;
    int road_class = 1;  // 1..3
};

struct PoiPoint {
    double lat, lon;
    int category = 1;  // 1..13
};

// Fixed spatial channel layout: 13 POI + 6 road attributes + n_spectral.
inline constexpr int kPoiCategories = 13;
inline constexpr int kRoadAttrChannels = 6;  // mask, speed, aadt, class 1..3 shares

struct FeatureSet {
    Grid3<double> fs;   // [rows x cols x n_s] static spatial channels
    Matrix ft;          // [num_days x n_t] temporal channels (shared by all cells)
    Grid4<double> fst;  // [rows x cols x num_days x n_st]
    std::vector<std::string> fs_names, ft_names, fst_names;
    // channels exempt from standardization (kept raw)
    std::vector<std::uint8_t> fs_binary, ft_binary, fst_binary;

    int n_s() const { return static_cast<int>(fs_names.size()); }
    int n_t() const { return static_cast<int>(ft_names.size()); }
    int n_st() const { return static_cast<int>(fst_names.size()); }
};

struct IngestStats {
    long long skipped_out_of_bounds = 0;
    long long skipped_out_of_period = 0;
};

// -- gridding ---------------------------------------------------------------

AccidentTensor map_events_to_grid(const std::vector<EventRecord>& events,
                                  const GridSpec& spec, IngestStats& stats);

// mask + the 6 road-attribute channels (written into fs channels
// [kPoiCategories, kPoiCategories+6)). Cells touched by a segment are found
// by stepping the segment at <= cell_km/4 resolution.
RoadMask rasterize_roads(const std::vector<RoadSegment>& segments, const GridSpec& spec,
                         Grid3<double>* fs = nullptr);

// POI category counts into fs channels [0, 13). Returns skipped count.
long long map_poi(const std::vector<PoiPoint>& points, const GridSpec& spec,
                  Grid3<double>& fs);

// -- calendar ----------------------------------------------------------------

using HolidaySet = std::set<Date>;

HolidaySet load_holidays(const std::string& path);

// (day_of_week Mon=0, day_of_year, month, is_weekend, is_holiday)
std::array<double, 5> calendar_features(const Date& d, const HolidaySet& holidays);

Matrix calendar_feature_matrix(const GridSpec& spec, const HolidaySet& holidays);

// -- spectral road-graph features ---------------------------------------------

// Eigenvectors of the road-cell graph Laplacian (8-neighbor edges) for the
// n_spec smallest nonzero eigenvalues, written into fs channels
// [channel0, channel0 + n_spec). Non-road cells stay 0. Returns the number of
// channels actually filled (< n_spec pads with zeros and warns on stderr).
int spectral_features(const RoadMask& mask, int n_spec, Grid3<double>& fs, int channel0);

std::vector<std::string> default_fs_names(int n_spectral);
std::vector<std::uint8_t> default_fs_binary(int n_spectral);
std::vector<std::string> default_ft_names();
std::vector<std::uint8_t> default_ft_binary();
std::vector<std::string> default_fst_names(int n_extra);

// -- csv ingestion -----------------------------------------------------------

std::vector<EventRecord> load_events_csv(const std::string& path);
std::vector<RoadSegment> load_roads_csv(const std::string& path);
std::vector<PoiPoint> load_poi_csv(const std::string& path);

}  // namespace hintnet::grid
