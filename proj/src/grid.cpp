#include "hintnet/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "hintnet/csv.hpp"

namespace hintnet::grid {

void GridSpec::validate() const {
    if (rows < 1 || cols < 1) throw std::runtime_error("grid: rows and cols must be >= 1");
    if (!(cell_km > 0)) throw std::runtime_error("grid: cell_size_km must be > 0");
    if (num_days < 8)
        throw std::runtime_error("grid: num_days must be >= 8 (7-day window plus target)");
    if (!is_valid(time_start)) throw std::runtime_error("grid: invalid time_start");
    if (!std::isfinite(origin_lat) || !std::isfinite(origin_lon) ||
        std::fabs(origin_lat) > 89.0)
        throw std::runtime_error("grid: invalid origin");
}

long long AccidentTensor::total() const {
    long long s = 0;
    for (int v : counts.raw()) s += v;
    return s;
}

int RoadMask::road_cell_count() const {
    int n = 0;
    for (auto v : mask.raw()) n += v;
    return n;
}

AccidentTensor map_events_to_grid(const std::vector<EventRecord>& events,
                                  const GridSpec& spec, IngestStats& stats) {
    spec.validate();
    AccidentTensor out;
    out.counts = Grid3<int>(spec.rows, spec.cols, spec.num_days, 0);
    for (const auto& e : events) {
        if (!std::isfinite(e.lat) || !std::isfinite(e.lon))
            throw std::runtime_error("event with non-finite coordinates at " +
                                     format_date(e.date));
        const int t = spec.day_index(e.date);
        if (t < 0 || t >= spec.num_days) {
            ++stats.skipped_out_of_period;
            continue;
        }
        const auto cell = spec.cell_of(e.lat, e.lon);
        if (!cell) {
            ++stats.skipped_out_of_bounds;
            continue;
        }
        ++out.counts(cell->first, cell->second, t);
    }
    return out;
}

RoadMask rasterize_roads(const std::vector<RoadSegment>& segments, const GridSpec& spec,
                         Grid3<double>* fs) {
    spec.validate();
    RoadMask out;
    out.mask = Grid2<std::uint8_t>(spec.rows, spec.cols, 0);

    // per-cell attribute accumulators (a segment contributes once per cell)
    Grid2<double> speed_sum(spec.rows, spec.cols), aadt_sum(spec.rows, spec.cols);
    Grid2<double> cls_sum[3] = {Grid2<double>(spec.rows, spec.cols),
                                Grid2<double>(spec.rows, spec.cols),
                                Grid2<double>(spec.rows, spec.cols)};
    Grid2<int> n_seg(spec.rows, spec.cols, 0);

    std::vector<long> touched;
    for (const auto& s : segments) {
        if (!std::isfinite(s.lat1) || !std::isfinite(s.lon1) || !std::isfinite(s.lat2) ||
            !std::isfinite(s.lon2))
            throw std::runtime_error("road segment with non-finite endpoint");
        if (s.road_class < 1 || s.road_class > 3)
            throw std::runtime_error("road segment with class outside 1..3");
        double x1, y1, x2, y2;
        spec.to_local(s.lat1, s.lon1, x1, y1);
        spec.to_local(s.lat2, s.lon2, x2, y2);
        const double len = std::hypot(x2 - x1, y2 - y1);
        const double step = spec.cell_km / 4.0;
        const int n_steps = std::max(1, static_cast<int>(std::ceil(len / step)));
        touched.clear();
        for (int i = 0; i <= n_steps; ++i) {
            const double f = static_cast<double>(i) / n_steps;
            const auto cell = spec.cell_of_local(x1 + f * (x2 - x1), y1 + f * (y2 - y1));
            if (!cell) continue;
            const long idx = static_cast<long>(cell->first) * spec.cols + cell->second;
            if (std::find(touched.begin(), touched.end(), idx) == touched.end())
                touched.push_back(idx);
        }
        for (long idx : touched) {
            const int r = static_cast<int>(idx / spec.cols);
            const int c = static_cast<int>(idx % spec.cols);
            out.mask(r, c) = 1;
            speed_sum(r, c) += s.speed_limit;
            aadt_sum(r, c) += s.aadt;
            cls_sum[s.road_class - 1](r, c) += 1.0;
            ++n_seg(r, c);
        }
    }

    if (fs) {
        const int c0 = kPoiCategories;
        for (int r = 0; r < spec.rows; ++r) {
            for (int c = 0; c < spec.cols; ++c) {
                const int n = n_seg(r, c);
                (*fs)(r, c, c0) = out.mask(r, c);
                if (n > 0) {
                    (*fs)(r, c, c0 + 1) = speed_sum(r, c) / n;
                    (*fs)(r, c, c0 + 2) = aadt_sum(r, c) / n;
                    for (int k = 0; k < 3; ++k)
                        (*fs)(r, c, c0 + 3 + k) = cls_sum[k](r, c) / n;
                }
            }
        }
    }
    return out;
}

long long map_poi(const std::vector<PoiPoint>& points, const GridSpec& spec,
                  Grid3<double>& fs) {
    spec.validate();
    long long skipped = 0;
    for (const auto& p : points) {
        if (p.category < 1 || p.category > kPoiCategories)
            throw std::runtime_error("poi category outside 1..13");
        const auto cell = spec.cell_of(p.lat, p.lon);
        if (!cell) {
            ++skipped;
            continue;
        }
        fs(cell->first, cell->second, p.category - 1) += 1.0;
    }
    return skipped;
}

HolidaySet load_holidays(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open holiday list " + path);
    HolidaySet out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.insert(parse_date(line));
    }
    return out;
}

std::array<double, 5> calendar_features(const Date& d, const HolidaySet& holidays) {
    const int dow = weekday(d);
    return {static_cast<double>(dow),
            static_cast<double>(day_of_year(d)),
            static_cast<double>(d.month),
            dow >= 5 ? 1.0 : 0.0,
            holidays.count(d) ? 1.0 : 0.0};
}

Matrix calendar_feature_matrix(const GridSpec& spec, const HolidaySet& holidays) {
    Matrix ft(spec.num_days, 5);
    const auto start = to_serial(spec.time_start);
    for (int t = 0; t < spec.num_days; ++t) {
        const auto f = calendar_features(from_serial(start + t), holidays);
        for (int k = 0; k < 5; ++k) ft(t, k) = f[k];
    }
    return ft;
}

std::vector<std::string> default_fs_names(int n_spectral) {
    std::vector<std::string> names;
    for (int i = 1; i <= kPoiCategories; ++i) names.push_back("poi_cat_" + std::to_string(i));
    names.insert(names.end(), {"road_mask", "road_speed_limit", "road_aadt",
                               "road_class_1", "road_class_2", "road_class_3"});
    for (int i = 0; i < n_spectral; ++i) names.push_back("spectral_" + std::to_string(i));
    return names;
}

std::vector<std::uint8_t> default_fs_binary(int n_spectral) {
    std::vector<std::uint8_t> b(kPoiCategories + kRoadAttrChannels + n_spectral, 0);
    b[kPoiCategories] = 1;  // road_mask
    return b;
}

std::vector<std::string> default_ft_names() {
    return {"day_of_week", "day_of_year", "month", "is_weekend", "is_holiday"};
}

std::vector<std::uint8_t> default_ft_binary() { return {0, 0, 0, 1, 1}; }

std::vector<std::string> default_fst_names(int n_extra) {
    std::vector<std::string> names = {"precipitation",  "snowfall", "snow_depth",
                                      "temp_min",       "temp_max", "wind",
                                      "visibility",     "traffic_speed",
                                      "traffic_volume", "truck_volume"};
    for (int i = 0; i < n_extra; ++i) names.push_back("reserved_" + std::to_string(i));
    return names;
}

std::vector<EventRecord> load_events_csv(const std::string& path) {
    std::vector<EventRecord> out;
    read_csv(path, "timestamp,lat,lon",
             [&](std::size_t line, const std::vector<std::string>& f) {
                 EventRecord e;
                 e.date = parse_timestamp_date(f[0]);
                 e.lat = parse_double_field(f[1], path, line, "lat");
                 e.lon = parse_double_field(f[2], path, line, "lon");
                 out.push_back(e);
             });
    return out;
}

std::vector<RoadSegment> load_roads_csv(const std::string& path) {
    std::vector<RoadSegment> out;
    read_csv(path, "lat1,lon1,lat2,lon2,speed_limit,aadt,road_class",
             [&](std::size_t line, const std::vector<std::string>& f) {
                 RoadSegment s;
                 s.lat1 = parse_double_field(f[0], path, line, "lat1");
                 s.lon1 = parse_double_field(f[1], path, line, "lon1");
                 s.lat2 = parse_double_field(f[2], path, line, "lat2");
                 s.lon2 = parse_double_field(f[3], path, line, "lon2");
                 s.speed_limit = parse_double_field(f[4], path, line, "speed_limit");
                 s.aadt = parse_double_field(f[5], path, line, "aadt");
                 s.road_class =
                     static_cast<int>(parse_double_field(f[6], path, line, "road_class"));
                 out.push_back(s);
             });
    return out;
}

std::vector<PoiPoint> load_poi_csv(const std::string& path) {
    std::vector<PoiPoint> out;
    read_csv(path, "lat,lon,category",
             [&](std::size_t line, const std::vector<std::string>& f) {
                 PoiPoint p;
                 p.lat = parse_double_field(f[0], path, line, "lat");
                 p.lon = parse_double_field(f[1], path, line, "lon");
                 p.category =
                     static_cast<int>(parse_double_field(f[2], path, line, "category"));
                 out.push_back(p);
             });
    return out;
}

}  // namespace hintnet::grid
