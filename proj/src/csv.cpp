#include "hintnet/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace hintnet {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

void read_csv(const std::string& path, const std::string& expected_header,
              const std::function<void(std::size_t, const std::vector<std::string>&)>& row_fn) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    const std::size_t n_fields = split_csv_line(expected_header).size();
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line != expected_header)
                throw std::runtime_error(path + ": expected header '" + expected_header +
                                         "', got '" + line + "'");
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != n_fields)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(n_fields) + " fields, got " +
                                     std::to_string(fields.size()));
        row_fn(lineno, fields);
    }
}

double parse_double_field(const std::string& s, const std::string& path,
                          std::size_t line, const char* what) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw std::runtime_error(path + ":" + std::to_string(line) + ": bad " + what +
                                 " '" + s + "'");
    return v;
}

}  // namespace hintnet
