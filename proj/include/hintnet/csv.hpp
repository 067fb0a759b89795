#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hintnet {

// Minimal CSV reader for the fixed, unquoted schemas this project consumes.
// The first line must repeat the expected header exactly; every data row must
// have the same field count. row_fn receives (1-based line number, fields).
void read_csv(const std::string& path, const std::string& expected_header,
              const std::function<void(std::size_t, const std::vector<std::string>&)>& row_fn);

std::vector<std::string> split_csv_line(const std::string& line);

double parse_double_field(const std::string& s, const std::string& path,
                          std::size_t line, const char* what);

}  // namespace hintnet
