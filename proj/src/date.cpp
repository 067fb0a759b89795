#include "hintnet/date.hpp"

#include <cstdio>

namespace hintnet {

Date parse_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3)
        throw std::runtime_error("malformed date: '" + s + "' (expected YYYY-MM-DD)");
    Date date{y, m, d};
    if (!is_valid(date)) throw std::runtime_error("invalid calendar date: '" + s + "'");
    return date;
}

Date parse_timestamp_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
        throw std::runtime_error("malformed timestamp: '" + s + "'");
    if (s.size() > 10 && s[10] != 'T' && s[10] != ' ')
        throw std::runtime_error("malformed timestamp: '" + s + "'");
    Date date{y, m, d};
    if (!is_valid(date))
        throw std::runtime_error("invalid calendar date in timestamp: '" + s + "'");
    return date;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

}  // namespace hintnet
