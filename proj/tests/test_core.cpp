#include <doctest.h>

#include "hintnet/date.hpp"
#include "hintnet/hash.hpp"
#include "hintnet/matrix.hpp"

using namespace hintnet;

TEST_SUITE("core") {

TEST_CASE("date arithmetic on known anchors") {
    CHECK(weekday(Date{1970, 1, 1}) == 3);   // Thursday
    CHECK(weekday(Date{2016, 1, 1}) == 4);   // Friday
    CHECK(weekday(Date{2016, 1, 2}) == 5);   // Saturday
    CHECK(weekday(Date{2024, 12, 25}) == 2); // Wednesday
    CHECK(day_of_year(Date{2016, 1, 1}) == 1);
    CHECK(day_of_year(Date{2016, 2, 29}) == 60);  // leap year
    CHECK(day_of_year(Date{2016, 12, 31}) == 366);
    CHECK(day_of_year(Date{2017, 12, 31}) == 365);
    CHECK(is_leap_year(2016));
    CHECK(!is_leap_year(1900));
    CHECK(is_leap_year(2000));
}

TEST_CASE("serial round trip across year boundaries") {
    for (std::int64_t s : {-1000LL, 0LL, 16801LL, 17897LL, 20000LL}) {
        const Date d = from_serial(s);
        CHECK(to_serial(d) == s);
        CHECK(is_valid(d));
    }
    CHECK(to_serial(Date{2016, 1, 2}) - to_serial(Date{2016, 1, 1}) == 1);
    CHECK(to_serial(Date{2017, 1, 1}) - to_serial(Date{2016, 1, 1}) == 366);
}

TEST_CASE("date parsing accepts timestamps and rejects junk") {
    CHECK(parse_date("2016-02-29") == Date{2016, 2, 29});
    CHECK(parse_timestamp_date("2016-07-04T13:45:00") == Date{2016, 7, 4});
    CHECK(parse_timestamp_date("2016-07-04 13:45:00") == Date{2016, 7, 4});
    CHECK_THROWS(parse_date("2017-02-29"));
    CHECK_THROWS(parse_date("2017-13-01"));
    CHECK_THROWS(parse_date("not-a-date"));
    CHECK_THROWS(parse_date("2016-02-29x"));
    CHECK(format_date(Date{2016, 1, 2}) == "2016-01-02");
}

TEST_CASE("fnv fingerprints differ across inputs and chain") {
    CHECK(fnv1a64("abc") != fnv1a64("abd"));
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    const auto h1 = fnv1a64("hello");
    CHECK(fnv1a64(" world", 6, h1) == fnv1a64("hello world"));
    CHECK(mix_seed(1, 0) != mix_seed(1, 1));
    CHECK(mix_seed(1, 0) != mix_seed(2, 0));
}

TEST_CASE("matrix storage is row-major and identity works") {
    Matrix m(2, 3);
    m(1, 2) = 5.0;
    CHECK(m.data()[5] == 5.0);
    const Matrix i = Matrix::identity(3);
    CHECK(i(0, 0) == 1.0);
    CHECK(i(0, 1) == 0.0);
}

}  // TEST_SUITE
