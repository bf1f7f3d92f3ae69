#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/series.hpp"

using namespace airq;

namespace {

TimeSeries make(std::int64_t start, std::vector<std::optional<double>> vals) {
    return TimeSeries(start, std::move(vals));
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("TimeSeries invariants") {
    CHECK_THROWS_AS(make(0, {}), Error);
    CHECK_THROWS_AS(make(0, {std::numeric_limits<double>::quiet_NaN()}), Error);
    const auto s = make(5, {1.0, std::nullopt, 3.0});
    CHECK(s.size() == 3);
    CHECK(s.start_hour() == 5);
    CHECK(s.end_hour() == 7);
    CHECK(s.missing_count() == 1);
    CHECK_FALSE(s.gap_free());

    // from_points rejects skipped rows
    CHECK_THROWS_AS(TimeSeries::from_points({{0, 1.0}, {2, 2.0}}), Error);
}

TEST_CASE("ingest: gap insertion on the hourly grid") {
    std::istringstream in("timestamp,value\n0,10\n7200,30\n");
    const auto s = ingest_csv(in);
    REQUIRE(s.size() == 3);
    CHECK(s.at(0) == 10.0);
    CHECK_FALSE(s.at(1).has_value());
    CHECK(s.at(2) == 30.0);
}

TEST_CASE("ingest: outlier becomes missing") {
    std::istringstream in("timestamp,value\n0,5000\n3600,12\n");
    const auto s = ingest_csv(in);
    REQUIRE(s.size() == 2);
    CHECK_FALSE(s.at(0).has_value());
    CHECK(s.at(1) == 12.0);
}

TEST_CASE("ingest: clean hourly input round-trips") {
    std::istringstream in("timestamp,value\n0,1\n3600,2\n7200,3\n");
    const auto s = ingest_csv(in);
    REQUIRE(s.size() == 3);
    CHECK(s.at(0) == 1.0);
    CHECK(s.at(1) == 2.0);
    CHECK(s.at(2) == 3.0);
}

TEST_CASE("ingest: ISO timestamps, duplicates, sorting") {
    std::istringstream in(
        "timestamp,value\n"
        "2018-01-07T15:00:00Z,20\n"
        "2018-01-07T14:00:00Z,10\n"
        "2018-01-07T14:00:00Z,30\n");
    const auto s = ingest_csv(in);
    REQUIRE(s.size() == 2);
    CHECK(*s.at(0) == doctest::Approx(20.0));  // duplicates collapsed by mean
    CHECK(*s.at(1) == doctest::Approx(20.0));
    CHECK(s.start_hour() == parse_timestamp_hour("2018-01-07T14:00:00Z"));
}

TEST_CASE("ingest: errors") {
    std::istringstream bad_header("time,conc\n0,1\n");
    CHECK(kind_of([&] { ingest_csv(bad_header); }) == ErrorKind::Parse);

    std::istringstream no_rows("timestamp,value\nnot-a-time,xyz\n");
    CHECK(kind_of([&] { ingest_csv(no_rows); }) == ErrorKind::EmptyInput);

    std::istringstream subhourly("timestamp,value\n2018-01-07T14:30:00Z,5\n");
    CHECK(kind_of([&] { ingest_csv(subhourly); }) == ErrorKind::Parse);

    std::istringstream subhourly_epoch("timestamp,value\n1800,5\n");
    CHECK(kind_of([&] { ingest_csv(subhourly_epoch); }) == ErrorKind::Parse);
}

TEST_CASE("timestamp parsing and formatting") {
    CHECK(parse_timestamp_hour("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_timestamp_hour("1970-01-02T01:00:00Z") == 25);
    CHECK(parse_timestamp_hour("3600") == 1);
    CHECK(parse_timestamp_hour("2018-01-07T14:00:00Z") ==
          parse_timestamp_hour("2018-01-07 14:00:00"));
    // offset timestamps normalize to UTC
    CHECK(parse_timestamp_hour("2018-01-07T16:00:00+02:00") ==
          parse_timestamp_hour("2018-01-07T14:00:00Z"));
    CHECK(format_hour_iso(0) == "1970-01-01T00:00:00Z");
    CHECK(format_hour_iso(parse_timestamp_hour("2018-01-07T14:00:00Z")) ==
          "2018-01-07T14:00:00Z");
    for (std::int64_t h : {-100000LL, -1LL, 0LL, 1LL, 123456LL, 999999LL})
        CHECK(parse_timestamp_hour(format_hour_iso(h)) == h);
}

TEST_CASE("csv writer round-trips a gap-free series bit-exactly") {
    Rng rng(3);
    std::vector<std::optional<double>> vals;
    for (int i = 0; i < 50; ++i) vals.emplace_back(rng.uniform01() * 1999.0);
    const TimeSeries s(420000, std::move(vals));
    std::ostringstream out;
    write_csv(s, out);
    std::istringstream in(out.str());
    const auto back = ingest_csv(in);
    REQUIRE(back.size() == s.size());
    CHECK(back.start_hour() == s.start_hour());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(*back.at(i) == *s.at(i));

    std::ostringstream out2;
    write_csv(back, out2);
    CHECK(out.str() == out2.str());
}

TEST_CASE("interpolate: midpoint of a linear segment") {
    const auto s = interpolate_missing(make(0, {10.0, std::nullopt, 20.0}));
    CHECK(*s.at(1) == doctest::Approx(15.0));
}

TEST_CASE("interpolate: equally spaced on the line") {
    const auto s = interpolate_missing(make(0, {1.0, std::nullopt, std::nullopt, 4.0}));
    CHECK(*s.at(1) == doctest::Approx(2.0));
    CHECK(*s.at(2) == doctest::Approx(3.0));
}

TEST_CASE("interpolate: flat leading and trailing extension") {
    const auto s = interpolate_missing(make(0, {std::nullopt, 7.0, 9.0}));
    CHECK(*s.at(0) == 7.0);
    const auto t = interpolate_missing(make(0, {7.0, 9.0, std::nullopt}));
    CHECK(*t.at(2) == 9.0);
}

TEST_CASE("interpolate: fewer than two present values") {
    CHECK(kind_of([] {
              interpolate_missing(make(0, {std::nullopt, 5.0, std::nullopt}));
          }) == ErrorKind::InsufficientData);
}

TEST_CASE("interpolate: idempotent and bounded (fuzzed)") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.next_u64() % 60;
        std::vector<std::optional<double>> vals(n);
        std::size_t present = 0;
        for (auto& v : vals) {
            if (rng.uniform01() < 0.6) {
                v = rng.uniform01() * 100.0;
                ++present;
            }
        }
        if (present < 2) {
            vals[0] = 1.0;
            vals[n - 1] = 2.0;
        }
        const TimeSeries s(static_cast<std::int64_t>(trial), std::move(vals));
        const auto once = interpolate_missing(s);
        CHECK(once.gap_free());
        const auto twice = interpolate_missing(once);
        for (std::size_t i = 0; i < once.size(); ++i) CHECK(*once.at(i) == *twice.at(i));

        // every filled interior value lies between its bounding neighbors
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.at(i)) continue;
            std::size_t l = i, r = i;
            while (l > 0 && !s.at(l)) --l;
            while (r + 1 < s.size() && !s.at(r)) ++r;
            if (!s.at(l) || !s.at(r)) continue;  // flat extension cases
            const double lo = std::min(*s.at(l), *s.at(r));
            const double hi = std::max(*s.at(l), *s.at(r));
            CHECK(*once.at(i) >= lo);
            CHECK(*once.at(i) <= hi);
        }
    }
}

TEST_CASE("ingest fuzzing always yields a strict hourly grid") {
    Rng rng(512);
    for (int trial = 0; trial < 60; ++trial) {
        std::ostringstream csv;
        csv << "timestamp,value\n";
        const int rows = 1 + static_cast<int>(rng.next_u64() % 40);
        for (int r = 0; r < rows; ++r) {
            const std::int64_t hour = static_cast<std::int64_t>(rng.next_u64() % 100);
            csv << hour * 3600 << ",";
            const double roll = rng.uniform01();
            if (roll < 0.2) {
                // empty value
            } else if (roll < 0.3) {
                csv << "garbage";
            } else {
                csv << (rng.uniform01() * 4000.0 - 500.0);
            }
            csv << "\n";
        }
        std::istringstream in(csv.str());
        try {
            const auto s = ingest_csv(in);
            CHECK(s.size() >= 1);
            for (std::size_t i = 0; i < s.size(); ++i) {
                CHECK(s.hour_at(i) == s.start_hour() + static_cast<std::int64_t>(i));
                if (s.at(i)) {
                    CHECK(*s.at(i) >= kMinValidValue);
                    CHECK(*s.at(i) <= kMaxValidValue);
                }
            }
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::EmptyInput);  // all rows may be garbage
        }
    }
}

TEST_CASE("split: explicit training interval") {
    std::vector<std::optional<double>> vals(100);
    for (std::size_t i = 0; i < 100; ++i) vals[i] = static_cast<double>(i);
    const TimeSeries s(0, std::move(vals));
    SplitSpec spec;
    spec.test_hours = 24;
    spec.train_hours = 48;
    const auto [train, test] = split(s, spec);
    CHECK(train.size() == 48);
    CHECK(train.start_hour() == 28);
    CHECK(train.end_hour() == 75);
    CHECK(test.size() == 24);
    CHECK(test.start_hour() == 76);
    CHECK(test.end_hour() == 99);
    CHECK(train.end_hour() + 1 == test.start_hour());
}

TEST_CASE("split: boundary and error cases") {
    std::vector<std::optional<double>> v25(25, 1.0);
    const auto [train, test] = split(TimeSeries(0, v25), SplitSpec{});
    CHECK(train.size() == 1);  // fraction clamped to what is available
    CHECK(test.size() == 24);

    std::vector<std::optional<double>> v24(24, 1.0);
    CHECK(kind_of([&] { split(TimeSeries(0, v24), SplitSpec{}); }) ==
          ErrorKind::InsufficientData);
}

TEST_CASE("split: fraction path keeps train and test contiguous") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 25 + rng.next_u64() % 200;
        std::vector<std::optional<double>> vals(n, 0.5);
        const TimeSeries s(static_cast<std::int64_t>(rng.next_u64() % 1000), std::move(vals));
        const auto [train, test] = split(s, SplitSpec{});
        CHECK(train.end_hour() + 1 == test.start_hour());
        CHECK(test.end_hour() == s.end_hour());
        CHECK(test.size() == 24);
    }
}

TEST_CASE("window_at: index arithmetic") {
    std::vector<std::optional<double>> vals(200, 1.0);
    const TimeSeries s(0, std::move(vals));
    const auto [train, actuals] = window_at(s, 100, 96, 24);
    CHECK(train.start_hour() == 4);
    CHECK(train.end_hour() == 99);
    CHECK(actuals.start_hour() == 100);
    CHECK(actuals.end_hour() == 123);

    const auto [t1, a1] = window_at(s, 100, 96, 1);
    CHECK(a1.size() == 1);

    CHECK(kind_of([&] { window_at(s, 0, 10, 5); }) == ErrorKind::WindowOutOfRange);
}
