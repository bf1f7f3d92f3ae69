#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/synth.hpp"

using namespace airq;

TEST_CASE("noiseless generator is the exact sinusoid sum") {
    SynthSpec spec;
    spec.hours = 400;
    spec.noise_sd = 0.0;
    spec.ar_coeff = 0.0;
    spec.missing_rate = 0.0;
    const auto s = generate(spec);
    REQUIRE(s.size() == 400);
    for (long t = 0; t < 400; ++t) {
        const double expected =
            std::max(0.0, spec.base +
                              spec.diurnal_amp * std::sin(2.0 * M_PI * (t % 24) / 24.0) +
                              spec.weekly_amp * std::sin(2.0 * M_PI * (t % 168) / 168.0));
        CHECK(*s.at(static_cast<std::size_t>(t)) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("same seed, same series") {
    SynthSpec spec;
    spec.hours = 500;
    spec.missing_rate = 0.05;
    spec.seed = 1234;
    const auto a = generate(spec);
    const auto b = generate(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.at(i).has_value() == b.at(i).has_value());
        if (a.at(i)) CHECK(*a.at(i) == *b.at(i));
    }
}

TEST_CASE("missing fraction concentrates around the rate") {
    SynthSpec spec;
    spec.hours = 10000;
    spec.missing_rate = 0.1;
    spec.seed = 7;
    const auto s = generate(spec);
    const double fraction = static_cast<double>(s.missing_count()) / 10000.0;
    CHECK(fraction > 0.09);
    CHECK(fraction < 0.11);
}

TEST_CASE("noiseless-seasonal sample mean sits on the base level") {
    SynthSpec spec;
    spec.hours = 12000;
    spec.noise_sd = 0.0;
    spec.missing_rate = 0.0;
    const auto s = generate(spec);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) sum += *s.at(i);
    CHECK(sum / static_cast<double>(s.size()) == doctest::Approx(spec.base).epsilon(0.1 / 30.0));
}

TEST_CASE("fuzzed specs keep series invariants") {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        SynthSpec spec;
        spec.hours = 1 + static_cast<long>(rng.next_u64() % 2000);
        spec.base = rng.uniform01() * 60.0;
        spec.diurnal_amp = rng.uniform01() * 20.0;
        spec.weekly_amp = rng.uniform01() * 10.0;
        spec.ar_coeff = rng.uniform01() * 1.8 - 0.9;
        spec.noise_sd = rng.uniform01() * 8.0;
        spec.missing_rate = rng.uniform01() * 0.5;
        spec.seed = rng.next_u64();
        const auto s = generate(spec);
        CHECK(s.size() == static_cast<std::size_t>(spec.hours));
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(s.hour_at(i) == s.start_hour() + static_cast<std::int64_t>(i));
            if (s.at(i)) CHECK(*s.at(i) >= 0.0);
        }
    }
}

TEST_CASE("invalid specs are rejected") {
    SynthSpec spec;
    spec.hours = 0;
    CHECK_THROWS_AS(generate(spec), Error);
    spec.hours = 10;
    spec.missing_rate = 1.0;
    CHECK_THROWS_AS(generate(spec), Error);
    spec.missing_rate = 0.0;
    spec.ar_coeff = 1.0;
    CHECK_THROWS_AS(generate(spec), Error);
}
