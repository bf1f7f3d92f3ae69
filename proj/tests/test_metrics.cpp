#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"

using namespace airq;

TEST_CASE("rmse of identical sequences is zero") {
    const std::vector<double> x{1.0, 2.0, 3.0};
    const auto r = rmse(x, x);
    CHECK(r.rmse == 0.0);
    CHECK(r.n == 3);
}

TEST_CASE("rmse hand evaluations") {
    // sqrt((9 + 16) / 2) and sqrt(4 / 3), worked by hand
    const std::vector<double> p1{0.0, 0.0}, a1{3.0, 4.0};
    CHECK(rmse(p1, a1).rmse == doctest::Approx(3.5355339059327378).epsilon(1e-12));

    const std::vector<double> p2{1.0, 2.0, 3.0}, a2{1.0, 2.0, 5.0};
    CHECK(rmse(p2, a2).rmse == doctest::Approx(1.1547005383792515).epsilon(1e-12));
}

TEST_CASE("rmse error paths") {
    const std::vector<double> a{1.0}, b{1.0, 2.0}, empty;
    CHECK_THROWS_WITH_AS(rmse(a, b), doctest::Contains("length mismatch"), Error);
    CHECK_THROWS_AS(rmse(empty, empty), Error);
    try {
        rmse(a, b);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Shape);
    }
    try {
        rmse(empty, empty);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyInput);
    }
}

TEST_CASE("mean_of averages rmse fields") {
    std::vector<ErrorSummary> es{{2.0, 5}, {4.0, 5}};
    CHECK(mean_of(es) == doctest::Approx(3.0));
    std::vector<ErrorSummary> single{{5.0, 1}};
    CHECK(mean_of(single) == 5.0);
    std::vector<ErrorSummary> hundred(100, ErrorSummary{1.0, 7});
    CHECK(mean_of(hundred) == doctest::Approx(1.0));
    std::vector<ErrorSummary> empty;
    CHECK_THROWS_AS(mean_of(empty), Error);
}

TEST_CASE("rmse scale equivariance and permutation invariance") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + (rng.next_u64() % 40);
        std::vector<double> p(n), a(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = rng.normal(0.0, 10.0);
            a[i] = rng.normal(0.0, 10.0);
        }
        const double base = rmse(p, a).rmse;
        CHECK(base >= 0.0);

        const double c = rng.normal(0.0, 3.0);
        std::vector<double> pc(n), ac(n);
        for (std::size_t i = 0; i < n; ++i) {
            pc[i] = c * p[i];
            ac[i] = c * a[i];
        }
        CHECK(rmse(pc, ac).rmse == doctest::Approx(std::abs(c) * base).epsilon(1e-9));

        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (std::size_t i = n; i > 1; --i)
            std::swap(idx[i - 1], idx[rng.next_u64() % i]);
        std::vector<double> ps(n), as(n);
        for (std::size_t i = 0; i < n; ++i) {
            ps[i] = p[idx[i]];
            as[i] = a[idx[i]];
        }
        CHECK(rmse(ps, as).rmse == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("stopwatch is monotone") {
    Stopwatch w;
    double sink = 0.0;
    for (int i = 0; i < 1000; ++i) sink += i;
    CHECK(w.seconds() >= 0.0);
    CHECK(sink > 0.0);
}
