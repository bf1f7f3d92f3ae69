#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <sstream>

#include "core/errors.hpp"
#include "core/harness.hpp"
#include "core/methods.hpp"
#include "core/rng.hpp"
#include "core/synth.hpp"

using namespace airq;

namespace {

/// Perfect forecaster: reads the actuals straight from the full series.
class OracleStub : public Forecaster {
public:
    explicit OracleStub(const TimeSeries& full) : full_(full) {}

    std::string name() const override { return "ORACLE"; }

    std::vector<double> fit_forecast(const TimeSeries& train, int horizon, std::uint64_t,
                                     TimingRecord&) override {
        ++fits;
        std::vector<double> out;
        const std::int64_t origin = train.end_hour() + 1;
        for (int h = 0; h < horizon; ++h) {
            out.push_back(*full_.at(full_.index_of(origin + h)));
            ++points;
        }
        return out;
    }

    std::atomic<int> fits{0};
    std::atomic<int> points{0};

private:
    const TimeSeries& full_;
};

/// Forecasts the last training value plus a per-seed offset; lets tests see
/// the derived seed and the window data.
class LastValueStub : public Forecaster {
public:
    std::string name() const override { return "LAST"; }

    std::vector<double> fit_forecast(const TimeSeries& train, int horizon, std::uint64_t,
                                     TimingRecord&) override {
        return std::vector<double>(static_cast<std::size_t>(horizon),
                                   *train.at(train.size() - 1));
    }
};

TimeSeries synth_series(long hours, std::uint64_t seed) {
    SynthSpec spec;
    spec.hours = hours;
    spec.seed = seed;
    return interpolate_missing(generate(spec));
}

}  // namespace

TEST_CASE("oracle stub scores zero at every horizon") {
    const auto series = synth_series(600, 1);
    OracleStub oracle(series);
    RollingSpec spec;
    spec.train_len = 48;
    spec.window_count = 10;
    const auto report = rolling_evaluate(series, oracle, spec);
    REQUIRE(report.per_horizon_rmse.size() == 24);
    for (double v : report.per_horizon_rmse) CHECK(v == 0.0);
}

TEST_CASE("constant series with Simple ES scores zero") {
    std::vector<std::optional<double>> vals(300, 5.0);
    const TimeSeries series(0, std::move(vals));
    EsMethod es(EsVariant{EsKind::Simple, 24});
    RollingSpec spec;
    spec.train_len = 48;
    spec.window_count = 5;
    const auto report = rolling_evaluate(series, es, spec);
    for (double v : report.per_horizon_rmse) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("counting contract: 3 builds, 6 point comparisons") {
    const auto series = synth_series(200, 2);
    OracleStub oracle(series);
    RollingSpec spec;
    spec.train_len = 24;
    spec.horizon = 2;
    spec.stride = 1;
    spec.window_count = 3;
    const auto report = rolling_evaluate(series, oracle, spec);
    CHECK(oracle.fits.load() == 3);
    CHECK(oracle.points.load() == 6);
    CHECK(report.window_count == 3);
    CHECK(report.build_count == 3);
}

TEST_CASE("window_count = 1 equals manual split + fit + forecast + rmse") {
    const auto series = synth_series(400, 3);
    RollingSpec spec;
    spec.train_len = 96;
    spec.horizon = 24;
    spec.window_count = 1;

    EsMethod es(EsVariant{});
    const auto report = rolling_evaluate(series, es, spec);

    SplitSpec split_spec;
    split_spec.test_hours = spec.horizon;
    split_spec.train_hours = spec.train_len;
    const auto [train, test] = split(series, split_spec);
    const auto model = fit_es(train, EsVariant{});
    const auto preds = forecast_es(model, spec.horizon);
    const auto actual = test.dense_values();
    for (int h = 0; h < spec.horizon; ++h) {
        const auto manual =
            rmse(std::span(&preds[static_cast<std::size_t>(h)], 1),
                 std::span(&actual[static_cast<std::size_t>(h)], 1));
        CHECK(report.per_horizon_rmse[static_cast<std::size_t>(h)] == manual.rmse);
    }
}

TEST_CASE("parallel execution does not change the numbers") {
    const auto series = synth_series(800, 4);
    EsMethod a(EsVariant{});
    EsMethod b(EsVariant{});
    RollingSpec seq;
    seq.train_len = 72;
    seq.window_count = 12;
    seq.jobs = 1;
    RollingSpec par = seq;
    par.jobs = 8;
    const auto ra = rolling_evaluate(series, a, seq);
    const auto rb = rolling_evaluate(series, b, par);
    REQUIRE(ra.per_horizon_rmse.size() == rb.per_horizon_rmse.size());
    for (std::size_t h = 0; h < ra.per_horizon_rmse.size(); ++h)
        CHECK(ra.per_horizon_rmse[h] == rb.per_horizon_rmse[h]);
}

TEST_CASE("insufficient data for the requested windows") {
    const auto series = synth_series(100, 5);
    LastValueStub stub;
    RollingSpec spec;
    spec.train_len = 96;
    spec.window_count = 10;
    try {
        rolling_evaluate(series, stub, spec);
        FAIL("expected insufficient data");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientData);
    }
}

TEST_CASE("sweep: argmin is re-derivable from the rows") {
    const auto series = synth_series(1200, 6);
    EsMethod es(EsVariant{});
    RollingSpec spec;
    spec.window_count = 6;
    const std::vector<int> candidates{48, 72, 96, 120};
    const auto report = sweep_training_interval(series, es, candidates, spec);
    REQUIRE(report.rows.size() == candidates.size());
    int arg = report.rows.front().train_len;
    double best = report.rows.front().rmse;
    for (const auto& row : report.rows) {
        if (row.rmse < best) {
            best = row.rmse;
            arg = row.train_len;
        }
    }
    CHECK(report.best_train_len == arg);
}

TEST_CASE("sweep: single candidate and empty candidate list") {
    const auto series = synth_series(600, 7);
    EsMethod es(EsVariant{});
    RollingSpec spec;
    spec.window_count = 4;
    const std::vector<int> one{96};
    CHECK(sweep_training_interval(series, es, one, spec).best_train_len == 96);
    const std::vector<int> none;
    try {
        sweep_training_interval(series, es, none, spec);
        FAIL("expected empty input");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyInput);
    }
}

TEST_CASE("compare: one stub registered three times gives identical reports") {
    const auto series = synth_series(500, 8);
    LastValueStub s1, s2, s3;
    std::vector<Forecaster*> methods{&s1, &s2, &s3};
    RollingSpec spec;
    spec.train_len = 48;
    spec.window_count = 6;
    const auto result = compare_methods(series, methods, spec);
    REQUIRE(result.reports.size() == 3);
    for (std::size_t h = 0; h < result.reports[0].per_horizon_rmse.size(); ++h) {
        CHECK(result.reports[0].per_horizon_rmse[h] == result.reports[1].per_horizon_rmse[h]);
        CHECK(result.reports[1].per_horizon_rmse[h] == result.reports[2].per_horizon_rmse[h]);
    }
}

TEST_CASE("report CSV shapes") {
    const auto series = synth_series(500, 9);
    LastValueStub a, b, c;
    std::vector<Forecaster*> methods{&a, &b, &c};
    RollingSpec spec;
    spec.train_len = 48;
    spec.window_count = 4;
    const auto result = compare_methods(series, methods, spec);

    std::ostringstream plot;
    write_plot_csv(result.reports, plot);
    std::size_t lines = 0;
    for (char ch : plot.str())
        if (ch == '\n') ++lines;
    CHECK(lines == 1 + 3 * 24);  // header + one row per (method, horizon)

    std::ostringstream report_a, report_b;
    write_report_csv(result.reports, report_a, true);
    write_report_csv(result.reports, report_b, true);
    CHECK(report_a.str() == report_b.str());
    CHECK(report_a.str().rfind("method,horizon,rmse,build_s,predict_s", 0) == 0);

    std::ostringstream sweep_out;
    SweepReport sweep;
    sweep.method = "ES";
    sweep.rows = {{48, 1.5}, {96, 1.25}};
    sweep.best_train_len = 96;
    write_sweep_csv(sweep, sweep_out);
    CHECK(sweep_out.str() == "method,train_len,rmse\nES,48,1.5\nES,96,1.25\n");
}

TEST_CASE("spec validation") {
    RollingSpec spec;
    spec.horizon = 25;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec.horizon = 0;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec.horizon = 24;
    spec.stride = 0;
    CHECK_THROWS_AS(spec.validate(), Error);
}
