#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace airq {

namespace {

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct WindowResult {
    std::vector<ErrorSummary> per_horizon;  // one summary per horizon step
    TimingRecord timing;
};

void format_double(std::ostream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    out << buf;
}

void format_seconds(std::ostream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    out << buf;
}

}  // namespace

void RollingSpec::validate() const {
    if (train_len < 1) fail(ErrorKind::InvalidArgument, "RollingSpec: train_len must be >= 1");
    if (horizon < 1 || horizon > 24)
        fail(ErrorKind::InvalidHorizon, "RollingSpec: horizon must be in 1..24");
    if (stride < 1) fail(ErrorKind::InvalidArgument, "RollingSpec: stride must be >= 1");
    if (window_count < 1)
        fail(ErrorKind::InvalidArgument, "RollingSpec: window_count must be >= 1");
    if (jobs < 1) fail(ErrorKind::InvalidArgument, "RollingSpec: jobs must be >= 1");
}

RollingReport rolling_evaluate(const TimeSeries& series, Forecaster& method,
                               const RollingSpec& spec) {
    spec.validate();
    if (!series.gap_free())
        fail(ErrorKind::InvalidArgument, "rolling_evaluate: series has gaps");

    const std::int64_t last_origin = series.end_hour() + 1 - spec.horizon;
    const std::int64_t first_origin =
        last_origin - static_cast<std::int64_t>(spec.window_count - 1) * spec.stride;
    if (first_origin - spec.train_len < series.start_hour())
        fail(ErrorKind::InsufficientData,
             "rolling_evaluate: series too short for " + std::to_string(spec.window_count) +
                 " windows of " + std::to_string(spec.train_len) + " training hours");

    RollingReport report;
    report.method = method.name();
    report.window_count = spec.window_count;

    double build_total = 0.0;
    int build_events = 0;

    const bool shared = method.shared_model();
    if (shared) {
        const std::int64_t avail = first_origin - series.start_hour();
        std::int64_t span = avail;
        if (const auto want = method.shared_history_hours())
            span = std::min<std::int64_t>(span, std::max<std::int64_t>(*want, 1));
        const TimeSeries history =
            series.slice(series.index_of(first_origin - span), static_cast<std::size_t>(span));
        TimingRecord timing;
        method.build(history, Rng::derive(spec.seed, 0x6275696C64ULL), timing);
        build_total += timing.build_seconds;
        build_events += 1;
    }

    std::vector<WindowResult> windows(static_cast<std::size_t>(spec.window_count));
    parallel_for(
        windows.size(), spec.jobs,
        [&](std::size_t k) {
            const std::int64_t origin =
                first_origin + static_cast<std::int64_t>(k) * spec.stride;
            auto [train, actuals] = window_at(series, origin, spec.train_len, spec.horizon);
            const std::uint64_t seed =
                Rng::derive(spec.seed, static_cast<std::uint64_t>(origin));

            WindowResult& wr = windows[k];
            std::vector<double> preds;
            if (shared) {
                preds = method.forecast(train, spec.horizon, wr.timing);
            } else {
                preds = method.fit_forecast(train, spec.horizon, seed, wr.timing);
            }
            if (preds.size() != static_cast<std::size_t>(spec.horizon))
                fail(ErrorKind::Shape, "rolling_evaluate: method returned " +
                                           std::to_string(preds.size()) + " values, expected " +
                                           std::to_string(spec.horizon));
            const auto act = actuals.dense_values();
            wr.per_horizon.reserve(preds.size());
            for (std::size_t h = 0; h < preds.size(); ++h)
                wr.per_horizon.push_back(
                    rmse(std::span(&preds[h], 1), std::span(&act[h], 1)));
        });

    report.per_horizon_rmse.resize(static_cast<std::size_t>(spec.horizon));
    std::vector<ErrorSummary> column(windows.size());
    for (int h = 0; h < spec.horizon; ++h) {
        for (std::size_t k = 0; k < windows.size(); ++k)
            column[k] = windows[k].per_horizon[static_cast<std::size_t>(h)];
        report.per_horizon_rmse[static_cast<std::size_t>(h)] = mean_of(column);
    }

    double predict_total = 0.0;
    for (const auto& wr : windows) {
        predict_total += wr.timing.predict_seconds;
        if (!shared) {
            build_total += wr.timing.build_seconds;
            build_events += 1;
        }
    }
    report.build_count = build_events;
    report.mean_build_seconds = build_events > 0 ? build_total / build_events : 0.0;
    report.mean_predict_seconds = predict_total / static_cast<double>(windows.size());
    return report;
}

SweepReport sweep_training_interval(const TimeSeries& series, Forecaster& method,
                                    std::span<const int> candidate_lens,
                                    const RollingSpec& spec) {
    if (candidate_lens.empty())
        fail(ErrorKind::EmptyInput, "sweep_training_interval: no candidates");
    SweepReport report;
    report.method = method.name();
    for (int candidate : candidate_lens) {
        RollingSpec cand_spec = spec;
        cand_spec.train_len = candidate;
        cand_spec.horizon = 24;
        method.on_training_interval(candidate);
        const RollingReport rolling = rolling_evaluate(series, method, cand_spec);
        double mean_rmse = 0.0;
        for (double v : rolling.per_horizon_rmse) mean_rmse += v;
        mean_rmse /= static_cast<double>(rolling.per_horizon_rmse.size());
        report.rows.push_back({candidate, mean_rmse});
    }
    const SweepRow* best = &report.rows.front();
    for (const auto& row : report.rows) {
        if (row.rmse < best->rmse || (row.rmse == best->rmse && row.train_len < best->train_len))
            best = &row;
    }
    report.best_train_len = best->train_len;
    return report;
}

CompareResult compare_methods(const TimeSeries& series, std::span<Forecaster* const> methods,
                              const RollingSpec& spec) {
    if (methods.empty()) fail(ErrorKind::EmptyInput, "compare_methods: no methods");
    CompareResult result;
    result.reports.reserve(methods.size());
    // identical spec -> identical origins and actuals for every method
    for (Forecaster* method : methods)
        result.reports.push_back(rolling_evaluate(series, *method, spec));
    return result;
}

void write_report_csv(std::span<const RollingReport> reports, std::ostream& out,
                      bool deterministic_timing) {
    out << "method,horizon,rmse,build_s,predict_s\n";
    for (const auto& r : reports) {
        for (std::size_t h = 0; h < r.per_horizon_rmse.size(); ++h) {
            out << r.method << ',' << (h + 1) << ',';
            format_double(out, r.per_horizon_rmse[h]);
            out << ',';
            format_seconds(out, deterministic_timing ? 0.0 : r.mean_build_seconds);
            out << ',';
            format_seconds(out, deterministic_timing ? 0.0 : r.mean_predict_seconds);
            out << '\n';
        }
    }
}

void write_plot_csv(std::span<const RollingReport> reports, std::ostream& out) {
    out << "method,horizon,rmse\n";
    for (const auto& r : reports) {
        for (std::size_t h = 0; h < r.per_horizon_rmse.size(); ++h) {
            out << r.method << ',' << (h + 1) << ',';
            format_double(out, r.per_horizon_rmse[h]);
            out << '\n';
        }
    }
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
    out << "method,train_len,rmse\n";
    for (const auto& row : report.rows) {
        out << report.method << ',' << row.train_len << ',';
        format_double(out, row.rmse);
        out << '\n';
    }
}

}  // namespace airq
