#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/metrics.hpp"
#include "core/series.hpp"

namespace airq {

struct RollingSpec {
    int train_len = 120;
    int horizon = 24;  // 1..24
    int stride = 1;
    int window_count = 48;
    std::uint64_t seed = 0;
    int jobs = 1;

    void validate() const;
};

struct RollingReport {
    std::string method;
    std::vector<double> per_horizon_rmse;  // index h-1, mean of per-window errors
    double mean_build_seconds = 0.0;       // mean per build event
    double mean_predict_seconds = 0.0;     // mean per forecast call
    int window_count = 0;
    int build_count = 0;
};

struct SweepRow {
    int train_len = 0;
    double rmse = 0.0;
};

struct SweepReport {
    std::string method;
    std::vector<SweepRow> rows;
    int best_train_len = 0;  // argmin rmse, ties toward smaller train_len
};

struct CompareResult {
    std::vector<RollingReport> reports;
};

/// A forecasting method as the rolling harness sees it. The default contract
/// is a fresh fit per window; methods whose model is expensive to build (the
/// LSTM) opt into the shared-model path: one build before the first origin,
/// then per-window forecasts from the most recent observations.
class Forecaster {
public:
    virtual ~Forecaster() = default;

    virtual std::string name() const = 0;

    virtual std::vector<double> fit_forecast(const TimeSeries& train, int horizon,
                                             std::uint64_t seed, TimingRecord& timing) = 0;

    virtual bool shared_model() const { return false; }

    /// Hours of history the shared build wants (clipped to availability).
    virtual std::optional<long> shared_history_hours() const { return std::nullopt; }

    virtual void build(const TimeSeries& /*history*/, std::uint64_t /*seed*/,
                       TimingRecord& /*timing*/) {}

    virtual std::vector<double> forecast(const TimeSeries& /*recent*/, int /*horizon*/,
                                         TimingRecord& /*timing*/) {
        return {};
    }

    /// Training-interval sweeps notify the method of each candidate length so
    /// shared-model methods can retrain on that much history.
    virtual void on_training_interval(int /*hours*/) {}
};

/// Windows are anchored at the end of the series: the last window's actuals
/// finish on the final observation, origins advance by stride. Per-horizon
/// error is one ErrorSummary per (window, horizon) pair, averaged across
/// windows.
RollingReport rolling_evaluate(const TimeSeries& series, Forecaster& method,
                               const RollingSpec& spec);

/// rolling_evaluate per candidate training interval at horizon 24; the row
/// value is the mean of the 24 per-horizon errors.
SweepReport sweep_training_interval(const TimeSeries& series, Forecaster& method,
                                    std::span<const int> candidate_lens,
                                    const RollingSpec& spec);

/// Runs every method on identical windows (same origins, same actuals).
CompareResult compare_methods(const TimeSeries& series, std::span<Forecaster* const> methods,
                              const RollingSpec& spec);

/// CSV: method,horizon,rmse,build_s,predict_s. Timing columns carry wall
/// clock at millisecond resolution, or 0.000 in deterministic mode (for
/// byte-comparable outputs).
void write_report_csv(std::span<const RollingReport> reports, std::ostream& out,
                      bool deterministic_timing = false);

/// CSV: method,horizon,rmse.
void write_plot_csv(std::span<const RollingReport> reports, std::ostream& out);

/// CSV: method,train_len,rmse.
void write_sweep_csv(const SweepReport& report, std::ostream& out);

}  // namespace airq
