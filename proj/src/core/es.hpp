#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "core/series.hpp"

namespace airq {

enum class EsKind { Simple, Holt, HoltWintersAdditive };

struct EsVariant {
    EsKind kind = EsKind::HoltWintersAdditive;
    int season_length = 24;

    void validate() const;
};

struct EsParams {
    double alpha = 0.5;
    double beta = 0.0;   // Holt / Holt-Winters only
    double gamma = 0.0;  // Holt-Winters only
    double initial_level = 0.0;
    double initial_trend = 0.0;
    /// Seasonal deviations indexed by hour-of-day slot (hour mod 24), mean-centered.
    std::array<double, 24> initial_season{};
};

struct EsState {
    double level = 0.0;
    double trend = 0.0;
    std::array<double, 24> season{};
};

struct EsModel {
    EsVariant variant;
    EsParams params;
    EsState final_state;
    double train_sse = 0.0;
    std::int64_t next_hour = 0;  // first hour after the training span
};

/// Pinned smoothing weights; anything unset is optimized.
struct EsFitOptions {
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> gamma;
};

/// One pass of the smoothing recurrences over the training data with the
/// given parameters; returns final state and one-step-ahead SSE. Exposed so
/// tests and the fitter share the exact same filter.
struct EsFilterResult {
    EsState state;
    double sse = 0.0;
};
EsFilterResult run_es_filter(const TimeSeries& train, const EsVariant& variant,
                             const EsParams& params);

/// Initialization rules: level = first season's mean, trend = mean first
/// difference, season = per-slot deviations from the first season's mean.
EsParams es_initial_params(const TimeSeries& train, const EsVariant& variant);

/// Coarse 0.1-step grid over the free smoothing weights followed by
/// Nelder-Mead refinement from the best grid point; minimizes one-step SSE.
EsModel fit_es(const TimeSeries& train, const EsVariant& variant,
               const EsFitOptions& options = {});

/// Flat / linear / linear-plus-season extrapolation, clamped at zero.
std::vector<double> forecast_es(const EsModel& model, int horizon);

}  // namespace airq
