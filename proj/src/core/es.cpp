#include "core/es.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/nelder_mead.hpp"

namespace airq {

namespace {

int mod24(std::int64_t hour) {
    int m = static_cast<int>(hour % 24);
    return m < 0 ? m + 24 : m;
}

double clamp01(double w) { return std::clamp(w, 0.0, 1.0); }

}  // namespace

void EsVariant::validate() const {
    if (season_length < 1) fail(ErrorKind::InvalidArgument, "EsVariant: season_length must be >= 1");
    if (kind == EsKind::HoltWintersAdditive && season_length != 24)
        fail(ErrorKind::InvalidArgument, "EsVariant: Holt-Winters season is fixed at 24 h");
}

EsFilterResult run_es_filter(const TimeSeries& train, const EsVariant& variant,
                             const EsParams& params) {
    const auto x = train.dense_values();
    const std::int64_t start = train.start_hour();

    double level = params.initial_level;
    double trend = variant.kind == EsKind::Simple ? 0.0 : params.initial_trend;
    std::array<double, 24> season = params.initial_season;

    const double a = params.alpha, b = params.beta, g = params.gamma;
    double sse = 0.0;

    for (std::size_t j = 0; j < x.size(); ++j) {
        const double v = x[j];
        switch (variant.kind) {
            case EsKind::Simple: {
                const double pred = level;
                const double err = v - pred;
                sse += err * err;
                level = a * v + (1.0 - a) * level;
                break;
            }
            case EsKind::Holt: {
                const double pred = level + trend;
                const double err = v - pred;
                sse += err * err;
                const double new_level = a * v + (1.0 - a) * (level + trend);
                trend = b * (new_level - level) + (1.0 - b) * trend;
                level = new_level;
                break;
            }
            case EsKind::HoltWintersAdditive: {
                const int slot = mod24(start + static_cast<std::int64_t>(j));
                const double s = season[slot];
                const double pred = level + trend + s;
                const double err = v - pred;
                sse += err * err;
                const double new_level = a * (v - s) + (1.0 - a) * (level + trend);
                const double new_trend = b * (new_level - level) + (1.0 - b) * trend;
                season[slot] = g * (v - level - trend) + (1.0 - g) * s;
                level = new_level;
                trend = new_trend;
                break;
            }
        }
    }
    return {{level, trend, season}, sse};
}

EsParams es_initial_params(const TimeSeries& train, const EsVariant& variant) {
    const auto x = train.dense_values();
    const std::size_t n = x.size();
    const auto first_season_len =
        std::min<std::size_t>(static_cast<std::size_t>(variant.season_length), n);

    EsParams p;
    double sum = 0.0;
    for (std::size_t i = 0; i < first_season_len; ++i) sum += x[i];
    p.initial_level = sum / static_cast<double>(first_season_len);

    if (n >= 2) p.initial_trend = (x[n - 1] - x[0]) / static_cast<double>(n - 1);

    if (variant.kind == EsKind::HoltWintersAdditive) {
        const std::int64_t start = train.start_hour();
        for (std::size_t i = 0; i < 24 && i < n; ++i)
            p.initial_season[mod24(start + static_cast<std::int64_t>(i))] =
                x[i] - p.initial_level;
        // re-center so the invariant holds exactly
        double mean = 0.0;
        for (double s : p.initial_season) mean += s;
        mean /= 24.0;
        for (double& s : p.initial_season) s -= mean;
    }
    return p;
}

EsModel fit_es(const TimeSeries& train, const EsVariant& variant, const EsFitOptions& options) {
    variant.validate();
    if (!train.gap_free()) fail(ErrorKind::InvalidArgument, "fit_es: series has gaps");
    const std::size_t min_len = variant.kind == EsKind::HoltWintersAdditive
                                    ? 2 * static_cast<std::size_t>(variant.season_length)
                                    : 3;
    if (train.size() < min_len)
        fail(ErrorKind::InsufficientData,
             "fit_es: need at least " + std::to_string(min_len) + " observations");

    const EsParams init = es_initial_params(train, variant);

    // which weights are free, in (alpha, beta, gamma) order
    std::vector<int> free_idx;
    std::array<std::optional<double>, 3> pinned = {options.alpha, options.beta, options.gamma};
    const int n_weights = variant.kind == EsKind::Simple ? 1
                          : variant.kind == EsKind::Holt ? 2
                                                         : 3;
    for (int i = 0; i < n_weights; ++i)
        if (!pinned[i]) free_idx.push_back(i);

    auto assemble = [&](std::span<const double> free) {
        EsParams p = init;
        std::array<double, 3> w = {pinned[0].value_or(0.0), pinned[1].value_or(0.0),
                                   pinned[2].value_or(0.0)};
        for (std::size_t k = 0; k < free_idx.size(); ++k)
            w[static_cast<std::size_t>(free_idx[k])] = clamp01(free[k]);
        p.alpha = w[0];
        p.beta = w[1];
        p.gamma = w[2];
        return p;
    };
    auto objective = [&](std::span<const double> free) {
        return run_es_filter(train, variant, assemble(free)).sse;
    };

    std::vector<double> best_free(free_idx.size(), 0.0);
    double best_sse = std::numeric_limits<double>::infinity();

    // coarse grid, step 0.1 per free weight
    std::vector<int> idx(free_idx.size(), 0);
    const bool any_free = !free_idx.empty();
    while (any_free) {
        std::vector<double> probe(free_idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) probe[k] = idx[k] / 10.0;
        const double sse = objective(probe);
        if (sse < best_sse) {
            best_sse = sse;
            best_free = probe;
        }
        std::size_t k = 0;
        for (; k < idx.size(); ++k) {
            if (++idx[k] <= 10) break;
            idx[k] = 0;
        }
        if (k == idx.size()) break;
    }
    if (!any_free) best_sse = objective({});

    if (any_free) {
        NelderMeadOptions nm;
        nm.max_iters = 500;
        nm.f_tolerance = 1e-6;
        nm.initial_step = 0.1;
        auto refined = nelder_mead(objective, best_free, nm);
        if (refined.fx <= best_sse) {
            best_sse = refined.fx;
            best_free = std::move(refined.x);
        }
    }

    EsModel model;
    model.variant = variant;
    model.params = assemble(best_free);
    const auto run = run_es_filter(train, variant, model.params);
    model.final_state = run.state;
    model.train_sse = run.sse;
    model.next_hour = train.end_hour() + 1;
    return model;
}

std::vector<double> forecast_es(const EsModel& model, int horizon) {
    if (horizon < 1) fail(ErrorKind::InvalidHorizon, "forecast_es: horizon must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    const EsState& st = model.final_state;
    for (int h = 1; h <= horizon; ++h) {
        double v = st.level;
        if (model.variant.kind != EsKind::Simple) v += static_cast<double>(h) * st.trend;
        if (model.variant.kind == EsKind::HoltWintersAdditive)
            v += st.season[mod24(model.next_hour + h - 1)];
        out.push_back(std::max(0.0, v));
    }
    return out;
}

}  // namespace airq
