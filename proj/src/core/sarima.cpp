#include "core/sarima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/nelder_mead.hpp"

namespace airq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mean(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / static_cast<double>(x.size());
}

struct LagCoef {
    int lag;
    double coef;
};

// Expanded multiplicative polynomial phi(B)*Phi(B^s): w_t = sum coef*w_{t-lag} + ...
void expand_ar(std::span<const double> ar, std::span<const double> sar, int s,
               std::vector<LagCoef>& out) {
    out.clear();
    for (std::size_t i = 0; i < ar.size(); ++i) out.push_back({static_cast<int>(i) + 1, ar[i]});
    for (std::size_t j = 0; j < sar.size(); ++j) {
        const int js = (static_cast<int>(j) + 1) * s;
        out.push_back({js, sar[j]});
        for (std::size_t i = 0; i < ar.size(); ++i)
            out.push_back({static_cast<int>(i) + 1 + js, -ar[i] * sar[j]});
    }
}

// theta(B)*Theta(B^s): eps side carries + signs on the cross terms.
void expand_ma(std::span<const double> ma, std::span<const double> sma, int s,
               std::vector<LagCoef>& out) {
    out.clear();
    for (std::size_t i = 0; i < ma.size(); ++i) out.push_back({static_cast<int>(i) + 1, ma[i]});
    for (std::size_t j = 0; j < sma.size(); ++j) {
        const int js = (static_cast<int>(j) + 1) * s;
        out.push_back({js, sma[j]});
        for (std::size_t i = 0; i < ma.size(); ++i)
            out.push_back({static_cast<int>(i) + 1 + js, ma[i] * sma[j]});
    }
}

// All roots of 1 - c1 z - ... - ck z^k outside the unit circle iff every
// reflection coefficient of the inverse Levinson-Durbin recursion has
// magnitude < 1.
bool ar_stationary(std::span<const double> coeffs) {
    std::vector<double> a(coeffs.begin(), coeffs.end());
    for (std::size_t m = a.size(); m > 0; --m) {
        const double k = a[m - 1];
        if (!(std::abs(k) < 1.0)) return false;
        if (m == 1) break;
        std::vector<double> prev(m - 1);
        const double denom = 1.0 - k * k;
        for (std::size_t i = 0; i < m - 1; ++i)
            prev[i] = (a[i] + k * a[m - 2 - i]) / denom;
        a = std::move(prev);
    }
    return true;
}

// KPSS statistic for level stationarity (Bartlett long-run variance).
double kpss_level(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 10) return 0.0;
    const double m = mean(x);
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = x[i] - m;

    double partial = 0.0, num = 0.0, s0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        partial += e[i];
        num += partial * partial;
        s0 += e[i] * e[i];
    }
    const auto nl = static_cast<double>(n);
    const int max_lag = static_cast<int>(std::floor(4.0 * std::pow(nl / 100.0, 0.25)));
    double lrv = s0 / nl;
    for (int j = 1; j <= max_lag; ++j) {
        double gamma = 0.0;
        for (std::size_t t = static_cast<std::size_t>(j); t < n; ++t)
            gamma += e[t] * e[t - static_cast<std::size_t>(j)];
        const double w = 1.0 - static_cast<double>(j) / (max_lag + 1.0);
        lrv += 2.0 * w * gamma / nl;
    }
    if (lrv <= 0.0) return 0.0;
    return num / (nl * nl * lrv);
}

constexpr double kKpssCritical5pct = 0.463;

struct CssRun {
    std::vector<double> resid;  // residuals for t in [t0, m)
    double css = 0.0;
    int t0 = 0;
};

std::optional<CssRun> run_css(std::span<const double> params, std::span<const double> z,
                              const SarimaOrder& o) {
    const auto p = static_cast<std::size_t>(o.p);
    const auto q = static_cast<std::size_t>(o.q);
    const auto P = static_cast<std::size_t>(o.P);
    const auto Q = static_cast<std::size_t>(o.Q);
    const double mu = params[p + q + P + Q];

    std::vector<LagCoef> ar_lags, ma_lags;
    expand_ar(params.subspan(0, p), params.subspan(p + q, P), o.s, ar_lags);
    expand_ma(params.subspan(p, q), params.subspan(p + q + P, Q), o.s, ma_lags);

    const std::size_t m = z.size();
    const std::size_t t0 = p + P * static_cast<std::size_t>(o.s);
    if (t0 >= m) return std::nullopt;

    std::vector<double> w(m);
    for (std::size_t t = 0; t < m; ++t) w[t] = z[t] - mu;

    CssRun run;
    run.t0 = static_cast<int>(t0);
    run.resid.assign(m - t0, 0.0);
    for (std::size_t t = t0; t < m; ++t) {
        double acc = w[t];
        for (const auto& [lag, c] : ar_lags) acc -= c * w[t - static_cast<std::size_t>(lag)];
        for (const auto& [lag, c] : ma_lags) {
            const std::ptrdiff_t idx =
                static_cast<std::ptrdiff_t>(t) - lag - static_cast<std::ptrdiff_t>(t0);
            if (idx >= 0) acc -= c * run.resid[static_cast<std::size_t>(idx)];
        }
        if (!std::isfinite(acc)) return std::nullopt;
        run.resid[t - t0] = acc;
        run.css += acc * acc;
    }
    if (!std::isfinite(run.css)) return std::nullopt;
    return run;
}

bool order_in_bounds(const SarimaOrder& o, const SarimaBounds& b) {
    return o.p >= b.p_min && o.p <= b.p_max && o.d >= b.d_min && o.d <= b.d_max &&
           o.q >= b.q_min && o.q <= b.q_max && o.P >= b.P_min && o.P <= b.P_max &&
           o.D >= b.D_min && o.D <= b.D_max && o.Q >= b.Q_min && o.Q <= b.Q_max;
}

int free_param_count(const SarimaOrder& o) {
    return o.p + o.q + o.P + o.Q + (o.d + o.D == 0 ? 1 : 0);
}

// AIC comparison with the documented tie-break: fewer parameters, then
// lexicographically smaller (p,q,P,Q).
bool order_better(double aic_a, const SarimaOrder& a, double aic_b, const SarimaOrder& b) {
    if (aic_a != aic_b) return aic_a < aic_b;
    const int ka = free_param_count(a), kb = free_param_count(b);
    if (ka != kb) return ka < kb;
    return std::tuple(a.p, a.q, a.P, a.Q) < std::tuple(b.p, b.q, b.P, b.Q);
}

}  // namespace

void SarimaOrder::validate() const {
    const bool ok = p >= 0 && p <= 6 && d >= 0 && d <= 2 && q >= 0 && q <= 5 && P >= 0 &&
                    P <= 3 && D >= 0 && D <= 1 && Q >= 0 && Q <= 2 && s == 24;
    if (!ok) fail(ErrorKind::InvalidArgument, "SarimaOrder outside admissible ranges: " +
                                                  to_string(*this));
}

void SarimaBounds::validate() const {
    SarimaOrder lo{p_min, d_min, q_min, P_min, D_min, Q_min, 24};
    SarimaOrder hi{p_max, d_max, q_max, P_max, D_max, Q_max, 24};
    lo.validate();
    hi.validate();
    if (p_min > p_max || d_min > d_max || q_min > q_max || P_min > P_max || D_min > D_max ||
        Q_min > Q_max)
        fail(ErrorKind::InvalidArgument, "SarimaBounds: min exceeds max");
}

std::string to_string(const SarimaOrder& o) {
    return "(" + std::to_string(o.p) + "," + std::to_string(o.d) + "," + std::to_string(o.q) +
           ")(" + std::to_string(o.P) + "," + std::to_string(o.D) + "," + std::to_string(o.Q) +
           ")[" + std::to_string(o.s) + "]";
}

std::vector<double> difference(std::span<const double> x, int d, int D, int s) {
    if (d < 0 || D < 0 || s < 1) fail(ErrorKind::InvalidArgument, "difference: bad orders");
    const std::size_t need = static_cast<std::size_t>(d) +
                             static_cast<std::size_t>(D) * static_cast<std::size_t>(s);
    if (x.size() <= need)
        fail(ErrorKind::InsufficientData, "difference: series too short for d=" +
                                              std::to_string(d) + ", D=" + std::to_string(D));
    std::vector<double> cur(x.begin(), x.end());
    for (int k = 0; k < D; ++k) {
        std::vector<double> next(cur.size() - static_cast<std::size_t>(s));
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = cur[i + static_cast<std::size_t>(s)] - cur[i];
        cur = std::move(next);
    }
    for (int k = 0; k < d; ++k) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = cur[i + 1] - cur[i];
        cur = std::move(next);
    }
    return cur;
}

std::vector<double> undifference(std::span<const double> forecast_diffs,
                                 std::span<const double> history, int d, int D, int s) {
    if (d < 0 || D < 0 || s < 1) fail(ErrorKind::InvalidArgument, "undifference: bad orders");
    if (forecast_diffs.empty()) return {};
    const std::size_t need = static_cast<std::size_t>(d) +
                             static_cast<std::size_t>(D) * static_cast<std::size_t>(s);
    if (history.size() < need)
        fail(ErrorKind::InsufficientData, "undifference: history shorter than d + D*s");

    // chain of partially differenced levels, seasonal steps first
    std::vector<std::vector<double>> levels;
    levels.emplace_back(history.begin(), history.end());
    for (int k = 0; k < D; ++k) {
        const auto& prev = levels.back();
        std::vector<double> next(prev.size() - static_cast<std::size_t>(s));
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = prev[i + static_cast<std::size_t>(s)] - prev[i];
        levels.push_back(std::move(next));
    }
    for (int k = 0; k < d; ++k) {
        const auto& prev = levels.back();
        std::vector<double> next(prev.size() - 1);
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = prev[i + 1] - prev[i];
        levels.push_back(std::move(next));
    }

    std::vector<double> cur(forecast_diffs.begin(), forecast_diffs.end());
    for (int level = D + d; level >= 1; --level) {
        auto extended = levels[static_cast<std::size_t>(level - 1)];
        std::vector<double> out;
        out.reserve(cur.size());
        const bool seasonal = level <= D;
        for (double diff : cur) {
            double anchor;
            if (seasonal)
                anchor = extended[extended.size() - static_cast<std::size_t>(s)];
            else
                anchor = extended.back();
            const double v = diff + anchor;
            out.push_back(v);
            extended.push_back(v);
        }
        cur = std::move(out);
    }
    return cur;
}

double css_objective(std::span<const double> params, std::span<const double> z,
                     const SarimaOrder& order) {
    if (params.size() != static_cast<std::size_t>(order.n_coeffs()))
        fail(ErrorKind::Shape, "css_objective: expected " + std::to_string(order.n_coeffs()) +
                                   " parameters");
    const auto run = run_css(params, z, order);
    return run ? run->css : kInf;
}

SarimaModel fit_sarima(const TimeSeries& train, const SarimaOrder& order) {
    order.validate();
    if (!train.gap_free()) fail(ErrorKind::InvalidArgument, "fit_sarima: series has gaps");
    const auto x = train.dense_values();
    const auto z = difference(x, order.d, order.D, order.s);
    const auto m = static_cast<int>(z.size());
    const int min_len = 10 + order.p + order.q + (order.P + order.Q) * order.s;
    if (m < min_len)
        fail(ErrorKind::InsufficientData, "fit_sarima: differenced length " + std::to_string(m) +
                                              " < " + std::to_string(min_len) + " for order " +
                                              to_string(order));

    const int n_coef = order.p + order.q + order.P + order.Q;
    const bool mu_free = order.d + order.D == 0;
    const double z_mean = mean(z);

    std::vector<double> full(static_cast<std::size_t>(n_coef) + 1, 0.0);
    full.back() = mu_free ? z_mean : 0.0;

    const int n_free = n_coef + (mu_free ? 1 : 0);
    if (n_free > 0) {
        auto objective = [&](std::span<const double> free) {
            std::vector<double> p(full.size(), 0.0);
            for (int i = 0; i < n_coef; ++i) p[static_cast<std::size_t>(i)] = free[static_cast<std::size_t>(i)];
            p.back() = mu_free ? free[static_cast<std::size_t>(n_coef)] : 0.0;
            return css_objective(p, z, order);
        };
        std::vector<double> x0(static_cast<std::size_t>(n_free), 0.0);
        if (mu_free) x0.back() = z_mean;
        NelderMeadOptions nm;
        nm.max_iters = 300 + 200 * n_free;
        nm.f_tolerance = 1e-10;
        nm.initial_step = 0.1;
        const auto res = nelder_mead(objective, std::move(x0), nm);
        for (int i = 0; i < n_coef; ++i) full[static_cast<std::size_t>(i)] = res.x[static_cast<std::size_t>(i)];
        full.back() = mu_free ? res.x[static_cast<std::size_t>(n_coef)] : 0.0;
    }

    SarimaModel model;
    model.order = order;
    const auto* base = full.data();
    model.ar.assign(base, base + order.p);
    model.ma.assign(base + order.p, base + order.p + order.q);
    model.sar.assign(base + order.p + order.q, base + order.p + order.q + order.P);
    model.sma.assign(base + order.p + order.q + order.P,
                     base + order.p + order.q + order.P + order.Q);
    model.intercept = full.back();
    model.intercept_estimated = mu_free;

    if (!ar_stationary(model.ar))
        fail(ErrorKind::Stationarity, "fit_sarima: non-stationary AR optimum for " +
                                          to_string(order));
    if (!ar_stationary(model.sar))
        fail(ErrorKind::Stationarity, "fit_sarima: non-stationary seasonal AR optimum for " +
                                          to_string(order));

    const auto run = run_css(full, z, order);
    if (!run) fail(ErrorKind::Divergence, "fit_sarima: residual recursion diverged");
    model.css = run->css;
    model.n_resid = static_cast<int>(run->resid.size());
    model.sigma2 = std::max(model.css / model.n_resid, 1e-300);
    const int k = n_free;
    model.aic = model.n_resid * std::log(model.sigma2) + 2.0 * (k + 1);

    const auto max_ar_lag = static_cast<std::size_t>(order.p + order.P * order.s);
    const auto max_ma_lag = static_cast<std::size_t>(order.q + order.Q * order.s);
    const std::size_t zt = std::min<std::size_t>(max_ar_lag, z.size());
    model.diff_tail.assign(z.end() - static_cast<std::ptrdiff_t>(zt), z.end());
    const std::size_t rt = std::min<std::size_t>(max_ma_lag, run->resid.size());
    model.resid_tail.assign(run->resid.end() - static_cast<std::ptrdiff_t>(rt),
                            run->resid.end());
    if (max_ma_lag > rt)  // pad with the pre-sample zeros the estimation assumed
        model.resid_tail.insert(model.resid_tail.begin(), max_ma_lag - rt, 0.0);
    const auto ht = static_cast<std::size_t>(order.d + order.D * order.s);
    model.history_tail.assign(x.end() - static_cast<std::ptrdiff_t>(std::min(ht, x.size())),
                              x.end());
    return model;
}

std::vector<double> forecast_sarima(const SarimaModel& model, int horizon) {
    if (horizon < 1) fail(ErrorKind::InvalidHorizon, "forecast_sarima: horizon must be >= 1");
    const SarimaOrder& o = model.order;
    const auto max_ar_lag = static_cast<std::size_t>(o.p + o.P * o.s);
    const auto max_ma_lag = static_cast<std::size_t>(o.q + o.Q * o.s);
    const auto need_hist = static_cast<std::size_t>(o.d + o.D * o.s);
    if (model.diff_tail.size() < max_ar_lag || model.resid_tail.size() < max_ma_lag ||
        model.history_tail.size() < need_hist)
        fail(ErrorKind::State, "forecast_sarima: model carries no forecasting state");

    std::vector<LagCoef> ar_lags, ma_lags;
    expand_ar(model.ar, model.sar, o.s, ar_lags);
    expand_ma(model.ma, model.sma, o.s, ma_lags);

    std::vector<double> w(model.diff_tail.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = model.diff_tail[i] - model.intercept;
    std::vector<double> eps = model.resid_tail;

    std::vector<double> zf;
    zf.reserve(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) {
        double acc = 0.0;
        for (const auto& [lag, c] : ar_lags)
            acc += c * w[w.size() - static_cast<std::size_t>(lag)];
        for (const auto& [lag, c] : ma_lags)
            acc += c * eps[eps.size() - static_cast<std::size_t>(lag)];
        w.push_back(acc);
        eps.push_back(0.0);
        zf.push_back(acc + model.intercept);
    }

    auto out = undifference(zf, model.history_tail, o.d, o.D, o.s);
    for (double& v : out) v = std::max(0.0, v);
    return out;
}

std::pair<int, int> select_differencing(std::span<const double> x, const SarimaBounds& bounds,
                                        int s) {
    // smallest d whose differenced series looks level-stationary under KPSS;
    // run on the raw series so a trend is assigned to d, not to D
    int best_d = bounds.d_max;
    for (int d = bounds.d_min; d <= bounds.d_max; ++d) {
        if (x.size() <= static_cast<std::size_t>(d)) {
            best_d = std::max(bounds.d_min, d - 1);
            break;
        }
        const auto z = difference(x, d, 0, s);
        if (kpss_level(z) < kKpssCritical5pct) {
            best_d = d;
            break;
        }
    }
    // then seasonal differencing, only where it strictly reduces variance
    int best_D = bounds.D_min;
    double best_var = kInf;
    for (int D = bounds.D_min; D <= bounds.D_max; ++D) {
        const std::size_t need = static_cast<std::size_t>(best_d) +
                                 static_cast<std::size_t>(D) * static_cast<std::size_t>(s);
        if (x.size() <= need + 1) break;
        const auto z = difference(x, best_d, D, s);
        const double v = variance(z);
        if (v < best_var) {
            best_var = v;
            best_D = D;
        }
    }
    return {best_d, best_D};
}

GridSearchResult grid_search(const TimeSeries& train, const SarimaBounds& bounds) {
    bounds.validate();
    if (!train.gap_free()) fail(ErrorKind::InvalidArgument, "grid_search: series has gaps");
    Stopwatch timer;
    const auto x = train.dense_values();
    const auto [d_star, D_star] = select_differencing(x, bounds, 24);

    auto clamp_comp = [](int v, int lo, int hi) { return std::clamp(v, lo, hi); };
    SarimaOrder start{clamp_comp(1, bounds.p_min, bounds.p_max), d_star,
                      clamp_comp(1, bounds.q_min, bounds.q_max),
                      clamp_comp(1, bounds.P_min, bounds.P_max), D_star,
                      clamp_comp(1, bounds.Q_min, bounds.Q_max), 24};

    GridSearchResult result;
    std::map<std::tuple<int, int, int, int>, double> memo;
    std::optional<SarimaModel> best;
    double best_aic = kInf;

    auto evaluate = [&](const SarimaOrder& o) {
        const auto key = std::tuple(o.p, o.q, o.P, o.Q);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        double aic = kInf;
        try {
            SarimaModel m = fit_sarima(train, o);
            aic = m.aic;
            if (!best || order_better(aic, o, best_aic, best->order)) {
                best = std::move(m);
                best_aic = aic;
            }
        } catch (const Error&) {
            // unfittable candidate; recorded as +inf
        }
        memo.emplace(key, aic);
        result.evaluated.emplace_back(o, aic);
        return aic;
    };

    SarimaOrder current = start;
    double current_aic = evaluate(current);

    for (;;) {
        std::optional<SarimaOrder> best_nb;
        double best_nb_aic = kInf;
        for (int comp = 0; comp < 4; ++comp) {
            for (int delta : {-1, +1}) {
                SarimaOrder nb = current;
                int* field = comp == 0 ? &nb.p : comp == 1 ? &nb.q : comp == 2 ? &nb.P : &nb.Q;
                *field += delta;
                if (!order_in_bounds(nb, bounds)) continue;
                const double aic = evaluate(nb);
                if (!best_nb || order_better(aic, nb, best_nb_aic, *best_nb)) {
                    best_nb = nb;
                    best_nb_aic = aic;
                }
            }
        }
        if (!best_nb || !order_better(best_nb_aic, *best_nb, current_aic, current)) break;
        current = *best_nb;
        current_aic = best_nb_aic;
    }

    if (!best) fail(ErrorKind::NoModel, "grid_search: every candidate order failed to fit");
    result.best = std::move(*best);
    result.elapsed_seconds = timer.seconds();
    return result;
}

}  // namespace airq
