#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/series.hpp"

namespace airq {

/// Seasonal ARIMA order (p,d,q)(P,D,Q) with period s = 24 h.
struct SarimaOrder {
    int p = 0, d = 0, q = 0;
    int P = 0, D = 0, Q = 0;
    int s = 24;

    void validate() const;
    int n_coeffs() const { return p + q + P + Q + 1; }  // + intercept slot
    bool operator==(const SarimaOrder&) const = default;
};

/// Search box for the order components. Defaults are the full admissible
/// ranges: p 0..6, d 0..2, q 0..5, P 0..3, D 0..1, Q 0..2.
struct SarimaBounds {
    int p_min = 0, p_max = 6;
    int d_min = 0, d_max = 2;
    int q_min = 0, q_max = 5;
    int P_min = 0, P_max = 3;
    int D_min = 0, D_max = 1;
    int Q_min = 0, Q_max = 2;

    void validate() const;
};

struct SarimaModel {
    SarimaOrder order;
    std::vector<double> ar, ma, sar, sma;
    double intercept = 0.0;       // mean of the differenced series; fixed at 0 when d+D > 0
    bool intercept_estimated = false;
    double sigma2 = 0.0;
    double css = 0.0;
    double aic = 0.0;
    int n_resid = 0;

    // state needed to forecast from the training end
    std::vector<double> diff_tail;     // trailing differenced values
    std::vector<double> resid_tail;    // trailing residuals
    std::vector<double> history_tail;  // trailing original-scale values
};

struct GridSearchResult {
    SarimaModel best;
    std::vector<std::pair<SarimaOrder, double>> evaluated;  // order -> aic (+inf = failed fit)
    double elapsed_seconds = 0.0;
};

/// (1-B)^d (1-B^s)^D x; output length = len(x) - d - D*s.
std::vector<double> difference(std::span<const double> x, int d, int D, int s);

/// Exact left inverse of difference(), anchored on the trailing d + D*s
/// values of the original-scale history.
std::vector<double> undifference(std::span<const double> forecast_diffs,
                                 std::span<const double> history, int d, int D, int s);

/// Conditional sum of squares of the multiplicative seasonal ARMA recursion
/// with pre-sample residuals zero. params = [ar, ma, sar, sma, intercept].
/// Non-finite intermediates yield +infinity rather than trapping.
double css_objective(std::span<const double> params, std::span<const double> z,
                     const SarimaOrder& order);

/// Nelder-Mead CSS minimization from a zero start; throws StationarityError
/// when the optimum has an AR or seasonal-AR root inside the unit circle.
SarimaModel fit_sarima(const TimeSeries& train, const SarimaOrder& order);

/// Stepwise neighborhood search over (p,q,P,Q) with d,D fixed by a
/// KPSS/variance heuristic; AIC selection with ties broken toward fewer
/// parameters, then lexicographically smaller order.
GridSearchResult grid_search(const TimeSeries& train, const SarimaBounds& bounds = {});

std::vector<double> forecast_sarima(const SarimaModel& model, int horizon);

/// d = smallest order in range whose differenced series passes a KPSS level
/// test; D = seasonal differencing iff it reduces variance. Exposed for tests.
std::pair<int, int> select_differencing(std::span<const double> x, const SarimaBounds& bounds,
                                        int s);

std::string to_string(const SarimaOrder& order);

}  // namespace airq
