#include "core/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace airq {

namespace {
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    NelderMeadResult best;
    best.x = x0;
    best.fx = f(x0);
    if (n == 0) return best;

    auto eval = [&](const std::vector<double>& x) {
        const double v = f(x);
        if (v < best.fx) {
            best.fx = v;
            best.x = x;
        }
        return v;
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fx(n + 1);
    fx[0] = best.fx;
    for (std::size_t i = 0; i < n; ++i) {
        simplex[i + 1][i] += opts.initial_step;
        fx[i + 1] = eval(simplex[i + 1]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);

    int iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        const std::size_t lo = order[0], hi = order[n], next_hi = order[n - 1];

        if (std::abs(fx[hi] - fx[lo]) <= opts.f_tolerance) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[order[k]][j];
        for (double& c : centroid) c /= static_cast<double>(n);

        for (std::size_t j = 0; j < n; ++j)
            xr[j] = centroid[j] + kReflect * (centroid[j] - simplex[hi][j]);
        const double fr = eval(xr);

        if (fr < fx[lo]) {
            for (std::size_t j = 0; j < n; ++j)
                xe[j] = centroid[j] + kExpand * (xr[j] - centroid[j]);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[hi] = xe;
                fx[hi] = fe;
            } else {
                simplex[hi] = xr;
                fx[hi] = fr;
            }
        } else if (fr < fx[next_hi]) {
            simplex[hi] = xr;
            fx[hi] = fr;
        } else {
            const bool outside = fr < fx[hi];
            const auto& base = outside ? xr : simplex[hi];
            for (std::size_t j = 0; j < n; ++j)
                xc[j] = centroid[j] + kContract * (base[j] - centroid[j]);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fx[hi])) {
                simplex[hi] = xc;
                fx[hi] = fc;
            } else {
                for (std::size_t k = 1; k <= n; ++k) {
                    auto& v = simplex[order[k]];
                    for (std::size_t j = 0; j < n; ++j)
                        v[j] = simplex[lo][j] + kShrink * (v[j] - simplex[lo][j]);
                    fx[order[k]] = eval(v);
                }
            }
        }
    }
    best.iterations = iter;
    return best;
}

}  // namespace airq
