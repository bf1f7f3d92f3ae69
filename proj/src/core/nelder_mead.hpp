#pragma once

#include <functional>
#include <span>
#include <vector>

namespace airq {

struct NelderMeadOptions {
    int max_iters = 500;
    double f_tolerance = 1e-6;  // stop when |f_worst - f_best| falls below
    double initial_step = 0.1;  // absolute per-coordinate simplex offset
};

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    int iterations = 0;
};

/// Downhill simplex minimizer (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5). Returns the best point ever evaluated, so the result is never
/// worse than the starting point.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts = {});

}  // namespace airq
