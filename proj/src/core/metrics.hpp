#pragma once

#include <chrono>
#include <cstddef>
#include <span>

namespace airq {

struct ErrorSummary {
    double rmse = 0.0;
    std::size_t n = 0;
};

struct TimingRecord {
    double build_seconds = 0.0;
    double predict_seconds = 0.0;
};

/// sqrt( sum (y_i - x_i)^2 / n ) over two equal-length sequences.
ErrorSummary rmse(std::span<const double> predicted, std::span<const double> actual);

/// Arithmetic mean of the rmse fields; the cross-window aggregation rule.
double mean_of(std::span<const ErrorSummary> errors);

class Stopwatch {
public:
    Stopwatch() : start_(clock::now()) {}

    void reset() { start_ = clock::now(); }

    double seconds() const {
        return std::chrono::duration<double>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_;
};

}  // namespace airq
