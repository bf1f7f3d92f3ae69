#include "core/metrics.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace airq {

ErrorSummary rmse(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.empty() || actual.empty()) fail(ErrorKind::EmptyInput, "rmse: empty input");
    if (predicted.size() != actual.size())
        fail(ErrorKind::Shape, "rmse: length mismatch (" + std::to_string(predicted.size()) +
                                   " vs " + std::to_string(actual.size()) + ")");
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = actual[i] - predicted[i];
        acc += d * d;
    }
    return {std::sqrt(acc / static_cast<double>(predicted.size())), predicted.size()};
}

double mean_of(std::span<const ErrorSummary> errors) {
    if (errors.empty()) fail(ErrorKind::EmptyInput, "mean_of: empty input");
    double acc = 0.0;
    for (const auto& e : errors) acc += e.rmse;
    return acc / static_cast<double>(errors.size());
}

}  // namespace airq
