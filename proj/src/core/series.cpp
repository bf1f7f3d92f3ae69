#include "core/series.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace airq {

TimeSeries::TimeSeries(std::int64_t start_hour, std::vector<std::optional<double>> values,
                       std::string name)
    : start_hour_(start_hour), values_(std::move(values)), name_(std::move(name)) {
    if (values_.empty()) fail(ErrorKind::EmptyInput, "TimeSeries: length must be >= 1");
    for (const auto& v : values_) {
        if (v && !std::isfinite(*v))
            fail(ErrorKind::InvalidArgument, "TimeSeries: non-finite value");
    }
}

TimeSeries TimeSeries::from_points(const std::vector<SeriesPoint>& points, std::string name) {
    if (points.empty()) fail(ErrorKind::EmptyInput, "TimeSeries: no points");
    std::vector<std::optional<double>> values;
    values.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0 && points[i].hour != points[i - 1].hour + 1)
            fail(ErrorKind::InvalidArgument, "TimeSeries: timestamps are not strictly hourly");
        values.push_back(points[i].value);
    }
    return TimeSeries(points.front().hour, std::move(values), std::move(name));
}

bool TimeSeries::gap_free() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](const auto& v) { return v.has_value(); });
}

std::size_t TimeSeries::missing_count() const {
    return static_cast<std::size_t>(std::count_if(
        values_.begin(), values_.end(), [](const auto& v) { return !v.has_value(); }));
}

std::vector<double> TimeSeries::dense_values() const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (const auto& v : values_) {
        if (!v) fail(ErrorKind::InvalidArgument, "dense_values: series has missing values");
        out.push_back(*v);
    }
    return out;
}

TimeSeries TimeSeries::slice(std::size_t from, std::size_t count) const {
    if (from + count > values_.size() || count == 0)
        fail(ErrorKind::WindowOutOfRange, "slice: out of range");
    std::vector<std::optional<double>> vals(values_.begin() + static_cast<std::ptrdiff_t>(from),
                                            values_.begin() +
                                                static_cast<std::ptrdiff_t>(from + count));
    return TimeSeries(hour_at(from), std::move(vals), name_);
}

std::size_t TimeSeries::index_of(std::int64_t hour) const {
    if (hour < start_hour_ || hour > end_hour())
        fail(ErrorKind::WindowOutOfRange, "hour " + std::to_string(hour) + " outside series");
    return static_cast<std::size_t>(hour - start_hour_);
}

TimeSeries interpolate_missing(const TimeSeries& s) {
    std::size_t present = s.size() - s.missing_count();
    if (present < 2)
        fail(ErrorKind::InsufficientData, "interpolate_missing: need at least two present values");

    const std::size_t n = s.size();
    std::vector<std::optional<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = s.at(i);

    std::size_t first = 0;
    while (!out[first]) ++first;
    std::size_t last = n - 1;
    while (!out[last]) --last;

    for (std::size_t i = 0; i < first; ++i) out[i] = *out[first];
    for (std::size_t i = last + 1; i < n; ++i) out[i] = *out[last];

    std::size_t left = first;
    for (std::size_t i = first + 1; i <= last; ++i) {
        if (!out[i]) continue;
        if (i > left + 1) {
            const double lo = *out[left];
            const double hi = *out[i];
            const double span = static_cast<double>(i - left);
            for (std::size_t k = left + 1; k < i; ++k) {
                const double w = static_cast<double>(k - left) / span;
                double v = lo * (1.0 - w) + hi * w;
                // keep the invariant exact under rounding
                v = std::clamp(v, std::min(lo, hi), std::max(lo, hi));
                out[k] = v;
            }
        }
        left = i;
    }
    return TimeSeries(s.start_hour(), std::move(out), s.name());
}

std::pair<TimeSeries, TimeSeries> split(const TimeSeries& s, const SplitSpec& spec) {
    if (spec.test_hours < 1 || spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0)
        fail(ErrorKind::InvalidArgument, "split: invalid SplitSpec");
    const std::size_t n = s.size();
    const auto test_len = static_cast<std::size_t>(spec.test_hours);
    if (n <= test_len)
        fail(ErrorKind::InsufficientData,
             "split: series of length " + std::to_string(n) + " cannot hold a " +
                 std::to_string(test_len) + "-hour test interval");
    const std::size_t avail = n - test_len;
    std::size_t train_len;
    if (spec.train_hours) {
        if (*spec.train_hours < 1 || static_cast<std::size_t>(*spec.train_hours) > avail)
            fail(ErrorKind::InsufficientData, "split: explicit training interval does not fit");
        train_len = static_cast<std::size_t>(*spec.train_hours);
    } else {
        train_len = static_cast<std::size_t>(spec.train_fraction * static_cast<double>(n));
        train_len = std::clamp<std::size_t>(train_len, 1, avail);
    }
    TimeSeries train = s.slice(avail - train_len, train_len);
    TimeSeries test = s.slice(avail, test_len);
    return {std::move(train), std::move(test)};
}

std::pair<TimeSeries, TimeSeries> window_at(const TimeSeries& s, std::int64_t origin,
                                            int train_len, int horizon) {
    if (train_len < 1 || horizon < 1)
        fail(ErrorKind::InvalidArgument, "window_at: train_len and horizon must be positive");
    if (origin - train_len < s.start_hour() || origin + horizon > s.end_hour() + 1)
        fail(ErrorKind::WindowOutOfRange,
             "window_at: [" + std::to_string(origin - train_len) + ", " +
                 std::to_string(origin + horizon) + ") outside series");
    const std::size_t train_from = s.index_of(origin - train_len);
    TimeSeries train = s.slice(train_from, static_cast<std::size_t>(train_len));
    TimeSeries actuals =
        s.slice(s.index_of(origin), static_cast<std::size_t>(horizon));
    return {std::move(train), std::move(actuals)};
}

}  // namespace airq
