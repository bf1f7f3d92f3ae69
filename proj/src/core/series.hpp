#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace airq {

struct SeriesPoint {
    std::int64_t hour = 0;  // epoch hours, UTC
    std::optional<double> value;
};

/// Uniformly hourly univariate series. Gaps are present timestamps with an
/// absent value; the grid itself never has holes. Immutable after
/// construction.
class TimeSeries {
public:
    TimeSeries(std::int64_t start_hour, std::vector<std::optional<double>> values,
               std::string name = "PM2.5");

    /// Validates a strictly hourly point list; does not regularize.
    static TimeSeries from_points(const std::vector<SeriesPoint>& points,
                                  std::string name = "PM2.5");

    std::size_t size() const { return values_.size(); }
    std::int64_t start_hour() const { return start_hour_; }
    std::int64_t end_hour() const {
        return start_hour_ + static_cast<std::int64_t>(values_.size()) - 1;
    }
    std::int64_t hour_at(std::size_t i) const {
        return start_hour_ + static_cast<std::int64_t>(i);
    }
    const std::optional<double>& at(std::size_t i) const { return values_[i]; }
    const std::string& name() const { return name_; }

    bool gap_free() const;
    std::size_t missing_count() const;

    /// All values of a gap-free series; throws otherwise.
    std::vector<double> dense_values() const;

    /// Contiguous sub-series [from, from+count).
    TimeSeries slice(std::size_t from, std::size_t count) const;

    /// Index of an absolute hour; throws WindowOutOfRange when outside.
    std::size_t index_of(std::int64_t hour) const;

private:
    std::int64_t start_hour_;
    std::vector<std::optional<double>> values_;
    std::string name_;
};

struct SplitSpec {
    double train_fraction = 0.7;
    int test_hours = 24;
    /// Explicit training-interval length; overrides train_fraction when set.
    std::optional<int> train_hours;
};

/// Fills every gap: interior gaps by the straight line through the nearest
/// present neighbors, leading/trailing gaps by flat extension.
TimeSeries interpolate_missing(const TimeSeries& s);

/// test = final spec.test_hours points, train = the contiguous block just
/// before it.
std::pair<TimeSeries, TimeSeries> split(const TimeSeries& s, const SplitSpec& spec);

/// train covers [origin - train_len, origin), actuals [origin, origin + horizon).
std::pair<TimeSeries, TimeSeries> window_at(const TimeSeries& s, std::int64_t origin,
                                            int train_len, int horizon);

}  // namespace airq
