#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "core/series.hpp"

namespace airq {

/// Valid concentration range; anything outside is treated as an outlier and
/// stored as missing, to be repaired by interpolation like any other gap.
inline constexpr double kMinValidValue = 0.0;
inline constexpr double kMaxValidValue = 2000.0;

/// Reads a two-column CSV (`timestamp,value` by default) and returns the
/// series on a regularized hourly grid: rows sorted, duplicate hours
/// collapsed by mean, absent hours inserted as missing, out-of-range values
/// converted to missing. Timestamps may be ISO-8601 or integer epoch
/// seconds; either way they must land on whole hours.
TimeSeries ingest_csv(std::istream& in, const std::string& ts_col = "timestamp",
                      const std::string& val_col = "value");

TimeSeries ingest_csv_file(const std::string& path, const std::string& ts_col = "timestamp",
                           const std::string& val_col = "value");

void write_csv(const TimeSeries& s, std::ostream& out);
void write_csv_file(const TimeSeries& s, const std::string& path);

/// "2018-01-07T14:00:00Z" or "1515333600" -> epoch hour; throws ParseError on
/// malformed text or sub-hourly timestamps.
std::int64_t parse_timestamp_hour(const std::string& field);

std::string format_hour_iso(std::int64_t hour);

}  // namespace airq
