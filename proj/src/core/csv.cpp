#include "core/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "core/errors.hpp"

namespace airq {

namespace {

std::string trim(std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.back())) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && is_space(s[i])) ++i;
    return s.substr(i);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

// Howard Hinnant's chrono algorithms; no timezone database involved.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yy + (m <= 2));
}

bool parse_int(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_fixed_uint(const std::string& s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    out = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        out = out * 10 + (s[i] - '0');
    }
    return true;
}

}  // namespace

std::int64_t parse_timestamp_hour(const std::string& field) {
    std::int64_t secs = 0;
    if (parse_int(field, secs)) {
        if (secs % 3600 != 0)
            fail(ErrorKind::Parse, "sub-hourly timestamp rejected: " + field);
        return secs / 3600;
    }
    // ISO-8601: YYYY-MM-DD[T ]HH:MM[:SS][Z|+hh:mm|-hh:mm]
    if (field.size() < 16 || field[4] != '-' || field[7] != '-' ||
        (field[10] != 'T' && field[10] != ' ') || field[13] != ':')
        fail(ErrorKind::Parse, "unrecognized timestamp: " + field);
    int year = 0, month = 0, day = 0, hh = 0, mm = 0, ss = 0;
    if (!parse_fixed_uint(field, 0, 4, year) || !parse_fixed_uint(field, 5, 2, month) ||
        !parse_fixed_uint(field, 8, 2, day) || !parse_fixed_uint(field, 11, 2, hh) ||
        !parse_fixed_uint(field, 14, 2, mm))
        fail(ErrorKind::Parse, "unrecognized timestamp: " + field);
    std::size_t pos = 16;
    if (pos < field.size() && field[pos] == ':') {
        if (!parse_fixed_uint(field, pos + 1, 2, ss))
            fail(ErrorKind::Parse, "unrecognized timestamp: " + field);
        pos += 3;
    }
    std::int64_t offset_sec = 0;
    if (pos < field.size()) {
        const char c = field[pos];
        if (c == 'Z' && pos + 1 == field.size()) {
            // UTC
        } else if ((c == '+' || c == '-') && pos + 6 == field.size() && field[pos + 3] == ':') {
            int oh = 0, om = 0;
            if (!parse_fixed_uint(field, pos + 1, 2, oh) ||
                !parse_fixed_uint(field, pos + 4, 2, om))
                fail(ErrorKind::Parse, "unrecognized timestamp: " + field);
            offset_sec = (c == '+' ? 1 : -1) * (oh * 3600 + om * 60);
        } else {
            fail(ErrorKind::Parse, "unrecognized timestamp: " + field);
        }
    }
    if (month < 1 || month > 12 || day < 1 || day > 31 || hh > 23 || mm > 59 || ss > 59)
        fail(ErrorKind::Parse, "timestamp out of range: " + field);
    const std::int64_t total = days_from_civil(year, static_cast<unsigned>(month),
                                               static_cast<unsigned>(day)) *
                                   86400 +
                               hh * 3600 + mm * 60 + ss - offset_sec;
    if (total % 3600 != 0) fail(ErrorKind::Parse, "sub-hourly timestamp rejected: " + field);
    return total / 3600;
}

std::string format_hour_iso(std::int64_t hour) {
    std::int64_t days = hour / 24;
    std::int64_t hod = hour % 24;
    if (hod < 0) {
        hod += 24;
        days -= 1;
    }
    int y = 0;
    unsigned m = 0, d = 0;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:00:00Z", y, m, d,
                  static_cast<long long>(hod));
    return buf;
}

TimeSeries ingest_csv(std::istream& in, const std::string& ts_col, const std::string& val_col) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Parse, "ingest_csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // strip a UTF-8 BOM if present
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line = line.substr(3);

    const auto header = split_fields(line);
    std::ptrdiff_t ts_idx = -1, val_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == ts_col) ts_idx = static_cast<std::ptrdiff_t>(i);
        if (header[i] == val_col) val_idx = static_cast<std::ptrdiff_t>(i);
    }
    if (ts_idx < 0 || val_idx < 0)
        fail(ErrorKind::Parse, "ingest_csv: header lacks '" + ts_col + "' or '" + val_col + "'");

    std::vector<SeriesPoint> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (static_cast<std::size_t>(std::max(ts_idx, val_idx)) >= fields.size()) continue;

        std::int64_t hour = 0;
        try {
            hour = parse_timestamp_hour(fields[static_cast<std::size_t>(ts_idx)]);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Parse &&
                std::string(e.what()).rfind("sub-hourly", 0) == 0)
                throw;  // a sub-hourly grid must not be silently decimated
            continue;
        }

        const std::string& raw = fields[static_cast<std::size_t>(val_idx)];
        std::optional<double> value;
        if (!raw.empty()) {
            char* endp = nullptr;
            const double v = std::strtod(raw.c_str(), &endp);
            if (endp != raw.c_str() + raw.size()) continue;  // unparseable row
            if (std::isfinite(v) && v >= kMinValidValue && v <= kMaxValidValue) value = v;
            // else: outlier -> missing
        }
        rows.push_back({hour, value});
    }
    if (rows.empty()) fail(ErrorKind::EmptyInput, "ingest_csv: no parseable rows");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const SeriesPoint& a, const SeriesPoint& b) { return a.hour < b.hour; });

    // collapse duplicate hours by the mean of their present values
    std::map<std::int64_t, std::pair<double, std::size_t>> grouped;
    for (const auto& r : rows) {
        auto& slot = grouped.try_emplace(r.hour, 0.0, 0).first->second;
        if (r.value) {
            slot.first += *r.value;
            slot.second += 1;
        }
    }

    const std::int64_t first = grouped.begin()->first;
    const std::int64_t last = grouped.rbegin()->first;
    std::vector<std::optional<double>> values(static_cast<std::size_t>(last - first + 1));
    for (const auto& [hour, acc] : grouped) {
        if (acc.second > 0)
            values[static_cast<std::size_t>(hour - first)] =
                acc.first / static_cast<double>(acc.second);
    }
    return TimeSeries(first, std::move(values));
}

TimeSeries ingest_csv_file(const std::string& path, const std::string& ts_col,
                           const std::string& val_col) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path);
    return ingest_csv(in, ts_col, val_col);
}

void write_csv(const TimeSeries& s, std::ostream& out) {
    out << "timestamp,value\n";
    char buf[64];
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_hour_iso(s.hour_at(i)) << ',';
        if (s.at(i)) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), *s.at(i));
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
}

void write_csv_file(const TimeSeries& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write " + path);
    write_csv(s, out);
    out.flush();
    if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

}  // namespace airq
