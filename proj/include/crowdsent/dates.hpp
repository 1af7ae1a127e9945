#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace crowdsent {

// Days since 1970-01-01 (UTC). All calendar math is done in UTC.
using DayNum = std::int32_t;
// Seconds since 1970-01-01T00:00:00Z.
using Timestamp = std::int64_t;

inline constexpr std::int64_t kSecondsPerDay = 86400;

struct CivilDate {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
};

DayNum civil_to_days(int year, int month, int day);
CivilDate days_to_civil(DayNum days);

inline DayNum day_of(Timestamp ts) {
    // floor division, timestamps may predate the epoch
    std::int64_t d = ts >= 0 ? ts / kSecondsPerDay : (ts - (kSecondsPerDay - 1)) / kSecondsPerDay;
    return static_cast<DayNum>(d);
}

inline Timestamp day_start(DayNum d) { return static_cast<Timestamp>(d) * kSecondsPerDay; }

int year_of_day(DayNum d);
inline int year_of(Timestamp ts) { return year_of_day(day_of(ts)); }

DayNum year_start_day(int year);
inline Timestamp year_start(int year) { return day_start(year_start_day(year)); }

// 0 = Monday .. 6 = Sunday
int weekday_of(DayNum d);
inline bool is_weekday(DayNum d) { return weekday_of(d) < 5; }

// "YYYY-MM-DD"
std::optional<DayNum> parse_iso_date(const std::string& s);
std::string format_iso_date(DayNum d);

}  // namespace crowdsent
