#include "crowdsent/dates.hpp"

#include <cstdio>

namespace crowdsent {

// Civil <-> day-count conversions follow the well-known era/year-of-era
// decomposition (proleptic Gregorian calendar, day 0 = 1970-01-01).
DayNum civil_to_days(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);            // [0, 399]
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;                   // [0, 365]
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;        // [0, 146096]
    return era * 146097 + static_cast<int>(doe) - 719468;
}

CivilDate days_to_civil(DayNum days) {
    int z = days + 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);         // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);         // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                              // [0, 11]
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;                      // [1, 31]
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;                         // [1, 12]
    return CivilDate{y + (m <= 2), static_cast<int>(m), static_cast<int>(d)};
}

int year_of_day(DayNum d) { return days_to_civil(d).year; }

DayNum year_start_day(int year) { return civil_to_days(year, 1, 1); }

int weekday_of(DayNum d) {
    // day 0 (1970-01-01) was a Thursday
    int w = (d + 3) % 7;
    return w < 0 ? w + 7 : w;
}

std::optional<DayNum> parse_iso_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3) return std::nullopt;
    if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    DayNum dn = civil_to_days(y, m, d);
    CivilDate back = days_to_civil(dn);
    if (back.year != y || back.month != m || back.day != d) return std::nullopt;  // e.g. Feb 30
    return dn;
}

std::string format_iso_date(DayNum d) {
    CivilDate c = days_to_civil(d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
    return buf;
}

}  // namespace crowdsent
