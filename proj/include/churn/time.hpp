#ifndef CHURN_TIME_HPP
#define CHURN_TIME_HPP

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace churn {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

constexpr Timestamp kSecondsPerDay = 86400;

namespace detail {

// days since 1970-01-01 for a civil date (Howard Hinnant's algorithm)
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

}  // namespace detail

/// Parses "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS" or the space-separated
/// variant, with an optional trailing "Z". Interpreted as UTC.
inline Timestamp parse_timestamp(const std::string& s) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    char sep = 0, z = 0;
    int n = std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%d%c", &y, &mo, &d, &sep, &h, &mi, &sec, &z);
    bool ok = false;
    if (n == 3) {
        ok = true;
    } else if (n >= 7 && (sep == 'T' || sep == ' ')) {
        ok = (n == 7) || (n == 8 && z == 'Z');
    }
    if (!ok || mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 ||
        sec < 0 || sec > 60)
        throw std::invalid_argument("unparseable timestamp: " + s);
    return detail::days_from_civil(y, mo, d) * kSecondsPerDay + h * 3600 + mi * 60 + sec;
}

inline std::string format_timestamp(Timestamp t) {
    std::int64_t days = t / kSecondsPerDay;
    std::int64_t tod = t % kSecondsPerDay;
    if (tod < 0) {
        tod += kSecondsPerDay;
        --days;
    }
    int y, m, d;
    detail::civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02lld:%02lld:%02lld", y, m, d,
                  static_cast<long long>(tod / 3600), static_cast<long long>(tod % 3600 / 60),
                  static_cast<long long>(tod % 60));
    return buf;
}

}  // namespace churn

#endif  // CHURN_TIME_HPP
