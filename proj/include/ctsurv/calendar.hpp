#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ctsurv/errors.hpp"

namespace ctsurv {

// Serial day number of a civil date (days since 1970-01-01, Gregorian).
inline long civil_to_serial(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

inline void serial_to_civil(long serial, int& y, int& m, int& d) {
    serial += 719468;
    const long era = (serial >= 0 ? serial : serial - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(serial - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long yr = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

// Parses strict ISO-8601 "YYYY-MM-DD" into a serial day number.
inline long parse_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d%c", &y, &m, &d, &extra) != 3 || m < 1 || m > 12 ||
        d < 1 || d > 31)
        throw ValidationError("invalid ISO date '" + s + "'");
    const long serial = civil_to_serial(y, m, d);
    int y2, m2, d2;
    serial_to_civil(serial, y2, m2, d2);
    if (y2 != y || m2 != m || d2 != d)
        throw ValidationError("invalid calendar date '" + s + "'");
    return serial;
}

inline std::string format_date(long serial) {
    int y, m, d;
    serial_to_civil(serial, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

// Equal-length calendar-time intervals (t_0, t_1], ..., (t_{K-1}, t_K] on an
// integer-day axis. Day 0 is the configured origin date; the last interval
// may be shorter when the span is not divisible by the interval length.
struct CalendarGrid {
    long origin_serial = 0; // serial day number of day 0
    int start_day = 0;
    int end_day = 0;
    int K = 0;
    std::vector<int> boundaries; // size K+1, boundaries[0] = start_day

    static CalendarGrid make(long origin_serial, int start_day, int end_day, int interval_len) {
        if (end_day <= start_day)
            throw ValidationError("grid end must be after grid start");
        if (interval_len <= 0) throw ValidationError("interval length must be positive");
        CalendarGrid g;
        g.origin_serial = origin_serial;
        g.start_day = start_day;
        g.end_day = end_day;
        g.K = (end_day - start_day + interval_len - 1) / interval_len;
        g.boundaries.resize(std::size_t(g.K) + 1);
        for (int k = 0; k <= g.K; ++k)
            g.boundaries[std::size_t(k)] = std::min(start_day + k * interval_len, end_day);
        return g;
    }

    bool contains(double t) const { return t >= start_day && t <= end_day; }

    // 1-based index k of the interval (t_{k-1}, t_k] containing t. The grid
    // start itself maps to interval 1 so the enrollment-day hazard is defined.
    int interval_index(double t) const {
        if (!contains(t))
            throw ValidationError("time " + std::to_string(t) + " outside grid [" +
                                  std::to_string(start_day) + ", " + std::to_string(end_day) + "]");
        if (t == double(start_day)) return 1;
        int lo = 1, hi = K;
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (t <= boundaries[std::size_t(mid)]) hi = mid;
            else lo = mid + 1;
        }
        return lo;
    }

    int interval_start(int k) const { return boundaries[std::size_t(k - 1)]; }
    int interval_end(int k) const { return boundaries[std::size_t(k)]; }
    int interval_length(int k) const { return interval_end(k) - interval_start(k); }

    int day_of(const std::string& iso_date) const {
        return static_cast<int>(parse_date(iso_date) - origin_serial);
    }

    std::string date_of(int day) const { return format_date(origin_serial + day); }
};

} // namespace ctsurv
