#include "snapinfo/dates.hpp"

#include <cstdio>

namespace snapinfo {
namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

std::optional<Day> make_day(int y, int m, int d) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd};
}

}  // namespace

std::optional<Day> parse_day(std::string_view text) {
    int y, m, d;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    if (!read_int(text, 0, 4, y) || !read_int(text, 5, 2, m) || !read_int(text, 8, 2, d)) return std::nullopt;
    return make_day(y, m, d);
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    if (text.size() < 20) return std::nullopt;
    auto day = parse_day(text.substr(0, 10));
    if (!day || (text[10] != 'T' && text[10] != 't' && text[10] != ' ')) return std::nullopt;
    int hh, mm, ss;
    if (!read_int(text, 11, 2, hh) || text[13] != ':' || !read_int(text, 14, 2, mm) || text[16] != ':' ||
        !read_int(text, 17, 2, ss))
        return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) return std::nullopt;
    }
    if (pos >= text.size()) return std::nullopt;

    int offset_minutes = 0;
    const char zone = text[pos];
    if (zone == 'Z' || zone == 'z') {
        if (pos + 1 != text.size()) return std::nullopt;
    } else if (zone == '+' || zone == '-') {
        int oh, om;
        if (text.size() != pos + 6 || !read_int(text, pos + 1, 2, oh) || text[pos + 3] != ':' ||
            !read_int(text, pos + 4, 2, om) || oh > 23 || om > 59)
            return std::nullopt;
        offset_minutes = (oh * 60 + om) * (zone == '+' ? 1 : -1);
    } else {
        return std::nullopt;
    }

    Timestamp local = time_point_cast<seconds>(*day) + hours{hh} + minutes{mm} + seconds{ss};
    return local - minutes{offset_minutes};
}

std::string format_day(Day d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const Day d = utc_day(t);
    const hh_mm_ss hms{t - d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(hms.hours().count()),
                  static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
    return format_day(d) + buf;
}

}  // namespace snapinfo
