#include "lwcov/timestamp.hpp"

#include <charconv>
#include <cstdio>
#include <string>

#include "lwcov/error.hpp"

namespace lwcov {

namespace {

int read_fixed(std::string_view text, std::size_t pos, std::size_t width, std::string_view full) {
    int value = 0;
    const char* first = text.data() + pos;
    const char* last = first + width;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ValidationError("malformed timestamp '" + std::string(full) + "'");
    }
    return value;
}

void expect_char(std::string_view text, std::size_t pos, char c, std::string_view full) {
    if (pos >= text.size() || text[pos] != c) {
        throw ValidationError("malformed timestamp '" + std::string(full) + "'");
    }
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    const std::string_view full = text;
    if (!text.empty() && (text.back() == 'Z' || text.back() == 'z')) {
        text.remove_suffix(1);
    }
    if (text.size() < 19) {
        throw ValidationError("malformed timestamp '" + std::string(full) + "'");
    }
    const int yr = read_fixed(text, 0, 4, full);
    expect_char(text, 4, '-', full);
    const int mo = read_fixed(text, 5, 2, full);
    expect_char(text, 7, '-', full);
    const int dy = read_fixed(text, 8, 2, full);
    if (text[10] != 'T' && text[10] != ' ') {
        throw ValidationError("malformed timestamp '" + std::string(full) + "'");
    }
    const int hh = read_fixed(text, 11, 2, full);
    expect_char(text, 13, ':', full);
    const int mm = read_fixed(text, 14, 2, full);
    expect_char(text, 16, ':', full);
    const int ss = read_fixed(text, 17, 2, full);

    int millis = 0;
    if (text.size() > 19) {
        expect_char(text, 19, '.', full);
        const std::string_view frac = text.substr(20);
        if (frac.empty()) {
            throw ValidationError("malformed timestamp '" + std::string(full) + "'");
        }
        int scale = 100;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            const char c = frac[i];
            if (c < '0' || c > '9') {
                throw ValidationError("malformed timestamp '" + std::string(full) + "'");
            }
            if (i < 3) {
                millis += (c - '0') * scale;
                scale /= 10;
            }
        }
    }

    const year_month_day ymd{year{yr}, month{static_cast<unsigned>(mo)},
                             day{static_cast<unsigned>(dy)}};
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) {
        throw ValidationError("timestamp out of range '" + std::string(full) + "'");
    }
    return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} + milliseconds{millis};
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day_point = floor<days>(t);
    const year_month_day ymd{day_point};
    auto rest = t - day_point;
    const auto h = duration_cast<hours>(rest);
    rest -= h;
    const auto m = duration_cast<minutes>(rest);
    rest -= m;
    const auto s = duration_cast<seconds>(rest);
    rest -= s;

    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(h.count()), static_cast<int>(m.count()),
                  static_cast<int>(s.count()), static_cast<int>(rest.count()));
    return buf;
}

}  // namespace lwcov
