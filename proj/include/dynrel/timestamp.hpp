#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace dynrel {

/// Absolute UTC instant with microsecond resolution.
struct Timestamp {
  std::int64_t micros = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;

  static Timestamp from_seconds(std::int64_t s) { return Timestamp{s * 1'000'000}; }
};

namespace detail {

// Howard Hinnant's civil-date conversions.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

constexpr CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::optional<unsigned> digits(std::size_t n) {
    if (pos_ + n > s_.size()) return std::nullopt;
    unsigned v = 0;
    auto r = std::from_chars(s_.data() + pos_, s_.data() + pos_ + n, v);
    if (r.ec != std::errc{} || r.ptr != s_.data() + pos_ + n) return std::nullopt;
    pos_ += n;
    return v;
  }

  // Fractional seconds of any length, truncated to microseconds.
  std::int64_t fraction() {
    std::int64_t micros = 0;
    int scale = 100000;
    while (!done() && peek() >= '0' && peek() <= '9') {
      if (scale > 0) {
        micros += (peek() - '0') * scale;
        scale /= 10;
      }
      ++pos_;
    }
    return micros;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses ISO-8601 date-times such as `2023-01-02T10:00:00Z`,
/// `2023-01-02 10:00:00.125+01:00` or a bare date. A missing offset means UTC.
inline std::optional<Timestamp> parse_timestamp(std::string_view text) {
  detail::Cursor c(text);
  auto y = c.digits(4);
  if (!y || !c.accept('-')) return std::nullopt;
  auto mo = c.digits(2);
  if (!mo || !c.accept('-')) return std::nullopt;
  auto d = c.digits(2);
  if (!d || *mo < 1 || *mo > 12 || *d < 1 || *d > 31) return std::nullopt;

  unsigned hh = 0, mm = 0, ss = 0;
  std::int64_t frac = 0;
  std::int64_t offset_minutes = 0;
  if (!c.done()) {
    if (!c.accept('T') && !c.accept(' ')) return std::nullopt;
    auto h = c.digits(2);
    if (!h || !c.accept(':')) return std::nullopt;
    auto mi = c.digits(2);
    if (!mi) return std::nullopt;
    hh = *h;
    mm = *mi;
    if (c.accept(':')) {
      auto s = c.digits(2);
      if (!s) return std::nullopt;
      ss = *s;
      if (c.accept('.') || c.accept(',')) frac = c.fraction();
    }
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    if (c.accept('Z') || c.accept('z')) {
    } else if (c.peek() == '+' || c.peek() == '-') {
      const int sign = c.peek() == '-' ? -1 : 1;
      c.accept(c.peek());
      auto oh = c.digits(2);
      if (!oh) return std::nullopt;
      c.accept(':');
      auto om = c.digits(2);
      offset_minutes = sign * (static_cast<std::int64_t>(*oh) * 60 + (om ? *om : 0));
    }
    if (!c.done()) return std::nullopt;
  }

  const std::int64_t days = detail::days_from_civil(*y, *mo, *d);
  const std::int64_t secs = days * 86400 + hh * 3600 + mm * 60 + ss - offset_minutes * 60;
  return Timestamp{secs * 1'000'000 + frac};
}

/// Formats as `YYYY-MM-DDTHH:MM:SS[.fff|.ffffff]Z`; exact inverse of parse_timestamp.
inline std::string format_timestamp(Timestamp t) {
  std::int64_t secs = t.micros / 1'000'000;
  std::int64_t frac = t.micros % 1'000'000;
  if (frac < 0) {
    frac += 1'000'000;
    secs -= 1;
  }
  std::int64_t days = secs / 86400;
  std::int64_t rem = secs % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  const auto date = detail::civil_from_days(days);
  char buf[64];
  int n = std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                        static_cast<long long>(date.year), date.month, date.day,
                        static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                        static_cast<long long>(rem % 60));
  std::string out(buf, static_cast<std::size_t>(n));
  if (frac != 0) {
    if (frac % 1000 == 0) {
      std::snprintf(buf, sizeof buf, ".%03lld", static_cast<long long>(frac / 1000));
    } else {
      std::snprintf(buf, sizeof buf, ".%06lld", static_cast<long long>(frac));
    }
    out += buf;
  }
  out += 'Z';
  return out;
}

}  // namespace dynrel
