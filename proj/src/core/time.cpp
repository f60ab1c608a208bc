#include "avarc/core/time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <memory>
#include <vector>

#include "avarc/core/error.hpp"

namespace avarc {
namespace {

bool parse_uint(std::string_view s, std::int64_t &out) {
  if (s.empty())
    return false;
  for (char c : s)
    if (c < '0' || c > '9')
      return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void bad_timecode(std::string_view text) {
  throw Error(Errc::validation,
              "invalid timecode '" + std::string(text) +
                  "' (expected HH:MM:SS.mmm or integer milliseconds)");
}

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t &y, unsigned &m,
                     unsigned &d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

}  // namespace

std::string format_timecode(Millis ms) {
  if (ms < 0)
    throw Error(Errc::validation, "negative timecode");
  const auto h = ms / 3'600'000;
  const auto m = (ms / 60'000) % 60;
  const auto s = (ms / 1000) % 60;
  const auto milli = ms % 1000;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld.%03lld",
                static_cast<long long>(h), static_cast<long long>(m),
                static_cast<long long>(s), static_cast<long long>(milli));
  return buf;
}

Millis parse_timecode(std::string_view text) {
  std::int64_t value = 0;
  if (parse_uint(text, value))
    return value;

  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ':') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() < 2 || parts.size() > 3)
    bad_timecode(text);

  std::string_view last = parts.back();
  std::int64_t millis = 0;
  if (auto dot = last.find('.'); dot != std::string_view::npos) {
    auto frac = last.substr(dot + 1);
    if (frac.size() != 3 || !parse_uint(frac, millis))
      bad_timecode(text);
    last = last.substr(0, dot);
  }
  std::int64_t seconds = 0, minutes = 0, hours = 0;
  if (last.size() != 2 || !parse_uint(last, seconds) || seconds >= 60)
    bad_timecode(text);
  auto minute_part = parts[parts.size() - 2];
  if (minute_part.size() != 2 || !parse_uint(minute_part, minutes) ||
      minutes >= 60)
    bad_timecode(text);
  if (parts.size() == 3 && (parts[0].size() < 2 || !parse_uint(parts[0], hours)))
    bad_timecode(text);
  return ((hours * 60 + minutes) * 60 + seconds) * 1000 + millis;
}

std::string format_timestamp(Timestamp t) {
  std::int64_t days = t.unix_ms / 86'400'000;
  std::int64_t rem = t.unix_ms % 86'400'000;
  if (rem < 0) {
    rem += 86'400'000;
    --days;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ",
                static_cast<long long>(y), m, d,
                static_cast<long long>(rem / 3'600'000),
                static_cast<long long>((rem / 60'000) % 60),
                static_cast<long long>((rem / 1000) % 60),
                static_cast<long long>(rem % 1000));
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS.mmmZ
  if (text.size() != 24 || text[4] != '-' || text[7] != '-' ||
      text[10] != 'T' || text[13] != ':' || text[16] != ':' ||
      text[19] != '.' || text[23] != 'Z')
    throw Error(Errc::validation,
                "invalid timestamp '" + std::string(text) + "'");
  std::int64_t y, mo, d, h, mi, s, ms;
  if (!parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), mo) ||
      !parse_uint(text.substr(8, 2), d) || !parse_uint(text.substr(11, 2), h) ||
      !parse_uint(text.substr(14, 2), mi) ||
      !parse_uint(text.substr(17, 2), s) || !parse_uint(text.substr(20, 3), ms))
    throw Error(Errc::validation,
                "invalid timestamp '" + std::string(text) + "'");
  const auto days = days_from_civil(y, static_cast<unsigned>(mo),
                                    static_cast<unsigned>(d));
  return Timestamp{days * 86'400'000 + ((h * 60 + mi) * 60 + s) * 1000 + ms};
}

void to_json(Json &j, const Timestamp &t) {
  j = format_timestamp(t);
}

void from_json(const Json &j, Timestamp &t) {
  t = parse_timestamp(j.get<std::string>());
}

Clock system_clock() {
  return [] {
    using namespace std::chrono;
    return Timestamp{
        duration_cast<milliseconds>(system_clock::now().time_since_epoch())
            .count()};
  };
}

Clock stepping_clock(Timestamp start, std::int64_t step_ms) {
  auto next = std::make_shared<std::int64_t>(start.unix_ms);
  return [next, step_ms] {
    Timestamp t{*next};
    *next += step_ms;
    return t;
  };
}

}  // namespace avarc
