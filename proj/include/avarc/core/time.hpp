#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "avarc/core/json.hpp"

namespace avarc {

/// Media time in integer milliseconds.
using Millis = std::int64_t;

/// "HH:MM:SS.mmm"; hours widen past two digits when needed.
std::string format_timecode(Millis ms);

/// Accepts "HH:MM:SS.mmm", "HH:MM:SS", "MM:SS.mmm" or a bare integer of
/// milliseconds. Throws Error(validation) on anything else.
Millis parse_timecode(std::string_view text);

/// Wall-clock instant, UTC, millisecond resolution.
struct Timestamp {
  std::int64_t unix_ms = 0;
  auto operator<=>(const Timestamp &) const = default;
};

/// "YYYY-MM-DDTHH:MM:SS.mmmZ"
std::string format_timestamp(Timestamp t);
Timestamp parse_timestamp(std::string_view text);

void to_json(Json &j, const Timestamp &t);
void from_json(const Json &j, Timestamp &t);

using Clock = std::function<Timestamp()>;

Clock system_clock();

/// Deterministic clock for tests and replays: starts at `start` and advances
/// by `step_ms` on every call.
Clock stepping_clock(Timestamp start, std::int64_t step_ms = 1);

}  // namespace avarc
