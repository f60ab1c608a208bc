#include "avarc/core/ids.hpp"

#include <cstdio>

namespace avarc {

std::string format_id(std::string_view prefix, std::uint64_t counter) {
  char digits[24];
  std::snprintf(digits, sizeof digits, "%010llu",
                static_cast<unsigned long long>(counter));
  std::string out(prefix);
  out += '-';
  out += digits;
  return out;
}

bool is_url_safe(std::string_view s) {
  if (s.empty())
    return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok)
      return false;
  }
  return true;
}

}  // namespace avarc
