#pragma once

#include <string>
#include <string_view>

namespace avarc {

/// Lower-cases ASCII and the Latin-1 letters of UTF-8 text (À-Þ -> à-þ),
/// leaving everything else untouched.
std::string fold_case(std::string_view s);

bool contains_folded(std::string_view haystack_folded,
                     std::string_view needle_folded);

std::string html_escape(std::string_view s);

std::string trim(std::string_view s);

}  // namespace avarc
