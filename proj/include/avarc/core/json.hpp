#pragma once

#include <optional>

#include <json.hpp>

namespace avarc {

// Insertion-ordered so that every document we emit has a fixed key order.
using Json = nlohmann::ordered_json;

}  // namespace avarc

NLOHMANN_JSON_NAMESPACE_BEGIN
template <typename T>
struct adl_serializer<std::optional<T>> {
  template <typename BasicJsonType>
  static void to_json(BasicJsonType &j, const std::optional<T> &v) {
    if (v)
      j = *v;
    else
      j = nullptr;
  }

  template <typename BasicJsonType>
  static void from_json(const BasicJsonType &j, std::optional<T> &v) {
    if (j.is_null())
      v.reset();
    else
      v = j.template get<T>();
  }
};
NLOHMANN_JSON_NAMESPACE_END
