#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "avarc/core/json.hpp"

namespace avarc {

/// String identifier tagged with the kind of object it names. Engine-issued
/// ids look like `evt-0000000042`: URL-safe and lexicographically ordered by
/// creation.
template <class Tag>
struct Id {
  std::string value;

  Id() = default;
  explicit Id(std::string v) : value(std::move(v)) { }

  bool empty() const noexcept { return value.empty(); }
  const std::string &str() const noexcept { return value; }

  auto operator<=>(const Id &) const = default;
  bool operator==(const Id &) const = default;
};

template <class Tag>
void to_json(Json &j, const Id<Tag> &id) {
  j = id.value;
}

template <class Tag>
void from_json(const Json &j, Id<Tag> &id) {
  id.value = j.get<std::string>();
}

using UserId = Id<struct UserTag>;
using EventId = Id<struct EventTag>;
using AssetId = Id<struct AssetTag>;
using SegmentId = Id<struct SegmentTag>;
using ZoneId = Id<struct ZoneTag>;
using OntologyId = Id<struct OntologyTag>;
using ThemeId = Id<struct ThemeTag>;
using RelationTypeId = Id<struct RelationTypeTag>;
using GraphId = Id<struct GraphTag>;
using SchemaId = Id<struct SchemaTag>;
using AnnotationId = Id<struct AnnotationTag>;
using BookmarkId = Id<struct BookmarkTag>;
using WorkspaceId = Id<struct WorkspaceTag>;
using PathId = Id<struct PathTag>;

/// Formats `prefix-NNNNNNNNNN` from a creation counter.
std::string format_id(std::string_view prefix, std::uint64_t counter);

/// True for identifiers made only of [A-Za-z0-9_-], non-empty.
bool is_url_safe(std::string_view s);

}  // namespace avarc

template <class Tag>
struct std::hash<avarc::Id<Tag>> {
  std::size_t operator()(const avarc::Id<Tag> &id) const noexcept {
    return std::hash<std::string>{}(id.value);
  }
};
