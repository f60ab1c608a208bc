#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "avarc/core/ids.hpp"
#include "avarc/core/json.hpp"
#include "avarc/core/time.hpp"
#include "avarc/core/visibility.hpp"

namespace avarc::workspace {

struct User {
  UserId id;
  std::string display_name;
  std::string token_hash;  // hex SHA-256 of the bearer token; may be empty
};

enum class ResourceKind { ontology, schema, graph, segment, bookmark, path, annotation };

std::string_view to_string(ResourceKind k);
ResourceKind parse_resource_kind(std::string_view text);

struct ResourceRef {
  ResourceKind kind = ResourceKind::ontology;
  std::string id;

  auto operator<=>(const ResourceRef &) const = default;
  bool operator==(const ResourceRef &) const = default;
};

struct Workspace {
  WorkspaceId id;
  std::string name;
  UserId owner;
  std::set<UserId> members;  // always contains owner
  std::set<ResourceRef> resources;
  Timestamp created_at;

  bool has_member(const UserId &u) const { return members.contains(u); }
};

using WorkspaceMap = std::map<WorkspaceId, Workspace>;

/// Who may see a resource:
///   public   -> everyone
///   group(w) -> the owner, members of w, and members of any workspace the
///               resource has been shared into
///   private  -> the owner only
bool can_view(const UserId &user, const UserId &owner, const Visibility &vis,
              const ResourceRef &ref, const WorkspaceMap &workspaces);

/// Visibility after sharing into `w`: private becomes group(w); group and
/// public are kept.
Visibility shared_visibility(const Visibility &current, const WorkspaceId &w);

void to_json(Json &j, const User &u);
void from_json(const Json &j, User &u);
void to_json(Json &j, const ResourceRef &r);
void from_json(const Json &j, ResourceRef &r);
void to_json(Json &j, const Workspace &w);
void from_json(const Json &j, Workspace &w);

}  // namespace avarc::workspace
