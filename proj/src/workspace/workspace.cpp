#include "avarc/workspace/workspace.hpp"

#include <array>

#include "avarc/core/error.hpp"

namespace avarc::workspace {
namespace {

constexpr std::array<std::pair<ResourceKind, std::string_view>, 7> kKinds = {{
    {ResourceKind::ontology, "ontology"},
    {ResourceKind::schema, "schema"},
    {ResourceKind::graph, "graph"},
    {ResourceKind::segment, "segment"},
    {ResourceKind::bookmark, "bookmark"},
    {ResourceKind::path, "path"},
    {ResourceKind::annotation, "annotation"},
}};

}  // namespace

std::string_view to_string(ResourceKind k) {
  for (auto [kind, name] : kKinds)
    if (kind == k)
      return name;
  return "ontology";
}

ResourceKind parse_resource_kind(std::string_view text) {
  for (auto [kind, name] : kKinds)
    if (name == text)
      return kind;
  throw Error(Errc::validation, "unknown resource kind '" + std::string(text) + "'");
}

bool can_view(const UserId &user, const UserId &owner, const Visibility &vis,
              const ResourceRef &ref, const WorkspaceMap &workspaces) {
  switch (vis.level) {
    case Visibility::Level::Public:
      return true;
    case Visibility::Level::Private:
      return user == owner;
    case Visibility::Level::Group:
      break;
  }
  if (user == owner)
    return true;
  if (auto it = workspaces.find(vis.workspace);
      it != workspaces.end() && it->second.has_member(user))
    return true;
  for (const auto &[id, w] : workspaces)
    if (w.resources.contains(ref) && w.has_member(user))
      return true;
  return false;
}

Visibility shared_visibility(const Visibility &current, const WorkspaceId &w) {
  if (current.level == Visibility::Level::Private)
    return Visibility::group(w);
  return current;
}

void to_json(Json &j, const User &u) {
  j = Json{{"id", u.id}, {"display_name", u.display_name}, {"token_hash", u.token_hash}};
}

void from_json(const Json &j, User &u) {
  u.id = j.at("id").get<UserId>();
  u.display_name = j.value("display_name", std::string());
  u.token_hash = j.value("token_hash", std::string());
}

void to_json(Json &j, const ResourceRef &r) {
  j = Json{{"kind", to_string(r.kind)}, {"id", r.id}};
}

void from_json(const Json &j, ResourceRef &r) {
  r.kind = parse_resource_kind(j.at("kind").get<std::string>());
  r.id = j.at("id").get<std::string>();
}

void to_json(Json &j, const Workspace &w) {
  j = Json{{"id", w.id},
           {"name", w.name},
           {"owner", w.owner},
           {"members", w.members},
           {"resources", w.resources},
           {"created_at", format_timestamp(w.created_at)}};
}

void from_json(const Json &j, Workspace &w) {
  w.id = j.at("id").get<WorkspaceId>();
  w.name = j.at("name").get<std::string>();
  w.owner = j.at("owner").get<UserId>();
  w.members = j.at("members").get<std::set<UserId>>();
  w.resources = j.at("resources").get<std::set<ResourceRef>>();
  w.created_at = parse_timestamp(j.at("created_at").get<std::string>());
}

}  // namespace avarc::workspace
