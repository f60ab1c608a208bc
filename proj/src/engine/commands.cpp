#include "avarc/engine/commands.hpp"

#include <array>

namespace avarc::cmd {

// Field-wise codec over avarc::Json; absent fields keep their defaults.
#define AVARC_COMMAND_JSON(Type, ...)                                          \
  void to_json(Json &nlohmann_json_j, const Type &nlohmann_json_t) {           \
    NLOHMANN_JSON_EXPAND(NLOHMANN_JSON_PASTE(NLOHMANN_JSON_TO, __VA_ARGS__))   \
  }                                                                            \
  void from_json(const Json &nlohmann_json_j, Type &nlohmann_json_t) {         \
    const Type nlohmann_json_default_obj{};                                    \
    NLOHMANN_JSON_EXPAND(                                                      \
        NLOHMANN_JSON_PASTE(NLOHMANN_JSON_FROM_WITH_DEFAULT, __VA_ARGS__))     \
  }

AVARC_COMMAND_JSON(AddUser, id, display_name, token_hash)
AVARC_COMMAND_JSON(RegisterEvent, event_kind, metadata, at)
AVARC_COMMAND_JSON(AddAsset, event, uri, duration_ms, format_label)
AVARC_COMMAND_JSON(CreateSegment, asset, start_ms, end_ms, label, owner, visibility, at)
AVARC_COMMAND_JSON(CreateZone, segment, at_ms, rect, actor)
AVARC_COMMAND_JSON(CreateOntology, name, owner, visibility, at)
AVARC_COMMAND_JSON(AddTheme, ontology, name, category, definition, parents, actor)
AVARC_COMMAND_JSON(AddThemeParent, ontology, child, parent, actor)
AVARC_COMMAND_JSON(AddRelationType, ontology, name, category, definition, domain, range, actor)
AVARC_COMMAND_JSON(LoadOntologyTemplate, template_name, owner, at)
AVARC_COMMAND_JSON(CreateGraph, ontology, text, name, free_text, owner, visibility, at)
AVARC_COMMAND_JSON(DefineSchema, name, features, owner, visibility, at)
AVARC_COMMAND_JSON(ReviseSchema, schema, features, actor, at)
AVARC_COMMAND_JSON(LoadSchemaTemplate, template_name, owner, at)
AVARC_COMMAND_JSON(AttachTheme, target, ontology, theme, author, visibility, at)
AVARC_COMMAND_JSON(AttachGraph, target, graph, author, visibility, at)
AVARC_COMMAND_JSON(AttachViewpoint, target, schema, values, author, visibility, at)
AVARC_COMMAND_JSON(AttachNote, target, text, author, visibility, at)
AVARC_COMMAND_JSON(RetractAnnotation, annotation, actor)
AVARC_COMMAND_JSON(AddBookmark, event, note, owner, visibility, at)
AVARC_COMMAND_JSON(CreateWorkspace, name, owner, at)
AVARC_COMMAND_JSON(AddMember, workspace, user, actor)
AVARC_COMMAND_JSON(ShareResource, workspace, resource_kind, resource_id, actor)
AVARC_COMMAND_JSON(SetVisibility, resource_kind, resource_id, visibility, actor)
AVARC_COMMAND_JSON(CreatePath, name, owner, visibility, at)
AVARC_COMMAND_JSON(AddPathNode, path, node_id, segment, caption, actor)
AVARC_COMMAND_JSON(AddPathTransition, path, from, to, label, actor)
AVARC_COMMAND_JSON(SetPathEntry, path, node, actor)

namespace {

template <std::size_t I = 0>
Command decode(std::string_view kind, const Json &payload) {
  if constexpr (I == std::variant_size_v<Command>) {
    throw Error(Errc::corrupt, "unknown command kind '" + std::string(kind) + "'");
  } else {
    using C = std::variant_alternative_t<I, Command>;
    if (C::kind == kind)
      return payload.get<C>();
    return decode<I + 1>(kind, payload);
  }
}

template <std::size_t... I>
std::vector<std::string_view> kinds(std::index_sequence<I...>) {
  return {std::variant_alternative_t<I, Command>::kind...};
}

}  // namespace

std::string_view kind_of(const Command &c) {
  return std::visit([](const auto &v) { return std::decay_t<decltype(v)>::kind; }, c);
}

Json payload_of(const Command &c) {
  return std::visit([](const auto &v) { return Json(v); }, c);
}

Command command_from(std::string_view kind, const Json &payload) {
  try {
    return decode(kind, payload);
  } catch (const nlohmann::json::exception &e) {
    throw Error(Errc::validation, "malformed '" + std::string(kind) +
                                      "' payload: " + e.what());
  }
}

std::vector<std::string_view> all_kinds() {
  return kinds(std::make_index_sequence<std::variant_size_v<Command>>());
}

}  // namespace avarc::cmd
