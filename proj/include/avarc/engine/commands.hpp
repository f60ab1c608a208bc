#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "avarc/annotation/annotation.hpp"
#include "avarc/archive/archive.hpp"
#include "avarc/core/ids.hpp"
#include "avarc/core/json.hpp"
#include "avarc/core/time.hpp"
#include "avarc/core/visibility.hpp"
#include "avarc/engine/state.hpp"
#include "avarc/viewpoint/viewpoint.hpp"

namespace avarc::cmd {

// Every state change is one of these. Commands are what the journal
// records: they carry caller-supplied timestamps, while identifiers are
// allocated deterministically from State::id_counter when applied.

struct AddUser {
  static constexpr std::string_view kind = "user.add";
  UserId id;
  std::string display_name;
  std::string token_hash;
};

struct RegisterEvent {
  static constexpr std::string_view kind = "event.register";
  std::string event_kind;
  archive::MetadataRecord metadata;
  Timestamp at;
};

struct AddAsset {
  static constexpr std::string_view kind = "asset.add";
  EventId event;
  std::string uri;
  Millis duration_ms = 0;
  std::string format_label;
};

struct CreateSegment {
  static constexpr std::string_view kind = "segment.create";
  AssetId asset;
  Millis start_ms = 0;
  Millis end_ms = 0;
  std::optional<std::string> label;
  UserId owner;
  Visibility visibility;
  Timestamp at;
};

struct CreateZone {
  static constexpr std::string_view kind = "zone.create";
  SegmentId segment;
  Millis at_ms = 0;
  archive::NormRect rect;
  UserId actor;
};

struct CreateOntology {
  static constexpr std::string_view kind = "ontology.create";
  std::string name;
  UserId owner;
  Visibility visibility;
  Timestamp at;
};

struct AddTheme {
  static constexpr std::string_view kind = "ontology.add_theme";
  OntologyId ontology;
  std::string name;
  std::string category = "notional";
  std::string definition;
  std::vector<std::string> parents;  // theme ids or names
  UserId actor;
};

struct AddThemeParent {
  static constexpr std::string_view kind = "ontology.add_parent";
  OntologyId ontology;
  std::string child;
  std::string parent;
  UserId actor;
};

struct AddRelationType {
  static constexpr std::string_view kind = "ontology.add_relation";
  OntologyId ontology;
  std::string name;
  std::string category = "classification";
  std::string definition;
  std::string domain;
  std::string range;
  UserId actor;
};

struct LoadOntologyTemplate {
  static constexpr std::string_view kind = "ontology.load_template";
  std::string template_name;
  UserId owner;
  Timestamp at;
};

struct CreateGraph {
  static constexpr std::string_view kind = "graph.create";
  OntologyId ontology;
  std::string text;  // linear form
  std::optional<std::string> name;
  std::optional<std::string> free_text;
  UserId owner;
  Visibility visibility;
  Timestamp at;
};

struct DefineSchema {
  static constexpr std::string_view kind = "schema.define";
  std::string name;
  std::vector<viewpoint::FeatureDef> features;
  UserId owner;
  Visibility visibility;
  Timestamp at;
};

struct ReviseSchema {
  static constexpr std::string_view kind = "schema.revise";
  SchemaId schema;
  std::vector<viewpoint::FeatureDef> features;
  UserId actor;
  Timestamp at;
};

struct LoadSchemaTemplate {
  static constexpr std::string_view kind = "schema.load_template";
  std::string template_name;
  UserId owner;
  Timestamp at;
};

struct AttachTheme {
  static constexpr std::string_view kind = "annotation.theme";
  annotation::Target target;
  OntologyId ontology;
  std::string theme;  // id or name
  UserId author;
  Visibility visibility;
  Timestamp at;
};

struct AttachGraph {
  static constexpr std::string_view kind = "annotation.graph";
  annotation::Target target;
  GraphId graph;
  UserId author;
  Visibility visibility;
  Timestamp at;
};

struct AttachViewpoint {
  static constexpr std::string_view kind = "annotation.viewpoint";
  annotation::Target target;
  SchemaId schema;
  Json values = Json::object();
  UserId author;
  Visibility visibility;
  Timestamp at;
};

struct AttachNote {
  static constexpr std::string_view kind = "annotation.note";
  annotation::Target target;
  std::string text;
  UserId author;
  Visibility visibility;
  Timestamp at;
};

struct RetractAnnotation {
  static constexpr std::string_view kind = "annotation.retract";
  AnnotationId annotation;
  UserId actor;
};

struct AddBookmark {
  static constexpr std::string_view kind = "bookmark.add";
  EventId event;
  std::string note;
  UserId owner;
  Visibility visibility;
  Timestamp at;
};

struct CreateWorkspace {
  static constexpr std::string_view kind = "workspace.create";
  std::string name;
  UserId owner;
  Timestamp at;
};

struct AddMember {
  static constexpr std::string_view kind = "workspace.add_member";
  WorkspaceId workspace;
  UserId user;
  UserId actor;
};

struct ShareResource {
  static constexpr std::string_view kind = "workspace.share";
  WorkspaceId workspace;
  std::string resource_kind;
  std::string resource_id;
  UserId actor;
};

struct SetVisibility {
  static constexpr std::string_view kind = "visibility.set";
  std::string resource_kind;
  std::string resource_id;
  Visibility visibility;
  UserId actor;
};

struct CreatePath {
  static constexpr std::string_view kind = "path.create";
  std::string name;
  UserId owner;
  Visibility visibility;
  Timestamp at;
};

struct AddPathNode {
  static constexpr std::string_view kind = "path.add_node";
  PathId path;
  std::string node_id;  // empty: allocate n<k>
  SegmentId segment;
  std::string caption;
  UserId actor;
};

struct AddPathTransition {
  static constexpr std::string_view kind = "path.add_transition";
  PathId path;
  std::string from;
  std::string to;
  std::string label;
  UserId actor;
};

struct SetPathEntry {
  static constexpr std::string_view kind = "path.set_entry";
  PathId path;
  std::string node;
  UserId actor;
};

using Command =
    std::variant<AddUser, RegisterEvent, AddAsset, CreateSegment, CreateZone,
                 CreateOntology, AddTheme, AddThemeParent, AddRelationType,
                 LoadOntologyTemplate, CreateGraph, DefineSchema, ReviseSchema,
                 LoadSchemaTemplate, AttachTheme, AttachGraph, AttachViewpoint,
                 AttachNote, RetractAnnotation, AddBookmark, CreateWorkspace,
                 AddMember, ShareResource, SetVisibility, CreatePath,
                 AddPathNode, AddPathTransition, SetPathEntry>;

std::string_view kind_of(const Command &c);
Json payload_of(const Command &c);
Command command_from(std::string_view kind, const Json &payload);
std::vector<std::string_view> all_kinds();

/// Validates `c` against `s` and applies it in place. Returns the id of the
/// created object (or node id / empty). On error `s` may be partially
/// modified; callers apply to a scratch copy.
std::string apply(State &s, const Command &c);

}  // namespace avarc::cmd
