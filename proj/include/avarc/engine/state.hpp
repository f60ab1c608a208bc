#pragma once

#include <cstdint>
#include <map>
#include <string_view>

#include "avarc/annotation/annotation.hpp"
#include "avarc/archive/archive.hpp"
#include "avarc/congraph/graph.hpp"
#include "avarc/core/error.hpp"
#include "avarc/core/ids.hpp"
#include "avarc/core/json.hpp"
#include "avarc/montage/path.hpp"
#include "avarc/ontology/ontology.hpp"
#include "avarc/viewpoint/viewpoint.hpp"
#include "avarc/workspace/workspace.hpp"

namespace avarc {

/// Everything the engine knows, as plain values. A committed State is never
/// mutated; writers copy, apply and publish.
struct State {
  std::uint64_t id_counter = 0;
  std::map<UserId, workspace::User> users;
  std::map<EventId, archive::Event> events;
  std::map<AssetId, archive::MediaAsset> assets;
  std::map<SegmentId, archive::Segment> segments;
  std::map<ZoneId, archive::Zone> zones;
  std::map<OntologyId, ontology::ThemeOntology> ontologies;
  std::map<GraphId, congraph::ConceptualGraph> graphs;
  std::map<SchemaId, viewpoint::ViewpointSchema> schemas;
  std::map<AnnotationId, annotation::Annotation> annotations;
  std::map<BookmarkId, annotation::Bookmark> bookmarks;
  workspace::WorkspaceMap workspaces;
  std::map<PathId, montage::NavigationPath> paths;

  template <class IdT>
  IdT allocate(std::string_view prefix) {
    return IdT(format_id(prefix, ++id_counter));
  }

  const workspace::User &user(const UserId &id) const;
  const archive::Event &event(const EventId &id) const;
  const archive::MediaAsset &asset(const AssetId &id) const;
  const archive::Segment &segment(const SegmentId &id) const;
  const archive::Zone &zone(const ZoneId &id) const;
  const ontology::ThemeOntology &ontology(const OntologyId &id) const;
  const congraph::ConceptualGraph &graph(const GraphId &id) const;
  const viewpoint::ViewpointSchema &schema(const SchemaId &id) const;
  const annotation::Annotation &annotation(const AnnotationId &id) const;
  const annotation::Bookmark &bookmark(const BookmarkId &id) const;
  const workspace::Workspace &workspace(const WorkspaceId &id) const;
  const montage::NavigationPath &path(const PathId &id) const;
};

Json state_to_json(const State &s);
State state_from_json(const Json &j);

/// The segment an annotation target points into.
SegmentId target_segment(const State &s, const annotation::Target &t);

/// Owner and visibility of a shareable resource; throws not_found.
struct Ownership {
  UserId owner;
  Visibility visibility;
};
Ownership ownership(const State &s, const workspace::ResourceRef &ref);

bool can_view(const State &s, const UserId &user,
              const workspace::ResourceRef &ref);

/// Throws not_found for a missing resource and access_denied when hidden.
void require_view(const State &s, const UserId &user,
                  const workspace::ResourceRef &ref);

/// A live (non-retracted) annotation the user may see, on a segment the user
/// may see, whose graph/ontology/schema body the user may also see.
bool annotation_visible(const State &s, const UserId &user,
                        const annotation::Annotation &a);

/// Module invariants and referential integrity over the whole state.
std::vector<Violation> check_invariants(const State &s);

}  // namespace avarc
