#include "avarc/congraph/linear_form.hpp"
#include "avarc/engine/commands.hpp"
#include "avarc/ontology/templates.hpp"

namespace avarc::cmd {
namespace {

using workspace::ResourceKind;
using workspace::ResourceRef;

template <class Map>
typename Map::mapped_type &mutable_at(Map &m, const typename Map::key_type &id,
                                      std::string_view what) {
  auto it = m.find(id);
  if (it == m.end())
    throw Error(Errc::not_found, std::string(what) + " " + id.value + " not found",
                Json{{"kind", what}, {"id", id.value}});
  return it->second;
}

void require_user(const State &s, const UserId &u) {
  if (u.empty())
    throw Error(Errc::validation, "user id is required");
  s.user(u);
}

void require_owner(const UserId &actor, const UserId &owner, std::string_view what,
                   const std::string &id) {
  if (actor != owner)
    throw Error(Errc::permission_denied,
                actor.value + " does not own " + std::string(what) + " " + id,
                Json{{"kind", what}, {"id", id}});
}

// A group level must name an existing workspace the owner belongs to.
void check_visibility(const State &s, const UserId &owner, const Visibility &v) {
  if (v.level != Visibility::Level::Group)
    return;
  const auto &w = s.workspace(v.workspace);
  if (!w.has_member(owner))
    throw Error(Errc::permission_denied,
                owner.value + " is not a member of workspace " + w.id.value);
}

void require_name(const std::string &name, std::string_view what) {
  if (name.empty())
    throw Error(Errc::validation, std::string(what) + " name must not be empty");
}

Visibility &visibility_slot(State &s, const ResourceRef &ref) {
  switch (ref.kind) {
    case ResourceKind::ontology:
      return mutable_at(s.ontologies, OntologyId(ref.id), "ontology").visibility;
    case ResourceKind::schema:
      return mutable_at(s.schemas, SchemaId(ref.id), "schema").visibility;
    case ResourceKind::graph:
      return mutable_at(s.graphs, GraphId(ref.id), "graph").visibility;
    case ResourceKind::segment:
      return mutable_at(s.segments, SegmentId(ref.id), "segment").visibility;
    case ResourceKind::bookmark:
      return mutable_at(s.bookmarks, BookmarkId(ref.id), "bookmark").visibility;
    case ResourceKind::path:
      return mutable_at(s.paths, PathId(ref.id), "path").visibility;
    case ResourceKind::annotation:
      return mutable_at(s.annotations, AnnotationId(ref.id), "annotation").visibility;
  }
  throw Error(Errc::internal, "unhandled resource kind");
}

// Resolves the target, checks it against its segment and that the author
// can see that segment.
void check_target(const State &s, const UserId &author, const annotation::Target &t) {
  SegmentId seg_id = target_segment(s, t);
  const auto &seg = s.segment(seg_id);
  require_view(s, author, {ResourceKind::segment, seg_id.value});
  if (const auto *p = std::get_if<annotation::PartTarget>(&t))
    annotation::check_part(seg, p->from_ms, p->to_ms);
}

std::string insert_annotation(State &s, const annotation::Target &target,
                              annotation::Body body, const UserId &author,
                              const Visibility &vis, Timestamp at) {
  require_user(s, author);
  check_target(s, author, target);
  check_visibility(s, author, vis);
  annotation::Annotation a;
  a.id = s.allocate<AnnotationId>("ann");
  a.target = target;
  a.body = std::move(body);
  a.author = author;
  a.created_at = at;
  a.visibility = vis;
  auto id = a.id.value;
  s.annotations.emplace(a.id, std::move(a));
  return id;
}

ontology::ThemeOntology &owned_ontology(State &s, const OntologyId &id,
                                        const UserId &actor) {
  auto &o = mutable_at(s.ontologies, id, "ontology");
  require_owner(actor, o.owner, "ontology", id.value);
  return o;
}

montage::NavigationPath &owned_path(State &s, const PathId &id, const UserId &actor) {
  auto &p = mutable_at(s.paths, id, "path");
  require_owner(actor, p.owner, "path", id.value);
  return p;
}

std::string make_ontology(State &s, const std::string &name, const UserId &owner,
                          const Visibility &vis, Timestamp at) {
  require_user(s, owner);
  check_visibility(s, owner, vis);
  auto id = s.allocate<OntologyId>("ont");
  auto root = s.allocate<ThemeId>("thm");
  auto o = ontology::make_ontology(id, name, owner, root, at);
  o.visibility = vis;
  s.ontologies.emplace(id, std::move(o));
  return id.value;
}

std::string make_schema(State &s, const std::string &name,
                        std::vector<viewpoint::FeatureDef> features,
                        const UserId &owner, const Visibility &vis, Timestamp at) {
  require_user(s, owner);
  require_name(name, "schema");
  check_visibility(s, owner, vis);
  viewpoint::check_features(features);
  viewpoint::ViewpointSchema v;
  v.id = s.allocate<SchemaId>("sch");
  v.name = name;
  v.features = std::move(features);
  v.owner = owner;
  v.visibility = vis;
  v.created_at = at;
  auto id = v.id.value;
  s.schemas.emplace(v.id, std::move(v));
  return id;
}

struct Applier {
  State &s;

  std::string operator()(const AddUser &c) {
    if (!is_url_safe(c.id.value))
      throw Error(Errc::validation, "user id must be non-empty and URL-safe");
    if (s.users.contains(c.id))
      throw Error(Errc::duplicate_name, "user " + c.id.value + " already exists");
    s.users.emplace(c.id, workspace::User{c.id, c.display_name, c.token_hash});
    return c.id.value;
  }

  std::string operator()(const RegisterEvent &c) {
    archive::validate_metadata(c.metadata);
    archive::Event e;
    e.kind = archive::parse_event_kind(c.event_kind);
    e.id = s.allocate<EventId>("evt");
    e.metadata = c.metadata;
    e.created_at = c.at;
    auto id = e.id.value;
    s.events.emplace(e.id, std::move(e));
    return id;
  }

  std::string operator()(const AddAsset &c) {
    auto &e = mutable_at(s.events, c.event, "event");
    archive::check_asset(c.uri, c.duration_ms);
    archive::MediaAsset a{s.allocate<AssetId>("ast"), c.event, c.uri, c.duration_ms,
                          c.format_label};
    e.asset_ids.push_back(a.id);
    auto id = a.id.value;
    s.assets.emplace(a.id, std::move(a));
    return id;
  }

  std::string operator()(const CreateSegment &c) {
    require_user(s, c.owner);
    const auto &asset = s.asset(c.asset);
    archive::check_segment_interval(c.start_ms, c.end_ms, asset.duration_ms);
    check_visibility(s, c.owner, c.visibility);
    archive::Segment seg;
    seg.id = s.allocate<SegmentId>("seg");
    seg.asset = c.asset;
    seg.start_ms = c.start_ms;
    seg.end_ms = c.end_ms;
    seg.label = c.label;
    seg.owner = c.owner;
    seg.visibility = c.visibility;
    seg.created_at = c.at;
    auto id = seg.id.value;
    s.segments.emplace(seg.id, std::move(seg));
    return id;
  }

  std::string operator()(const CreateZone &c) {
    const auto &seg = s.segment(c.segment);
    require_owner(c.actor, seg.owner, "segment", seg.id.value);
    archive::check_zone(seg, c.at_ms, c.rect);
    archive::Zone z{s.allocate<ZoneId>("zon"), c.segment, c.at_ms, c.rect};
    auto id = z.id.value;
    s.zones.emplace(z.id, std::move(z));
    return id;
  }

  std::string operator()(const CreateOntology &c) {
    return make_ontology(s, c.name, c.owner, c.visibility, c.at);
  }

  std::string operator()(const AddTheme &c) {
    auto &o = owned_ontology(s, c.ontology, c.actor);
    ontology::Theme t;
    t.name = c.name;
    t.category = ontology::parse_theme_category(c.category);
    t.definition = c.definition;
    t.id = s.allocate<ThemeId>("thm");
    // naming the new theme as its own parent is a cycle, not a missing theme
    for (const auto &p : c.parents)
      t.parents.insert(p == c.name ? t.id : ontology::resolve_theme(o, p));
    auto id = t.id.value;
    ontology::add_theme(o, std::move(t));
    return id;
  }

  std::string operator()(const AddThemeParent &c) {
    auto &o = owned_ontology(s, c.ontology, c.actor);
    auto child = ontology::resolve_theme(o, c.child);
    ontology::add_parent(o, child, ontology::resolve_theme(o, c.parent));
    return child.value;
  }

  std::string operator()(const AddRelationType &c) {
    auto &o = owned_ontology(s, c.ontology, c.actor);
    ontology::RelationType r;
    r.name = c.name;
    r.category = ontology::parse_relation_category(c.category);
    r.definition = c.definition;
    r.domain = c.domain.empty() ? o.root : ontology::resolve_theme(o, c.domain);
    r.range = c.range.empty() ? o.root : ontology::resolve_theme(o, c.range);
    r.id = s.allocate<RelationTypeId>("rel");
    auto id = r.id.value;
    ontology::add_relation(o, std::move(r));
    return id;
  }

  std::string operator()(const LoadOntologyTemplate &c) {
    const auto &tpl = ontology::find_ontology_template(c.template_name);
    auto id = make_ontology(s, tpl.name, c.owner, Visibility::personal(), c.at);
    auto &o = s.ontologies.at(OntologyId(id));
    for (const auto &tt : tpl.themes) {
      ontology::Theme t;
      t.name = tt.name;
      t.category = tt.category;
      t.definition = tt.definition;
      for (const auto &p : tt.parents)
        t.parents.insert(ontology::resolve_theme(o, p));
      t.id = s.allocate<ThemeId>("thm");
      ontology::add_theme(o, std::move(t));
    }
    for (const auto &rt : tpl.relations) {
      ontology::RelationType r;
      r.name = rt.name;
      r.category = rt.category;
      r.definition = rt.definition;
      r.domain = rt.domain.empty() ? o.root : ontology::resolve_theme(o, rt.domain);
      r.range = rt.range.empty() ? o.root : ontology::resolve_theme(o, rt.range);
      r.id = s.allocate<RelationTypeId>("rel");
      ontology::add_relation(o, std::move(r));
    }
    return id;
  }

  std::string operator()(const CreateGraph &c) {
    require_user(s, c.owner);
    const auto &o = s.ontology(c.ontology);
    require_view(s, c.owner, {ResourceKind::ontology, c.ontology.value});
    check_visibility(s, c.owner, c.visibility);
    auto g = congraph::parse_graph(c.text, o);
    g.id = s.allocate<GraphId>("gph");
    g.ontology = c.ontology;
    g.name = c.name;
    g.free_text = c.free_text;
    g.owner = c.owner;
    g.visibility = c.visibility;
    g.created_at = c.at;
    auto id = g.id.value;
    s.graphs.emplace(g.id, std::move(g));
    return id;
  }

  std::string operator()(const DefineSchema &c) {
    return make_schema(s, c.name, c.features, c.owner, c.visibility, c.at);
  }

  std::string operator()(const ReviseSchema &c) {
    const auto prev = s.schema(c.schema);
    require_owner(c.actor, prev.owner, "schema", prev.id.value);
    viewpoint::check_features(c.features);
    auto next = prev;
    next.id = s.allocate<SchemaId>("sch");
    next.features = c.features;
    next.version = prev.version + 1;
    next.previous = prev.id;
    next.created_at = c.at;
    auto id = next.id.value;
    s.schemas.emplace(next.id, std::move(next));
    return id;
  }

  std::string operator()(const LoadSchemaTemplate &c) {
    const auto &tpl = viewpoint::find_schema_template(c.template_name);
    return make_schema(s, tpl.name, tpl.features, c.owner, Visibility::personal(), c.at);
  }

  std::string operator()(const AttachTheme &c) {
    const auto &o = s.ontology(c.ontology);
    require_user(s, c.author);
    require_view(s, c.author, {ResourceKind::ontology, c.ontology.value});
    auto theme = ontology::resolve_theme(o, c.theme);
    return insert_annotation(s, c.target, annotation::ThemeBody{c.ontology, theme},
                             c.author, c.visibility, c.at);
  }

  std::string operator()(const AttachGraph &c) {
    s.graph(c.graph);
    require_user(s, c.author);
    require_view(s, c.author, {ResourceKind::graph, c.graph.value});
    return insert_annotation(s, c.target, annotation::GraphBody{c.graph}, c.author,
                             c.visibility, c.at);
  }

  std::string operator()(const AttachViewpoint &c) {
    const auto &schema = s.schema(c.schema);
    require_user(s, c.author);
    require_view(s, c.author, {ResourceKind::schema, c.schema.value});
    auto values = viewpoint::values_from_json(c.values);
    auto violations = viewpoint::validate_instance(schema, values);
    if (!violations.empty())
      throw Error(Errc::validation, violations.front().message,
                  Json{{"violations", violations}});
    viewpoint::ViewpointInstance inst{c.schema, std::move(values), c.author, c.at};
    return insert_annotation(s, c.target, annotation::ViewpointBody{std::move(inst)},
                             c.author, c.visibility, c.at);
  }

  std::string operator()(const AttachNote &c) {
    if (c.text.empty())
      throw Error(Errc::validation, "note text must not be empty");
    return insert_annotation(s, c.target, annotation::NoteBody{c.text}, c.author,
                             c.visibility, c.at);
  }

  std::string operator()(const RetractAnnotation &c) {
    auto &a = mutable_at(s.annotations, c.annotation, "annotation");
    require_owner(c.actor, a.author, "annotation", a.id.value);
    a.retracted = true;
    return a.id.value;
  }

  std::string operator()(const AddBookmark &c) {
    require_user(s, c.owner);
    s.event(c.event);
    check_visibility(s, c.owner, c.visibility);
    annotation::Bookmark b{s.allocate<BookmarkId>("bkm"), c.event, c.note, c.owner,
                           c.visibility, c.at};
    auto id = b.id.value;
    s.bookmarks.emplace(b.id, std::move(b));
    return id;
  }

  std::string operator()(const CreateWorkspace &c) {
    require_user(s, c.owner);
    require_name(c.name, "workspace");
    workspace::Workspace w;
    w.id = s.allocate<WorkspaceId>("wsp");
    w.name = c.name;
    w.owner = c.owner;
    w.members = {c.owner};
    w.created_at = c.at;
    auto id = w.id.value;
    s.workspaces.emplace(w.id, std::move(w));
    return id;
  }

  std::string operator()(const AddMember &c) {
    auto &w = mutable_at(s.workspaces, c.workspace, "workspace");
    require_owner(c.actor, w.owner, "workspace", w.id.value);
    require_user(s, c.user);
    w.members.insert(c.user);
    return w.id.value;
  }

  std::string operator()(const ShareResource &c) {
    ResourceRef ref{workspace::parse_resource_kind(c.resource_kind), c.resource_id};
    auto own = ownership(s, ref);
    auto &w = mutable_at(s.workspaces, c.workspace, "workspace");
    require_owner(c.actor, own.owner, workspace::to_string(ref.kind), ref.id);
    if (!w.has_member(c.actor))
      throw Error(Errc::permission_denied,
                  c.actor.value + " is not a member of workspace " + w.id.value);
    w.resources.insert(ref);
    visibility_slot(s, ref) = workspace::shared_visibility(own.visibility, w.id);
    return w.id.value;
  }

  std::string operator()(const SetVisibility &c) {
    ResourceRef ref{workspace::parse_resource_kind(c.resource_kind), c.resource_id};
    auto own = ownership(s, ref);
    require_owner(c.actor, own.owner, workspace::to_string(ref.kind), ref.id);
    check_visibility(s, own.owner, c.visibility);
    visibility_slot(s, ref) = c.visibility;
    return ref.id;
  }

  std::string operator()(const CreatePath &c) {
    require_user(s, c.owner);
    require_name(c.name, "path");
    check_visibility(s, c.owner, c.visibility);
    montage::NavigationPath p;
    p.id = s.allocate<PathId>("pth");
    p.name = c.name;
    p.owner = c.owner;
    p.visibility = c.visibility;
    p.created_at = c.at;
    auto id = p.id.value;
    s.paths.emplace(p.id, std::move(p));
    return id;
  }

  std::string operator()(const AddPathNode &c) {
    auto &p = owned_path(s, c.path, c.actor);
    s.segment(c.segment);
    require_view(s, p.owner, {ResourceKind::segment, c.segment.value});
    return montage::add_node(p, c.node_id, c.segment, c.caption);
  }

  std::string operator()(const AddPathTransition &c) {
    auto &p = owned_path(s, c.path, c.actor);
    montage::add_transition(p, {c.from, c.to, c.label});
    return c.from;
  }

  std::string operator()(const SetPathEntry &c) {
    auto &p = owned_path(s, c.path, c.actor);
    montage::set_entry(p, c.node);
    return c.node;
  }
};

}  // namespace

std::string apply(State &s, const Command &c) {
  return std::visit(Applier{s}, c);
}

}  // namespace avarc::cmd
