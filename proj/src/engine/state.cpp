#include "avarc/engine/state.hpp"

namespace avarc {
namespace {

template <class Map, class Key>
const typename Map::mapped_type &lookup(const Map &m, const Key &k,
                                        std::string_view what) {
  auto it = m.find(k);
  if (it == m.end())
    throw Error(Errc::not_found, std::string(what) + " " + k.value + " not found",
                Json{{"kind", what}, {"id", k.value}});
  return it->second;
}

template <class Map>
Json map_values(const Map &m) {
  Json out = Json::array();
  for (const auto &[id, v] : m)
    out.push_back(v);
  return out;
}

template <class T, class Map>
void load_values(const Json &j, const char *key, Map &m) {
  m.clear();
  for (const auto &item : j.at(key)) {
    auto v = item.get<T>();
    auto id = v.id;
    m.emplace(std::move(id), std::move(v));
  }
}

}  // namespace

const workspace::User &State::user(const UserId &id) const { return lookup(users, id, "user"); }
const archive::Event &State::event(const EventId &id) const { return lookup(events, id, "event"); }
const archive::MediaAsset &State::asset(const AssetId &id) const { return lookup(assets, id, "asset"); }
const archive::Segment &State::segment(const SegmentId &id) const { return lookup(segments, id, "segment"); }
const archive::Zone &State::zone(const ZoneId &id) const { return lookup(zones, id, "zone"); }
const ontology::ThemeOntology &State::ontology(const OntologyId &id) const { return lookup(ontologies, id, "ontology"); }
const congraph::ConceptualGraph &State::graph(const GraphId &id) const { return lookup(graphs, id, "graph"); }
const viewpoint::ViewpointSchema &State::schema(const SchemaId &id) const { return lookup(schemas, id, "schema"); }
const annotation::Annotation &State::annotation(const AnnotationId &id) const { return lookup(annotations, id, "annotation"); }
const annotation::Bookmark &State::bookmark(const BookmarkId &id) const { return lookup(bookmarks, id, "bookmark"); }
const workspace::Workspace &State::workspace(const WorkspaceId &id) const { return lookup(workspaces, id, "workspace"); }
const montage::NavigationPath &State::path(const PathId &id) const { return lookup(paths, id, "path"); }

Json state_to_json(const State &s) {
  return Json{{"id_counter", s.id_counter},
              {"users", map_values(s.users)},
              {"events", map_values(s.events)},
              {"assets", map_values(s.assets)},
              {"segments", map_values(s.segments)},
              {"zones", map_values(s.zones)},
              {"ontologies", map_values(s.ontologies)},
              {"graphs", map_values(s.graphs)},
              {"schemas", map_values(s.schemas)},
              {"annotations", map_values(s.annotations)},
              {"bookmarks", map_values(s.bookmarks)},
              {"workspaces", map_values(s.workspaces)},
              {"paths", map_values(s.paths)}};
}

State state_from_json(const Json &j) {
  State s;
  s.id_counter = j.at("id_counter").get<std::uint64_t>();
  load_values<workspace::User>(j, "users", s.users);
  load_values<archive::Event>(j, "events", s.events);
  load_values<archive::MediaAsset>(j, "assets", s.assets);
  load_values<archive::Segment>(j, "segments", s.segments);
  load_values<archive::Zone>(j, "zones", s.zones);
  load_values<ontology::ThemeOntology>(j, "ontologies", s.ontologies);
  load_values<congraph::ConceptualGraph>(j, "graphs", s.graphs);
  load_values<viewpoint::ViewpointSchema>(j, "schemas", s.schemas);
  load_values<annotation::Annotation>(j, "annotations", s.annotations);
  load_values<annotation::Bookmark>(j, "bookmarks", s.bookmarks);
  load_values<workspace::Workspace>(j, "workspaces", s.workspaces);
  load_values<montage::NavigationPath>(j, "paths", s.paths);
  return s;
}

SegmentId target_segment(const State &s, const annotation::Target &t) {
  if (const auto *seg = std::get_if<annotation::SegmentTarget>(&t))
    return seg->segment;
  if (const auto *part = std::get_if<annotation::PartTarget>(&t))
    return part->segment;
  return s.zone(std::get<annotation::ZoneTarget>(t).zone).segment;
}

Ownership ownership(const State &s, const workspace::ResourceRef &ref) {
  using workspace::ResourceKind;
  switch (ref.kind) {
    case ResourceKind::ontology: {
      const auto &o = s.ontology(OntologyId(ref.id));
      return {o.owner, o.visibility};
    }
    case ResourceKind::schema: {
      const auto &v = s.schema(SchemaId(ref.id));
      return {v.owner, v.visibility};
    }
    case ResourceKind::graph: {
      const auto &g = s.graph(GraphId(ref.id));
      return {g.owner, g.visibility};
    }
    case ResourceKind::segment: {
      const auto &g = s.segment(SegmentId(ref.id));
      return {g.owner, g.visibility};
    }
    case ResourceKind::bookmark: {
      const auto &b = s.bookmark(BookmarkId(ref.id));
      return {b.owner, b.visibility};
    }
    case ResourceKind::path: {
      const auto &p = s.path(PathId(ref.id));
      return {p.owner, p.visibility};
    }
    case ResourceKind::annotation: {
      const auto &a = s.annotation(AnnotationId(ref.id));
      return {a.author, a.visibility};
    }
  }
  throw Error(Errc::internal, "unhandled resource kind");
}

bool can_view(const State &s, const UserId &user,
              const workspace::ResourceRef &ref) {
  auto own = ownership(s, ref);
  return workspace::can_view(user, own.owner, own.visibility, ref, s.workspaces);
}

void require_view(const State &s, const UserId &user,
                  const workspace::ResourceRef &ref) {
  if (!can_view(s, user, ref))
    throw Error(Errc::access_denied,
                std::string(workspace::to_string(ref.kind)) + " " + ref.id +
                    " is not visible to " + user.value,
                Json{{"kind", workspace::to_string(ref.kind)}, {"id", ref.id}});
}

bool annotation_visible(const State &s, const UserId &user,
                        const annotation::Annotation &a) {
  using workspace::ResourceKind;
  if (a.retracted)
    return false;
  if (!can_view(s, user, {ResourceKind::annotation, a.id.value}))
    return false;
  if (!can_view(s, user, {ResourceKind::segment, target_segment(s, a.target).value}))
    return false;
  if (const auto *g = std::get_if<annotation::GraphBody>(&a.body))
    return can_view(s, user, {ResourceKind::graph, g->graph.value});
  if (const auto *t = std::get_if<annotation::ThemeBody>(&a.body))
    return can_view(s, user, {ResourceKind::ontology, t->ontology.value});
  if (const auto *v = std::get_if<annotation::ViewpointBody>(&a.body))
    return can_view(s, user, {ResourceKind::schema, v->instance.schema.value});
  return true;
}

std::vector<Violation> check_invariants(const State &s) {
  std::vector<Violation> out;
  auto add = [&out](std::string code, std::string msg) {
    out.push_back({std::move(code), std::move(msg)});
  };
  auto check_user = [&](const UserId &u, const std::string &where) {
    if (!s.users.contains(u))
      add("ref.user", where + " names unknown user " + u.value);
  };
  auto check_vis = [&](const Visibility &v, const std::string &where) {
    if (v.level == Visibility::Level::Group && !s.workspaces.contains(v.workspace))
      add("ref.workspace", where + " is shared with unknown workspace " +
                               v.workspace.value);
  };

  for (const auto &[id, e] : s.events) {
    std::set<std::string_view> names;
    for (const auto &[name, value] : e.metadata.entries)
      if (name.empty() || !names.insert(name).second)
        add("event.metadata", "event " + id.value + " has an empty or repeated field");
    for (const auto &a : e.asset_ids) {
      auto it = s.assets.find(a);
      if (it == s.assets.end() || it->second.event != id)
        add("ref.asset", "event " + id.value + " lists foreign or missing asset " + a.value);
    }
  }
  for (const auto &[id, a] : s.assets) {
    if (!s.events.contains(a.event))
      add("ref.event", "asset " + id.value + " belongs to missing event");
    if (a.uri.empty() || a.duration_ms < 0)
      add("asset.invalid", "asset " + id.value + " has empty uri or negative duration");
  }
  for (const auto &[id, seg] : s.segments) {
    auto it = s.assets.find(seg.asset);
    if (it == s.assets.end()) {
      add("ref.asset", "segment " + id.value + " names missing asset");
    } else {
      const auto dur = it->second.duration_ms;
      if (seg.start_ms < 0 || seg.start_ms >= seg.end_ms ||
          (dur > 0 && seg.end_ms > dur))
        add("segment.interval", "segment " + id.value + " violates its interval bounds");
    }
    check_user(seg.owner, "segment " + id.value);
    check_vis(seg.visibility, "segment " + id.value);
  }
  for (const auto &[id, z] : s.zones) {
    auto it = s.segments.find(z.segment);
    if (it == s.segments.end()) {
      add("ref.segment", "zone " + id.value + " names missing segment");
      continue;
    }
    try {
      archive::check_zone(it->second, z.at_ms, z.rect);
    } catch (const Error &e) {
      add("zone.invalid", "zone " + id.value + ": " + e.what());
    }
  }
  for (const auto &[id, o] : s.ontologies) {
    for (const auto &v : ontology::validate_ontology(o))
      add("ontology." + v.code, "ontology " + id.value + ": " + v.message);
    check_user(o.owner, "ontology " + id.value);
    check_vis(o.visibility, "ontology " + id.value);
  }
  for (const auto &[id, g] : s.graphs) {
    auto it = s.ontologies.find(g.ontology);
    if (it == s.ontologies.end()) {
      add("ref.ontology", "graph " + id.value + " names missing ontology");
      continue;
    }
    for (const auto &v : congraph::validate_graph(g, it->second))
      add("graph." + v.code, "graph " + id.value + ": " + v.message);
    check_user(g.owner, "graph " + id.value);
    check_vis(g.visibility, "graph " + id.value);
  }
  for (const auto &[id, v] : s.schemas) {
    try {
      viewpoint::check_features(v.features);
    } catch (const Error &e) {
      add("schema.invalid", "schema " + id.value + ": " + e.what());
    }
    if (v.previous && !s.schemas.contains(*v.previous))
      add("ref.schema", "schema " + id.value + " revises a missing schema");
    check_user(v.owner, "schema " + id.value);
    check_vis(v.visibility, "schema " + id.value);
  }
  for (const auto &[id, a] : s.annotations) {
    const std::string where = "annotation " + id.value;
    check_user(a.author, where);
    check_vis(a.visibility, where);
    SegmentId seg_id;
    if (const auto *z = std::get_if<annotation::ZoneTarget>(&a.target)) {
      auto zit = s.zones.find(z->zone);
      if (zit == s.zones.end()) {
        add("ref.zone", where + " targets a missing zone");
        continue;
      }
      seg_id = zit->second.segment;
    } else {
      seg_id = target_segment(s, a.target);
    }
    auto sit = s.segments.find(seg_id);
    if (sit == s.segments.end()) {
      add("ref.segment", where + " targets a missing segment");
      continue;
    }
    if (const auto *p = std::get_if<annotation::PartTarget>(&a.target)) {
      if (p->from_ms >= p->to_ms || p->from_ms < sit->second.start_ms ||
          p->to_ms > sit->second.end_ms)
        add("annotation.part", where + " has a part outside its segment");
    }
    if (const auto *t = std::get_if<annotation::ThemeBody>(&a.body)) {
      auto oit = s.ontologies.find(t->ontology);
      if (oit == s.ontologies.end() || oit->second.theme(t->theme) == nullptr)
        add("ref.theme", where + " names a missing theme");
    } else if (const auto *g = std::get_if<annotation::GraphBody>(&a.body)) {
      if (!s.graphs.contains(g->graph))
        add("ref.graph", where + " names a missing graph");
    } else if (const auto *v = std::get_if<annotation::ViewpointBody>(&a.body)) {
      auto vit = s.schemas.find(v->instance.schema);
      if (vit == s.schemas.end())
        add("ref.schema", where + " names a missing schema");
      else if (!viewpoint::validate_instance(vit->second, v->instance.values).empty())
        add("annotation.viewpoint", where + " holds an invalid viewpoint instance");
    } else if (std::get<annotation::NoteBody>(a.body).text.empty()) {
      add("annotation.note", where + " has an empty note");
    }
  }
  for (const auto &[id, b] : s.bookmarks) {
    if (!s.events.contains(b.event))
      add("ref.event", "bookmark " + id.value + " names a missing event");
    check_user(b.owner, "bookmark " + id.value);
    check_vis(b.visibility, "bookmark " + id.value);
  }
  for (const auto &[id, w] : s.workspaces) {
    if (!w.members.contains(w.owner))
      add("workspace.owner", "workspace " + id.value + " does not list its owner");
    for (const auto &m : w.members)
      check_user(m, "workspace " + id.value);
    for (const auto &r : w.resources) {
      try {
        ownership(s, r);
      } catch (const Error &) {
        add("ref.resource", "workspace " + id.value + " lists missing " +
                                std::string(workspace::to_string(r.kind)) + " " + r.id);
      }
    }
  }
  for (const auto &[id, p] : s.paths) {
    for (const auto &n : p.nodes)
      if (!s.segments.contains(n.segment))
        add("ref.segment", "path " + id.value + " node " + n.id + " names a missing segment");
    for (const auto &t : p.transitions)
      if (p.node(t.from) == nullptr || p.node(t.to) == nullptr)
        add("path.transition", "path " + id.value + " has a dangling transition");
    if (!p.nodes.empty() && (!p.entry || p.node(*p.entry) == nullptr))
      add("path.entry", "path " + id.value + " has no valid entry");
    check_user(p.owner, "path " + id.value);
    check_vis(p.visibility, "path " + id.value);
  }
  return out;
}

}  // namespace avarc
