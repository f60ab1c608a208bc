#include "avarc/service/api.hpp"

#include <functional>
#include <vector>

#include "avarc/congraph/linear_form.hpp"
#include "avarc/congraph/projection.hpp"
#include "avarc/core/digest.hpp"
#include "avarc/engine/compile.hpp"
#include "avarc/engine/queries.hpp"

namespace avarc::service {
namespace {

using workspace::ResourceKind;
using Params = std::vector<std::string>;

struct Ctx {
  Engine &engine;
  const Request &req;
  UserId user;
  std::shared_ptr<const Snapshot> snap;
  Json body;

  const State &state() const { return snap->state; }

  std::optional<std::string> query(const std::string &key) const {
    auto it = req.query.find(key);
    if (it == req.query.end())
      return std::nullopt;
    return it->second;
  }
  std::string required_query(const std::string &key) const {
    auto v = query(key);
    if (!v || v->empty())
      throw Error(Errc::validation, "query parameter '" + key + "' is required");
    return *v;
  }

  bool has(const char *key) const { return body.contains(key) && !body[key].is_null(); }
  std::string str(const char *key) const {
    if (!has(key) || !body[key].is_string())
      throw Error(Errc::validation, std::string("field '") + key + "' must be a string");
    return body[key].get<std::string>();
  }
  std::string str_or(const char *key, std::string fallback) const {
    return has(key) ? str(key) : fallback;
  }
  std::optional<std::string> opt_str(const char *key) const {
    if (!has(key))
      return std::nullopt;
    return str(key);
  }
  Millis millis(const char *key) const {
    if (!has(key))
      throw Error(Errc::validation, std::string("field '") + key + "' is required");
    const auto &v = body[key];
    if (v.is_number_integer())
      return v.get<Millis>();
    if (v.is_string())
      return parse_timecode(v.get<std::string>());
    throw Error(Errc::validation,
                std::string("field '") + key + "' must be milliseconds or a timecode");
  }
  // Accepts `<name>_ms` as an integer or `<name>` as integer/timecode.
  Millis time(const std::string &name) const {
    auto ms = name + "_ms";
    if (has(ms.c_str()))
      return millis(ms.c_str());
    return millis(name.c_str());
  }
  Visibility visibility() const {
    return parse_visibility(str_or("visibility", "private"));
  }
  template <class T>
  T get(const char *key) const {
    if (!has(key))
      throw Error(Errc::validation, std::string("field '") + key + "' is required");
    try {
      return body[key].get<T>();
    } catch (const nlohmann::json::exception &e) {
      throw Error(Errc::validation, std::string("field '") + key + "': " + e.what());
    }
  }

  std::string commit(const cmd::Command &c) { return engine.commit(c); }
  void refresh() { snap = engine.snapshot(); }
};

using Handler = std::function<Response(Ctx &, const Params &)>;

struct Route {
  std::string method;
  std::vector<std::string> pattern;  // "{}" matches one segment
  Handler handler;
};

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos)
      next = path.size();
    if (next > pos)
      out.emplace_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

Response ok(Json body) { return {200, std::move(body)}; }
Response created(Json body) { return {201, std::move(body)}; }

template <class T>
Json to_array(const std::vector<T> &items) {
  Json out = Json::array();
  for (const auto &i : items)
    out.push_back(i);
  return out;
}

Json graph_json(const State &s, const congraph::ConceptualGraph &g) {
  Json j = g;
  j["linear"] = congraph::print_graph(g, s.ontology(g.ontology));
  return j;
}

Json resource_json(const State &s, ResourceKind kind, const std::string &id) {
  switch (kind) {
    case ResourceKind::ontology: return s.ontology(OntologyId(id));
    case ResourceKind::schema: return s.schema(SchemaId(id));
    case ResourceKind::graph: return graph_json(s, s.graph(GraphId(id)));
    case ResourceKind::segment: return s.segment(SegmentId(id));
    case ResourceKind::bookmark: return s.bookmark(BookmarkId(id));
    case ResourceKind::path: return s.path(PathId(id));
    case ResourceKind::annotation: return s.annotation(AnnotationId(id));
  }
  return nullptr;
}

// Create and return the stored document.
Response create(Ctx &ctx, const cmd::Command &c, ResourceKind kind) {
  auto id = ctx.commit(c);
  ctx.refresh();
  return created(resource_json(ctx.state(), kind, id));
}

Response list_visible(Ctx &ctx, ResourceKind kind) {
  Json out = Json::array();
  for (const auto &ref : visible_resources(ctx.state(), kind, ctx.user))
    out.push_back(resource_json(ctx.state(), kind, ref.id));
  return ok(out);
}

Response get_visible(Ctx &ctx, ResourceKind kind, const std::string &id) {
  require_view(ctx.state(), ctx.user, {kind, id});
  if (kind == ResourceKind::annotation &&
      !annotation_visible(ctx.state(), ctx.user, ctx.state().annotation(AnnotationId(id))))
    throw Error(Errc::access_denied, "annotation " + id + " is not visible");
  return ok(resource_json(ctx.state(), kind, id));
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes")
    return true;
  if (v == "false" || v == "0" || v == "no" || v.empty())
    return false;
  throw Error(Errc::validation, "expected a boolean, got '" + std::string(v) + "'");
}

congraph::ConceptualGraph parse_query(Ctx &ctx, const OntologyId &oid, const char *key) {
  const auto &o = ctx.state().ontology(oid);
  require_view(ctx.state(), ctx.user, {ResourceKind::ontology, oid.value});
  auto g = congraph::parse_graph(ctx.str(key), o);
  g.ontology = oid;
  return g;
}

std::vector<Route> build_routes() {
  std::vector<Route> r;
  auto add = [&r](std::string method, std::string path, Handler h) {
    r.push_back({std::move(method), split_path(path), std::move(h)});
  };

  add("GET", "/users/me", [](Ctx &c, const Params &) {
    Json j = c.state().user(c.user);
    j.erase("token_hash");
    return ok(j);
  });
  add("GET", "/stats", [](Ctx &c, const Params &) { return ok(archive_stats(c.state())); });

  // archive
  add("GET", "/events", [](Ctx &c, const Params &) {
    std::optional<archive::EventKind> kind;
    if (auto k = c.query("kind"); k && !k->empty())
      kind = archive::parse_event_kind(*k);
    return ok(to_array(list_events(c.state(), kind)));
  });
  add("GET", "/events/{}", [](Ctx &c, const Params &p) {
    return ok(c.state().event(EventId(p[0])));
  });
  add("POST", "/events", [](Ctx &c, const Params &) {
    cmd::RegisterEvent e;
    e.event_kind = c.str_or("kind", "other");
    if (c.has("metadata_text"))
      e.metadata = archive::parse_metadata_text(c.str("metadata_text"));
    else if (c.has("metadata"))
      e.metadata = c.get<archive::MetadataRecord>("metadata");
    e.at = c.engine.now();
    auto id = c.commit(e);
    c.refresh();
    return created(c.state().event(EventId(id)));
  });
  add("GET", "/assets", [](Ctx &c, const Params &) {
    Json out = Json::array();
    auto ev = c.query("event");
    for (const auto &[id, a] : c.state().assets)
      if (!ev || a.event.value == *ev)
        out.push_back(a);
    return ok(out);
  });
  add("GET", "/assets/{}", [](Ctx &c, const Params &p) {
    return ok(c.state().asset(AssetId(p[0])));
  });
  add("POST", "/assets", [](Ctx &c, const Params &) {
    cmd::AddAsset a{EventId(c.str("event_id")), c.str("uri"),
                    c.has("duration_ms") || c.has("duration") ? c.time("duration") : 0,
                    c.str_or("format_label", "")};
    auto id = c.commit(a);
    c.refresh();
    return created(c.state().asset(AssetId(id)));
  });
  add("GET", "/segments", [](Ctx &c, const Params &) {
    return list_visible(c, ResourceKind::segment);
  });
  add("GET", "/segments/{}", [](Ctx &c, const Params &p) {
    return get_visible(c, ResourceKind::segment, p[0]);
  });
  add("GET", "/segments/{}/annotations", [](Ctx &c, const Params &p) {
    require_view(c.state(), c.user, {ResourceKind::segment, p[0]});
    return ok(to_array(list_annotations(c.state(), SegmentId(p[0]), c.user)));
  });
  add("POST", "/segments", [](Ctx &c, const Params &) {
    cmd::CreateSegment s{AssetId(c.str("asset_id")), c.time("start"), c.time("end"),
                         c.opt_str("label"), c.user, c.visibility(), c.engine.now()};
    return create(c, s, ResourceKind::segment);
  });
  add("GET", "/zones", [](Ctx &c, const Params &) {
    Json out = Json::array();
    auto seg = c.query("segment");
    for (const auto &[id, z] : c.state().zones)
      if ((!seg || z.segment.value == *seg) &&
          can_view(c.state(), c.user, {ResourceKind::segment, z.segment.value}))
        out.push_back(z);
    return ok(out);
  });
  add("POST", "/zones", [](Ctx &c, const Params &) {
    cmd::CreateZone z{SegmentId(c.str("segment_id")), c.time("at"),
                      c.get<archive::NormRect>("rect"), c.user};
    auto id = c.commit(z);
    c.refresh();
    return created(c.state().zone(ZoneId(id)));
  });

  // ontology
  add("GET", "/ontologies", [](Ctx &c, const Params &) {
    return list_visible(c, ResourceKind::ontology);
  });
  add("GET", "/ontologies/{}", [](Ctx &c, const Params &p) {
    return get_visible(c, ResourceKind::ontology, p[0]);
  });
  add("POST", "/ontologies", [](Ctx &c, const Params &) {
    if (c.has("template"))
      return create(c, cmd::LoadOntologyTemplate{c.str("template"), c.user, c.engine.now()},
                    ResourceKind::ontology);
    return create(c, cmd::CreateOntology{c.str("name"), c.user, c.visibility(), c.engine.now()},
                  ResourceKind::ontology);
  });
  add("POST", "/ontologies/{}/themes", [](Ctx &c, const Params &p) {
    cmd::AddTheme t{OntologyId(p[0]), c.str("name"), c.str_or("category", "notional"),
                    c.str_or("definition", ""),
                    c.has("parents") ? c.get<std::vector<std::string>>("parents")
                                     : std::vector<std::string>{},
                    c.user};
    auto id = c.commit(t);
    c.refresh();
    return created(*c.state().ontology(OntologyId(p[0])).theme(ThemeId(id)));
  });
  add("POST", "/ontologies/{}/themes/{}/parents", [](Ctx &c, const Params &p) {
    c.commit(cmd::AddThemeParent{OntologyId(p[0]), p[1], c.str("parent"), c.user});
    c.refresh();
    const auto &o = c.state().ontology(OntologyId(p[0]));
    return ok(*o.theme(ontology::resolve_theme(o, p[1])));
  });
  add("POST", "/ontologies/{}/relations", [](Ctx &c, const Params &p) {
    cmd::AddRelationType r{OntologyId(p[0]), c.str("name"),
                           c.str_or("category", "classification"),
                           c.str_or("definition", ""), c.str_or("domain", ""),
                           c.str_or("range", ""), c.user};
    auto id = c.commit(r);
    c.refresh();
    return created(*c.state().ontology(OntologyId(p[0])).relation(RelationTypeId(id)));
  });
  add("GET", "/ontologies/{}/subsumes", [](Ctx &c, const Params &p) {
    require_view(c.state(), c.user, {ResourceKind::ontology, p[0]});
    const auto &o = c.state().ontology(OntologyId(p[0]));
    auto a = ontology::resolve_theme(o, c.required_query("ancestor"));
    auto d = ontology::resolve_theme(o, c.required_query("descendant"));
    return ok(Json{{"ancestor", a}, {"descendant", d}, {"subsumes", ontology::subsumes(o, a, d)}});
  });
  add("GET", "/ontologies/{}/descendants", [](Ctx &c, const Params &p) {
    require_view(c.state(), c.user, {ResourceKind::ontology, p[0]});
    const auto &o = c.state().ontology(OntologyId(p[0]));
    auto t = ontology::resolve_theme(o, c.required_query("theme"));
    Json ids = Json::array();
    for (const auto &d : ontology::descendants(o, t))
      ids.push_back(d);
    return ok(Json{{"theme", t}, {"descendants", ids}});
  });
  add("GET", "/ontologies/{}/validate", [](Ctx &c, const Params &p) {
    require_view(c.state(), c.user, {ResourceKind::ontology, p[0]});
    auto v = ontology::validate_ontology(c.state().ontology(OntologyId(p[0])));
    return ok(Json{{"valid", v.empty()}, {"violations", v}});
  });

  // conceptual graphs
  add("GET", "/graphs", [](Ctx &c, const Params &) { return list_visible(c, ResourceKind::graph); });
  add("GET", "/graphs/{}", [](Ctx &c, const Params &p) {
    return get_visible(c, ResourceKind::graph, p[0]);
  });
  add("POST", "/graphs", [](Ctx &c, const Params &) {
    cmd::CreateGraph g{OntologyId(c.str("ontology_id")), c.str("text"), c.opt_str("name"),
                       c.opt_str("free_text"), c.user, c.visibility(), c.engine.now()};
    return create(c, g, ResourceKind::graph);
  });
  add("POST", "/graphs/parse", [](Ctx &c, const Params &) {
    OntologyId oid(c.str("ontology_id"));
    auto g = parse_query(c, oid, "text");
    const auto &o = c.state().ontology(oid);
    return ok(Json{{"graph", g}, {"canonical", congraph::print_graph(g, o)}});
  });
  add("POST", "/graphs/project", [](Ctx &c, const Params &) {
    OntologyId oid(c.str("ontology_id"));
    auto query = parse_query(c, oid, "query");
    congraph::ConceptualGraph target;
    if (c.has("target_graph_id")) {
      GraphId gid(c.str("target_graph_id"));
      require_view(c.state(), c.user, {ResourceKind::graph, gid.value});
      target = c.state().graph(gid);
    } else {
      target = parse_query(c, oid, "target");
    }
    congraph::ProjectionOptions opts;
    if (c.has("budget"))
      opts.budget = c.get<std::uint64_t>("budget");
    auto mappings = congraph::project(query, target, c.state().ontology(oid), opts);
    Json out = Json::array();
    for (const auto &m : mappings)
      out.push_back(congraph::mapping_to_json(query, m));
    return ok(Json{{"count", mappings.size()}, {"mappings", out}});
  });

  // viewpoints
  add("GET", "/schemas", [](Ctx &c, const Params &) { return list_visible(c, ResourceKind::schema); });
  add("GET", "/schemas/{}", [](Ctx &c, const Params &p) {
    return get_visible(c, ResourceKind::schema, p[0]);
  });
  add("POST", "/schemas", [](Ctx &c, const Params &) {
    if (c.has("template"))
      return create(c, cmd::LoadSchemaTemplate{c.str("template"), c.user, c.engine.now()},
                    ResourceKind::schema);
    cmd::DefineSchema d{c.str("name"), c.get<std::vector<viewpoint::FeatureDef>>("features"),
                        c.user, c.visibility(), c.engine.now()};
    return create(c, d, ResourceKind::schema);
  });
  add("POST", "/schemas/{}/revisions", [](Ctx &c, const Params &p) {
    cmd::ReviseSchema r{SchemaId(p[0]), c.get<std::vector<viewpoint::FeatureDef>>("features"),
                        c.user, c.engine.now()};
    return create(c, r, ResourceKind::schema);
  });

  // annotations
  add("GET", "/annotations", [](Ctx &c, const Params &) {
    if (auto seg = c.query("segment")) {
      require_view(c.state(), c.user, {ResourceKind::segment, *seg});
      return ok(to_array(list_annotations(c.state(), SegmentId(*seg), c.user)));
    }
    return list_visible(c, ResourceKind::annotation);
  });
  add("GET", "/annotations/{}", [](Ctx &c, const Params &p) {
    return get_visible(c, ResourceKind::annotation, p[0]);
  });
  add("POST", "/annotations", [](Ctx &c, const Params &) {
    auto target = c.get<annotation::Target>("target");
    if (!c.has("body") || !c.body["body"].is_object())
      throw Error(Errc::validation, "field 'body' must be an object");
    const Json &b = c.body["body"];
    const auto kind = b.value("kind", std::string());
    const auto vis = c.visibility();
    const auto at = c.engine.now();
    auto field = [&b](const char *key) {
      if (!b.contains(key) || !b[key].is_string())
        throw Error(Errc::validation, std::string("body field '") + key + "' must be a string");
      return b[key].get<std::string>();
    };
    if (kind == "theme") {
      std::string theme = b.contains("theme_id") ? field("theme_id") : field("theme");
      return create(c, cmd::AttachTheme{target, OntologyId(field("ontology_id")), theme,
                                        c.user, vis, at},
                    ResourceKind::annotation);
    }
    if (kind == "graph")
      return create(c, cmd::AttachGraph{target, GraphId(field("graph_id")), c.user, vis, at},
                    ResourceKind::annotation);
    if (kind == "viewpoint")
      return create(c, cmd::AttachViewpoint{target, SchemaId(field("schema_id")),
                                            b.value("values", Json::object()), c.user, vis, at},
                    ResourceKind::annotation);
    if (kind == "note")
      return create(c, cmd::AttachNote{target, field("text"), c.user, vis, at},
                    ResourceKind::annotation);
    throw Error(Errc::validation, "unknown annotation body kind '" + kind + "'");
  });
  add("POST", "/annotations/{}/retract", [](Ctx &c, const Params &p) {
    c.commit(cmd::RetractAnnotation{AnnotationId(p[0]), c.user});
    c.refresh();
    return ok(c.state().annotation(AnnotationId(p[0])));
  });
  add("POST", "/visibility", [](Ctx &c, const Params &) {
    cmd::SetVisibility v{c.str("resource_kind"), c.str("resource_id"),
                         parse_visibility(c.str("visibility")), c.user};
    c.commit(v);
    c.refresh();
    return ok(resource_json(c.state(), workspace::parse_resource_kind(v.resource_kind),
                            v.resource_id));
  });

  // bookmarks
  add("GET", "/bookmarks", [](Ctx &c, const Params &) {
    return ok(to_array(list_bookmarks(c.state(), c.user)));
  });
  add("POST", "/bookmarks", [](Ctx &c, const Params &) {
    cmd::AddBookmark b{EventId(c.str("event_id")), c.str_or("note", ""), c.user,
                       c.visibility(), c.engine.now()};
    return create(c, b, ResourceKind::bookmark);
  });

  // workspaces
  add("GET", "/workspaces", [](Ctx &c, const Params &) {
    return ok(to_array(list_workspaces(c.state(), c.user)));
  });
  add("GET", "/workspaces/{}", [](Ctx &c, const Params &p) {
    const auto &w = c.state().workspace(WorkspaceId(p[0]));
    if (!w.has_member(c.user))
      throw Error(Errc::access_denied, "not a member of workspace " + p[0]);
    return ok(w);
  });
  add("POST", "/workspaces", [](Ctx &c, const Params &) {
    auto id = c.commit(cmd::CreateWorkspace{c.str("name"), c.user, c.engine.now()});
    c.refresh();
    return created(c.state().workspace(WorkspaceId(id)));
  });
  add("POST", "/workspaces/{}/members", [](Ctx &c, const Params &p) {
    c.commit(cmd::AddMember{WorkspaceId(p[0]), UserId(c.str("user")), c.user});
    c.refresh();
    return ok(c.state().workspace(WorkspaceId(p[0])));
  });
  add("POST", "/workspaces/{}/share", [](Ctx &c, const Params &p) {
    c.commit(cmd::ShareResource{WorkspaceId(p[0]), c.str("kind"), c.str("id"), c.user});
    c.refresh();
    return ok(c.state().workspace(WorkspaceId(p[0])));
  });

  // search
  add("GET", "/search/keyword", [](Ctx &c, const Params &) {
    search::KeywordOptions opts;
    if (auto scope = c.query("scope"); scope && !scope->empty())
      opts.scope = WorkspaceId(*scope);
    return ok(to_array(search::keyword_search(c.state(), c.snap->index, c.query("q").value_or(""),
                                              c.user, opts)));
  });
  add("GET", "/search/theme", [](Ctx &c, const Params &) {
    const auto &s = c.state();
    OntologyId oid(c.required_query("ontology"));
    const auto &o = s.ontology(oid);
    auto theme = ontology::resolve_theme(o, c.required_query("theme"));
    bool expand = parse_bool(c.query("expand").value_or("false"));
    return ok(to_array(search::theme_search(s, c.snap->index, oid, theme, expand, c.user)));
  });
  add("POST", "/search/graph", [](Ctx &c, const Params &) {
    OntologyId oid(c.str("ontology_id"));
    auto query = parse_query(c, oid, "query");
    congraph::ProjectionOptions opts;
    if (c.has("budget"))
      opts.budget = c.get<std::uint64_t>("budget");
    return ok(to_array(search::graph_search(c.state(), query, c.user, opts)));
  });
  add("GET", "/search/montage", [](Ctx &c, const Params &) {
    return ok(to_array(search::montage_search(c.state(), c.user)));
  });

  // montage
  add("GET", "/paths", [](Ctx &c, const Params &) { return list_visible(c, ResourceKind::path); });
  add("GET", "/paths/{}", [](Ctx &c, const Params &p) {
    return get_visible(c, ResourceKind::path, p[0]);
  });
  add("POST", "/paths", [](Ctx &c, const Params &) {
    return create(c, cmd::CreatePath{c.str("name"), c.user, c.visibility(), c.engine.now()},
                  ResourceKind::path);
  });
  add("POST", "/paths/{}/nodes", [](Ctx &c, const Params &p) {
    c.commit(cmd::AddPathNode{PathId(p[0]), c.str_or("id", ""), SegmentId(c.str("segment_id")),
                              c.str_or("caption", ""), c.user});
    c.refresh();
    return created(c.state().path(PathId(p[0])));
  });
  add("POST", "/paths/{}/transitions", [](Ctx &c, const Params &p) {
    c.commit(cmd::AddPathTransition{PathId(p[0]), c.str("from"), c.str("to"),
                                    c.str_or("label", ""), c.user});
    c.refresh();
    return created(c.state().path(PathId(p[0])));
  });
  add("POST", "/paths/{}/entry", [](Ctx &c, const Params &p) {
    c.commit(cmd::SetPathEntry{PathId(p[0]), c.str("node"), c.user});
    c.refresh();
    return ok(c.state().path(PathId(p[0])));
  });
  add("POST", "/paths/{}/compile", [](Ctx &c, const Params &p) {
    return ok(montage::manifest_to_json(compile_manifest(c.state(), PathId(p[0]), c.user)));
  });
  return r;
}

const std::vector<Route> &routes() {
  static const std::vector<Route> kRoutes = build_routes();
  return kRoutes;
}

UserId authenticate(const State &s, const std::optional<std::string> &bearer) {
  if (!bearer || bearer->empty())
    throw Error(Errc::auth_missing, "missing bearer token");
  const auto hash = sha256_hex(*bearer);
  for (const auto &[id, u] : s.users)
    if (!u.token_hash.empty() && u.token_hash == hash)
      return id;
  throw Error(Errc::auth_invalid, "unknown bearer token");
}

}  // namespace

Json api_error(const Error &e) {
  const auto &info = errc_info(e.errc());
  return Json{{"http_status", info.http_status},
              {"code", info.code},
              {"message", e.what()},
              {"detail", e.detail()}};
}

Response error_response(const Error &e) {
  return {errc_info(e.errc()).http_status, api_error(e)};
}

Response Api::handle(const Request &req) {
  try {
    std::string_view path = req.path;
    if (!path.starts_with(kApiPrefix))
      throw Error(Errc::not_found, "no such endpoint: " + req.path);
    path.remove_prefix(kApiPrefix.size());
    const auto parts = split_path(path);

    const Route *match = nullptr;
    Params params;
    bool path_known = false;
    for (const auto &route : routes()) {
      if (route.pattern.size() != parts.size())
        continue;
      Params p;
      bool same = true;
      for (std::size_t i = 0; i < parts.size() && same; ++i) {
        if (route.pattern[i] == "{}")
          p.push_back(parts[i]);
        else
          same = route.pattern[i] == parts[i];
      }
      if (!same)
        continue;
      path_known = true;
      if (route.method == req.method) {
        match = &route;
        params = std::move(p);
        break;
      }
    }
    if (match == nullptr) {
      if (path_known)
        throw Error(Errc::bad_request, req.method + " is not allowed on " + req.path);
      throw Error(Errc::not_found, "no such endpoint: " + req.path);
    }

    Ctx ctx{engine_, req, {}, engine_.snapshot(), Json::object()};
    ctx.user = authenticate(ctx.state(), req.bearer);
    if (!req.body.empty()) {
      try {
        ctx.body = Json::parse(req.body);
      } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::bad_request, std::string("malformed JSON body: ") + e.what());
      }
      if (!ctx.body.is_object())
        throw Error(Errc::bad_request, "request body must be a JSON object");
    }
    return match->handler(ctx, params);
  } catch (const Error &e) {
    return error_response(e);
  } catch (const nlohmann::json::exception &e) {
    return error_response(Error(Errc::validation, e.what()));
  } catch (const std::exception &e) {
    return error_response(Error(Errc::internal, e.what()));
  }
}

}  // namespace avarc::service
