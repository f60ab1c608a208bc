#include "avarc/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <csignal>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "avarc/congraph/linear_form.hpp"
#include "avarc/core/digest.hpp"
#include "avarc/engine/compile.hpp"
#include "avarc/engine/engine.hpp"
#include "avarc/engine/queries.hpp"
#include "avarc/service/api.hpp"
#include "avarc/service/server.hpp"
#include "avarc/store/store.hpp"

namespace avarc::cli {
namespace {

using workspace::ResourceKind;
using Row = std::vector<std::string>;

void print_table(std::ostream &out, const Row &headers, const std::vector<Row> &rows) {
  std::vector<std::size_t> width(headers.size());
  for (std::size_t i = 0; i < headers.size(); ++i)
    width[i] = headers[i].size();
  for (const auto &r : rows)
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i)
      width[i] = std::max(width[i], r[i].size());
  auto line = [&](const Row &r) {
    std::string s;
    for (std::size_t i = 0; i < headers.size(); ++i) {
      std::string cell = i < r.size() ? r[i] : "";
      if (i + 1 < headers.size())
        cell.resize(width[i], ' ');
      s += cell;
      if (i + 1 < headers.size())
        s += "  ";
    }
    while (!s.empty() && s.back() == ' ')
      s.pop_back();
    out << s << '\n';
  };
  line(headers);
  for (const auto &r : rows)
    line(r);
}

std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::not_found, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<std::string, std::string> split_pair(const std::string &s, char sep,
                                               std::string_view what) {
  auto at = s.find(sep);
  if (at == std::string::npos || at == 0)
    throw Error(Errc::validation, std::string(what) + " must look like NAME" + sep +
                                      "VALUE, got '" + s + "'");
  return {s.substr(0, at), s.substr(at + 1)};
}

std::string part_text(const std::optional<search::Part> &p) {
  return p ? format_timecode(p->first) + "-" + format_timecode(p->second) : "";
}

// name[!]=enum:a|b|c  name[!]=ordinal:1..5  name[!]=text
viewpoint::FeatureDef parse_feature(const std::string &spec) {
  auto [lhs, rhs] = split_pair(spec, '=', "feature");
  viewpoint::FeatureDef f;
  f.required = lhs.ends_with('!');
  f.name = f.required ? lhs.substr(0, lhs.size() - 1) : lhs;
  auto colon = rhs.find(':');
  auto kind = rhs.substr(0, colon);
  auto arg = colon == std::string::npos ? std::string() : rhs.substr(colon + 1);
  if (kind == "enum" || kind == "enumeration") {
    viewpoint::Enumeration e;
    std::stringstream ss(arg);
    for (std::string v; std::getline(ss, v, '|');)
      e.values.push_back(v);
    f.kind = e;
  } else if (kind == "ordinal") {
    auto dots = arg.find("..");
    if (dots == std::string::npos)
      throw Error(Errc::validation, "ordinal feature needs MIN..MAX, got '" + arg + "'");
    try {
      f.kind = viewpoint::Ordinal{std::stoll(arg.substr(0, dots)), std::stoll(arg.substr(dots + 2))};
    } catch (const std::logic_error &) {
      throw Error(Errc::validation, "ordinal bounds must be integers, got '" + arg + "'");
    }
  } else if (kind == "text" || kind == "free_text") {
    f.kind = viewpoint::FreeText{};
  } else {
    throw Error(Errc::validation, "unknown feature kind '" + kind + "'");
  }
  return f;
}

archive::NormRect parse_norm_rect(const std::string &s) {
  archive::NormRect r;
  double *fields[] = {&r.x, &r.y, &r.w, &r.h};
  std::stringstream ss(s);
  std::string item;
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(ss, item, ','))
      throw Error(Errc::validation, "rect must be x,y,w,h");
    try {
      std::size_t used = 0;
      *fields[i] = std::stod(item, &used);
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::logic_error &) {
      throw Error(Errc::validation, "rect component '" + item + "' is not a number");
    }
  }
  if (std::getline(ss, item, ','))
    throw Error(Errc::validation, "rect must be x,y,w,h");
  return r;
}

// All option storage; CLI11 binds into these fields.
struct Opts {
  std::string store;
  std::string user;
  bool json = false;

  std::string id, name, display_name, token, kind, profile, metadata_file, uri, format_label;
  std::vector<std::string> fields, parents, features, values;
  std::string event, asset, segment, zone, ontology, theme, graph, schema, workspace, path;
  std::string start, end, at, from, to, duration, rect, label, visibility = "private";
  std::string category, definition, domain, range, parent, text, free_text, target;
  std::string note, caption, member, resource_kind, resource_id, out_dir, out_file, node;
  std::string config, listen, scope, template_name, features_file;
  bool expand = false, force = false;
  std::uint64_t budget = congraph::ProjectionOptions{}.budget;
};

class Runner {
 public:
  Runner(Opts &o, std::ostream &out, const CliEnv &env) : o_(o), out_(out), env_(env) { }

  Engine &engine() {
    if (!engine_) {
      std::string dir = !o_.store.empty() ? o_.store : env_.store.value_or("avarc-store");
      engine_ = std::make_unique<Engine>(dir, EngineOptions{env_.clock, {}});
      for (const auto &w : engine_->open_warnings())
        std::cerr << "warning: " << w << '\n';
    }
    return *engine_;
  }
  const State &state() { return (snap_ = engine().snapshot())->state; }

  UserId user() {
    std::string u = !o_.user.empty() ? o_.user : env_.user.value_or("");
    const auto &s = state();
    if (u.empty()) {
      if (s.users.size() == 1)
        return s.users.begin()->first;
      throw Error(Errc::validation,
                  s.users.empty() ? "no users registered; run 'user add' first"
                                  : "several users exist; pass --user");
    }
    s.user(UserId(u));
    return UserId(u);
  }

  Visibility visibility() const { return parse_visibility(o_.visibility); }
  Timestamp now() { return engine().now(); }

  std::string commit(const cmd::Command &c) { return engine().commit(c); }

  // Prints a created object's id, or the object with --json.
  void created(const std::string &id, const Json &doc) {
    if (o_.json)
      out_ << doc.dump(2) << '\n';
    else
      out_ << id << '\n';
  }
  void created_resource(const std::string &id, ResourceKind kind) {
    const auto &s = state();
    Json doc;
    switch (kind) {
      case ResourceKind::ontology: doc = s.ontology(OntologyId(id)); break;
      case ResourceKind::schema: doc = s.schema(SchemaId(id)); break;
      case ResourceKind::graph: doc = s.graph(GraphId(id)); break;
      case ResourceKind::segment: doc = s.segment(SegmentId(id)); break;
      case ResourceKind::bookmark: doc = s.bookmark(BookmarkId(id)); break;
      case ResourceKind::path: doc = s.path(PathId(id)); break;
      case ResourceKind::annotation: doc = s.annotation(AnnotationId(id)); break;
    }
    created(id, doc);
  }

  void emit(const Json &doc, const std::function<void()> &table) {
    if (o_.json)
      out_ << doc.dump(2) << '\n';
    else
      table();
  }

  annotation::Target target() {
    if (!o_.zone.empty())
      return annotation::ZoneTarget{ZoneId(o_.zone)};
    if (o_.segment.empty())
      throw Error(Errc::validation, "a target needs --segment or --zone");
    if (o_.from.empty() != o_.to.empty())
      throw Error(Errc::validation, "--from and --to go together");
    if (!o_.from.empty())
      return annotation::PartTarget{SegmentId(o_.segment), parse_timecode(o_.from),
                                    parse_timecode(o_.to)};
    return annotation::SegmentTarget{SegmentId(o_.segment)};
  }

  void hits(const std::vector<search::SearchHit> &hs) {
    emit(service_json(hs), [&] {
      std::vector<Row> rows;
      for (const auto &h : hs) {
        std::string anns;
        for (const auto &a : h.annotations)
          anns += (anns.empty() ? "" : ",") + a.value;
        rows.push_back({h.event.value, h.segment ? h.segment->value : "", part_text(h.part),
                        std::to_string(h.match_count), std::to_string(h.specificity), anns});
      }
      print_table(out_, {"EVENT", "SEGMENT", "PART", "MATCHES", "SPECIFICITY", "ANNOTATIONS"},
                  rows);
    });
  }

  template <class T>
  static Json service_json(const std::vector<T> &items) {
    Json out = Json::array();
    for (const auto &i : items)
      out.push_back(i);
    return out;
  }

  std::ostream &out() { return out_; }
  Opts &opts() { return o_; }

 private:
  Opts &o_;
  std::ostream &out_;
  const CliEnv &env_;
  std::unique_ptr<Engine> engine_;
  std::shared_ptr<const Snapshot> snap_;
};

using Action = std::function<int(Runner &)>;

void build(CLI::App &app, Opts &o, Action &action) {
  auto on = [&action](CLI::App *sub, Action a) {
    sub->callback([&action, a = std::move(a)] { action = a; });
  };
  auto vis_opt = [&o](CLI::App *sub) {
    sub->add_option("--visibility", o.visibility, "private, public or group:<workspace>");
  };

  app.add_option("--store", o.store, "Store directory (default $AVARC_STORE or ./avarc-store)");
  app.add_option("--user", o.user, "Acting user (default $AVARC_USER)");
  app.add_flag("--json", o.json, "Machine-readable output");
  app.require_subcommand(1);

  // init / users
  auto *init = app.add_subcommand("init", "Create a store, optionally with a first user");
  init->add_option("--user-id", o.id, "First user id");
  init->add_option("--name", o.display_name, "Display name of the first user");
  init->add_option("--token", o.token, "Bearer token of the first user");
  on(init, [&o](Runner &r) {
    r.engine();
    if (!o.id.empty() && !r.state().users.contains(UserId(o.id)))
      r.commit(cmd::AddUser{UserId(o.id), o.display_name.empty() ? o.id : o.display_name,
                            o.token.empty() ? "" : sha256_hex(o.token)});
    r.out() << "initialized " << r.engine().snapshot()->seq << " records\n";
    return 0;
  });

  auto *user = app.add_subcommand("user", "Manage users");
  user->require_subcommand(1);
  auto *user_add = user->add_subcommand("add", "Register a user");
  user_add->add_option("id", o.id)->required();
  user_add->add_option("--name", o.display_name);
  user_add->add_option("--token", o.token, "Bearer token for the HTTP service");
  on(user_add, [&o](Runner &r) {
    auto id = r.commit(cmd::AddUser{UserId(o.id), o.display_name.empty() ? o.id : o.display_name,
                                    o.token.empty() ? "" : sha256_hex(o.token)});
    r.created(id, Json{{"id", id}});
    return 0;
  });
  on(user->add_subcommand("list", "List users"), [](Runner &r) {
    const auto &s = r.state();
    Json doc = Json::array();
    std::vector<Row> rows;
    for (const auto &[id, u] : s.users) {
      doc.push_back(Json{{"id", id}, {"display_name", u.display_name}});
      rows.push_back({id.value, u.display_name});
    }
    r.emit(doc, [&] { print_table(r.out(), {"ID", "NAME"}, rows); });
    return 0;
  });

  // events and media
  auto *event = app.add_subcommand("event", "Archive events");
  event->require_subcommand(1);
  auto *ev_reg = event->add_subcommand("register", "Register an event");
  ev_reg->add_option("--kind", o.kind, "interview, seminar, symposium, ...")->required();
  ev_reg->add_option("--metadata-file", o.metadata_file, "'Field: value' lines");
  ev_reg->add_option("--field", o.fields, "Field=Value (repeatable, in order)");
  ev_reg->add_option("--profile", o.profile);
  on(ev_reg, [&o](Runner &r) {
    cmd::RegisterEvent e;
    e.event_kind = o.kind;
    if (!o.metadata_file.empty())
      e.metadata = archive::parse_metadata_text(read_text_file(o.metadata_file));
    for (const auto &f : o.fields)
      e.metadata.entries.push_back(split_pair(f, '=', "--field"));
    if (!o.profile.empty())
      e.metadata.profile = o.profile;
    e.at = r.now();
    auto id = r.commit(e);
    r.created(id, r.state().event(EventId(id)));
    return 0;
  });
  auto *ev_list = event->add_subcommand("list", "List events");
  ev_list->add_option("--kind", o.kind);
  on(ev_list, [&o](Runner &r) {
    std::optional<archive::EventKind> kind;
    if (!o.kind.empty())
      kind = archive::parse_event_kind(o.kind);
    auto events = list_events(r.state(), kind);
    r.emit(Runner::service_json(events), [&] {
      std::vector<Row> rows;
      for (const auto &e : events) {
        const auto *title = e.metadata.find("Titre");
        rows.push_back({e.id.value, std::string(archive::to_string(e.kind)),
                        std::to_string(e.asset_ids.size()), format_timestamp(e.created_at),
                        title ? *title : ""});
      }
      print_table(r.out(), {"ID", "KIND", "ASSETS", "CREATED", "TITLE"}, rows);
    });
    return 0;
  });
  auto *ev_show = event->add_subcommand("show", "Show one event");
  ev_show->add_option("id", o.id)->required();
  on(ev_show, [&o](Runner &r) {
    const auto &e = r.state().event(EventId(o.id));
    r.emit(e, [&] {
      r.out() << e.id.value << " (" << archive::to_string(e.kind) << ")\n"
              << archive::format_metadata_text(e.metadata);
    });
    return 0;
  });

  auto *asset = app.add_subcommand("asset", "Media assets");
  asset->require_subcommand(1);
  auto *asset_add = asset->add_subcommand("add", "Attach a media asset to an event");
  asset_add->add_option("--event", o.event)->required();
  asset_add->add_option("--uri", o.uri)->required();
  asset_add->add_option("--duration", o.duration, "HH:MM:SS.mmm or milliseconds");
  asset_add->add_option("--format", o.format_label);
  on(asset_add, [&o](Runner &r) {
    auto id = r.commit(cmd::AddAsset{EventId(o.event), o.uri,
                                     o.duration.empty() ? 0 : parse_timecode(o.duration),
                                     o.format_label});
    r.created(id, r.state().asset(AssetId(id)));
    return 0;
  });

  auto *segment = app.add_subcommand("segment", "Segments");
  segment->require_subcommand(1);
  auto *seg_create = segment->add_subcommand("create", "Select a time interval of an asset");
  seg_create->add_option("--asset", o.asset)->required();
  seg_create->add_option("--start", o.start)->required();
  seg_create->add_option("--end", o.end)->required();
  seg_create->add_option("--label", o.label);
  vis_opt(seg_create);
  on(seg_create, [&o](Runner &r) {
    cmd::CreateSegment c{AssetId(o.asset), parse_timecode(o.start), parse_timecode(o.end),
                         o.label.empty() ? std::nullopt : std::optional(o.label), r.user(),
                         r.visibility(), r.now()};
    r.created_resource(r.commit(c), ResourceKind::segment);
    return 0;
  });
  on(segment->add_subcommand("list", "Segments visible to the user"), [](Runner &r) {
    const auto &s = r.state();
    auto refs = visible_resources(s, ResourceKind::segment, r.user());
    Json doc = Json::array();
    std::vector<Row> rows;
    for (const auto &ref : refs) {
      const auto &seg = s.segment(SegmentId(ref.id));
      doc.push_back(seg);
      rows.push_back({seg.id.value, seg.asset.value, format_timecode(seg.start_ms),
                      format_timecode(seg.end_ms), seg.label.value_or(""),
                      to_string(seg.visibility)});
    }
    r.emit(doc, [&] {
      print_table(r.out(), {"ID", "ASSET", "START", "END", "LABEL", "VISIBILITY"}, rows);
    });
    return 0;
  });

  auto *zone = app.add_subcommand("zone", "Frame zones");
  zone->require_subcommand(1);
  auto *zone_create = zone->add_subcommand("create", "Mark a rectangle on one frame");
  zone_create->add_option("--segment", o.segment)->required();
  zone_create->add_option("--at", o.at)->required();
  zone_create->add_option("--rect", o.rect, "x,y,w,h in [0,1]")->required();
  on(zone_create, [&o](Runner &r) {
    auto id = r.commit(cmd::CreateZone{SegmentId(o.segment), parse_timecode(o.at),
                                       parse_norm_rect(o.rect), r.user()});
    r.created(id, r.state().zone(ZoneId(id)));
    return 0;
  });

  // ontologies
  auto *onto = app.add_subcommand("ontology", "Theme ontologies");
  onto->require_subcommand(1);
  auto *onto_create = onto->add_subcommand("create", "Create an ontology");
  onto_create->add_option("name", o.name)->required();
  vis_opt(onto_create);
  on(onto_create, [&o](Runner &r) {
    r.created_resource(r.commit(cmd::CreateOntology{o.name, r.user(), r.visibility(), r.now()}),
                       ResourceKind::ontology);
    return 0;
  });
  auto *onto_theme = onto->add_subcommand("add-theme", "Add a theme");
  onto_theme->add_option("--ontology", o.ontology)->required();
  onto_theme->add_option("--name", o.name)->required();
  onto_theme->add_option("--category", o.category, "notional, rhetorical or contextual");
  onto_theme->add_option("--definition", o.definition);
  onto_theme->add_option("--parent", o.parents, "Parent theme (repeatable; default root)");
  on(onto_theme, [&o](Runner &r) {
    auto id = r.commit(cmd::AddTheme{OntologyId(o.ontology), o.name,
                                     o.category.empty() ? "notional" : o.category, o.definition,
                                     o.parents, r.user()});
    r.created(id, *r.state().ontology(OntologyId(o.ontology)).theme(ThemeId(id)));
    return 0;
  });
  auto *onto_parent = onto->add_subcommand("add-parent", "Add an is-a link");
  onto_parent->add_option("--ontology", o.ontology)->required();
  onto_parent->add_option("--theme", o.theme)->required();
  onto_parent->add_option("--parent", o.parent)->required();
  on(onto_parent, [&o](Runner &r) {
    auto id = r.commit(cmd::AddThemeParent{OntologyId(o.ontology), o.theme, o.parent, r.user()});
    r.created(id, *r.state().ontology(OntologyId(o.ontology)).theme(ThemeId(id)));
    return 0;
  });
  auto *onto_rel = onto->add_subcommand("add-rel", "Add a relation type");
  onto_rel->add_option("--ontology", o.ontology)->required();
  onto_rel->add_option("--name", o.name)->required();
  onto_rel->add_option("--category", o.category,
                       "classification, practical_inference, epistemic_inference, "
                       "modalisation_grading or localization");
  onto_rel->add_option("--definition", o.definition);
  onto_rel->add_option("--domain", o.domain, "Most general source theme (default root)");
  onto_rel->add_option("--range", o.range, "Most general target theme (default root)");
  on(onto_rel, [&o](Runner &r) {
    auto id = r.commit(cmd::AddRelationType{OntologyId(o.ontology), o.name,
                                            o.category.empty() ? "classification" : o.category,
                                            o.definition, o.domain, o.range, r.user()});
    r.created(id, *r.state().ontology(OntologyId(o.ontology)).relation(RelationTypeId(id)));
    return 0;
  });
  auto *onto_validate = onto->add_subcommand("validate", "Check ontology invariants");
  onto_validate->add_option("ontology", o.ontology)->required();
  on(onto_validate, [&o](Runner &r) {
    const auto &s = r.state();
    require_view(s, r.user(), {ResourceKind::ontology, o.ontology});
    auto v = ontology::validate_ontology(s.ontology(OntologyId(o.ontology)));
    r.emit(Json{{"valid", v.empty()}, {"violations", v}}, [&] {
      if (v.empty())
        r.out() << "ok\n";
      for (const auto &x : v)
        r.out() << x.code << ": " << x.message << '\n';
    });
    return v.empty() ? 0 : 1;
  });
  auto *onto_tpl = onto->add_subcommand("load-template", "Install a starter ontology");
  onto_tpl->add_option("template", o.template_name)->required();
  on(onto_tpl, [&o](Runner &r) {
    r.created_resource(r.commit(cmd::LoadOntologyTemplate{o.template_name, r.user(), r.now()}),
                       ResourceKind::ontology);
    return 0;
  });
  auto *onto_show = onto->add_subcommand("show", "Show themes and relations");
  onto_show->add_option("ontology", o.ontology)->required();
  on(onto_show, [&o](Runner &r) {
    const auto &s = r.state();
    require_view(s, r.user(), {ResourceKind::ontology, o.ontology});
    const auto &ont = s.ontology(OntologyId(o.ontology));
    r.emit(ont, [&] {
      std::vector<Row> rows;
      for (const auto &[id, t] : ont.themes) {
        std::string parents;
        for (const auto &p : t.parents)
          parents += (parents.empty() ? "" : ",") + ont.theme(p)->name;
        rows.push_back({id.value, t.name, std::string(ontology::to_string(t.category)), parents,
                        std::to_string(ontology::depth(ont, id))});
      }
      print_table(r.out(), {"ID", "THEME", "CATEGORY", "PARENTS", "DEPTH"}, rows);
      rows.clear();
      for (const auto &[id, rel] : ont.relations)
        rows.push_back({id.value, rel.name, std::string(ontology::to_string(rel.category)),
                        ont.theme(rel.domain)->name, ont.theme(rel.range)->name});
      if (!rows.empty()) {
        r.out() << '\n';
        print_table(r.out(), {"ID", "RELATION", "CATEGORY", "DOMAIN", "RANGE"}, rows);
      }
    });
    return 0;
  });
  on(onto->add_subcommand("list", "Ontologies visible to the user"), [](Runner &r) {
    const auto &s = r.state();
    Json doc = Json::array();
    std::vector<Row> rows;
    for (const auto &ref : visible_resources(s, ResourceKind::ontology, r.user())) {
      const auto &ont = s.ontology(OntologyId(ref.id));
      doc.push_back(Json{{"id", ont.id}, {"name", ont.name}, {"owner", ont.owner},
                         {"visibility", ont.visibility}});
      rows.push_back({ont.id.value, ont.name, ont.owner.value, to_string(ont.visibility),
                      std::to_string(ont.themes.size())});
    }
    r.emit(doc, [&] {
      print_table(r.out(), {"ID", "NAME", "OWNER", "VISIBILITY", "THEMES"}, rows);
    });
    return 0;
  });

  // conceptual graphs
  auto *cg = app.add_subcommand("cg", "Conceptual graphs");
  cg->require_subcommand(1);
  auto *cg_parse = cg->add_subcommand("parse", "Parse linear form and print it canonically");
  cg_parse->add_option("--ontology", o.ontology);
  cg_parse->add_option("text", o.text)->required();
  on(cg_parse, [&o](Runner &r) {
    const auto &s = r.state();
    ontology::ThemeOntology scratch;
    const ontology::ThemeOntology *ont = &scratch;
    if (!o.ontology.empty()) {
      require_view(s, r.user(), {ResourceKind::ontology, o.ontology});
      ont = &s.ontology(OntologyId(o.ontology));
    } else {
      scratch = ontology::make_ontology(OntologyId("scratch"), "scratch", UserId(),
                                        ThemeId("thing"), Timestamp{});
    }
    auto g = congraph::parse_graph(o.text, *ont);
    auto canonical = congraph::print_graph(g, *ont);
    r.emit(Json{{"graph", g}, {"canonical", canonical}}, [&] { r.out() << canonical << '\n'; });
    return 0;
  });
  auto *cg_create = cg->add_subcommand("create", "Store a graph");
  cg_create->add_option("--ontology", o.ontology)->required();
  cg_create->add_option("--name", o.name);
  cg_create->add_option("--free-text", o.free_text, "Keywords or description");
  cg_create->add_option("text", o.text)->required();
  vis_opt(cg_create);
  on(cg_create, [&o](Runner &r) {
    cmd::CreateGraph c{OntologyId(o.ontology), o.text,
                       o.name.empty() ? std::nullopt : std::optional(o.name),
                       o.free_text.empty() ? std::nullopt : std::optional(o.free_text),
                       r.user(), r.visibility(), r.now()};
    r.created_resource(r.commit(c), ResourceKind::graph);
    return 0;
  });
  auto *cg_print = cg->add_subcommand("print", "Print a stored graph canonically");
  cg_print->add_option("graph", o.graph)->required();
  on(cg_print, [&o](Runner &r) {
    const auto &s = r.state();
    require_view(s, r.user(), {ResourceKind::graph, o.graph});
    const auto &g = s.graph(GraphId(o.graph));
    auto text = congraph::print_graph(g, s.ontology(g.ontology));
    r.emit(Json{{"id", g.id}, {"canonical", text}}, [&] { r.out() << text << '\n'; });
    return 0;
  });
  auto *cg_query = cg->add_subcommand("query", "Project a query graph into a target graph");
  cg_query->add_option("--ontology", o.ontology)->required();
  cg_query->add_option("--target", o.target, "Target graph in linear form");
  cg_query->add_option("--graph", o.graph, "Stored target graph id");
  cg_query->add_option("--budget", o.budget, "Candidate assignment budget");
  cg_query->add_option("query", o.text)->required();
  on(cg_query, [&o](Runner &r) {
    const auto &s = r.state();
    auto user = r.user();
    require_view(s, user, {ResourceKind::ontology, o.ontology});
    const auto &ont = s.ontology(OntologyId(o.ontology));
    auto query = congraph::parse_graph(o.text, ont);
    query.ontology = ont.id;
    congraph::ConceptualGraph target;
    if (!o.graph.empty()) {
      require_view(s, user, {ResourceKind::graph, o.graph});
      target = s.graph(GraphId(o.graph));
    } else if (!o.target.empty()) {
      target = congraph::parse_graph(o.target, ont);
      target.ontology = ont.id;
    } else {
      throw Error(Errc::validation, "cg query needs --target or --graph");
    }
    auto maps = congraph::project(query, target, ont, {o.budget});
    Json doc = Json::array();
    for (const auto &m : maps)
      doc.push_back(congraph::mapping_to_json(query, m));
    r.emit(Json{{"count", maps.size()}, {"mappings", doc}}, [&] {
      r.out() << maps.size() << " mapping(s)\n";
      for (const auto &m : maps) {
        std::string line;
        for (std::size_t i = 0; i < m.image.size(); ++i)
          line += (i ? " " : "") + query.nodes[i].label + "->" + m.image[i];
        r.out() << line << '\n';
      }
    });
    return 0;
  });

  // viewpoints
  auto *vp = app.add_subcommand("viewpoint", "Viewpoint schemas");
  vp->require_subcommand(1);
  auto *vp_define = vp->add_subcommand("define", "Define a feature formulary");
  vp_define->add_option("--name", o.name)->required();
  vp_define->add_option("--feature", o.features,
                        "name[!]=enum:a|b, name[!]=ordinal:1..5 or name[!]=text "
                        "(! marks required; repeatable)");
  vp_define->add_option("--features-file", o.features_file, "JSON array of feature definitions");
  vis_opt(vp_define);
  on(vp_define, [&o](Runner &r) {
    std::vector<viewpoint::FeatureDef> defs;
    if (!o.features_file.empty()) {
      try {
        defs = Json::parse(read_text_file(o.features_file)).get<std::vector<viewpoint::FeatureDef>>();
      } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::validation, std::string("bad features file: ") + e.what());
      }
    }
    for (const auto &f : o.features)
      defs.push_back(parse_feature(f));
    r.created_resource(
        r.commit(cmd::DefineSchema{o.name, defs, r.user(), r.visibility(), r.now()}),
        ResourceKind::schema);
    return 0;
  });
  auto *vp_tpl = vp->add_subcommand("load-template", "Install a starter schema");
  vp_tpl->add_option("template", o.template_name)->required();
  on(vp_tpl, [&o](Runner &r) {
    r.created_resource(r.commit(cmd::LoadSchemaTemplate{o.template_name, r.user(), r.now()}),
                       ResourceKind::schema);
    return 0;
  });

  // annotations
  auto *ann = app.add_subcommand("annotate", "Attach descriptions to segments, parts and zones");
  ann->require_subcommand(1);
  auto target_opts = [&o, &vis_opt](CLI::App *sub) {
    sub->add_option("--segment", o.segment);
    sub->add_option("--from", o.from, "Part start (with --to)");
    sub->add_option("--to", o.to, "Part end");
    sub->add_option("--zone", o.zone);
    vis_opt(sub);
  };
  auto *ann_theme = ann->add_subcommand("theme", "Attach a theme");
  target_opts(ann_theme);
  ann_theme->add_option("--ontology", o.ontology)->required();
  ann_theme->add_option("--theme", o.theme)->required();
  on(ann_theme, [&o](Runner &r) {
    r.created_resource(r.commit(cmd::AttachTheme{r.target(), OntologyId(o.ontology), o.theme,
                                                 r.user(), r.visibility(), r.now()}),
                       ResourceKind::annotation);
    return 0;
  });
  auto *ann_graph = ann->add_subcommand("graph", "Attach a stored conceptual graph");
  target_opts(ann_graph);
  ann_graph->add_option("--graph", o.graph)->required();
  on(ann_graph, [&o](Runner &r) {
    r.created_resource(r.commit(cmd::AttachGraph{r.target(), GraphId(o.graph), r.user(),
                                                 r.visibility(), r.now()}),
                       ResourceKind::annotation);
    return 0;
  });
  auto *ann_vp = ann->add_subcommand("viewpoint", "Attach a filled-in viewpoint");
  target_opts(ann_vp);
  ann_vp->add_option("--schema", o.schema)->required();
  ann_vp->add_option("--value", o.values, "feature=value (repeatable)");
  on(ann_vp, [&o](Runner &r) {
    const auto &schema = r.state().schema(SchemaId(o.schema));
    Json values = Json::object();
    for (const auto &v : o.values) {
      auto [name, text] = split_pair(v, '=', "--value");
      const auto *def = schema.feature(name);
      if (def == nullptr) {
        values[name] = text;
        continue;
      }
      auto value = viewpoint::coerce_value(*def, text);
      if (const auto *n = std::get_if<std::int64_t>(&value))
        values[name] = *n;
      else
        values[name] = std::get<std::string>(value);
    }
    r.created_resource(r.commit(cmd::AttachViewpoint{r.target(), SchemaId(o.schema), values,
                                                     r.user(), r.visibility(), r.now()}),
                       ResourceKind::annotation);
    return 0;
  });
  auto *ann_note = ann->add_subcommand("note", "Attach a free note");
  target_opts(ann_note);
  ann_note->add_option("--text", o.text)->required();
  on(ann_note, [&o](Runner &r) {
    r.created_resource(r.commit(cmd::AttachNote{r.target(), o.text, r.user(), r.visibility(),
                                                r.now()}),
                       ResourceKind::annotation);
    return 0;
  });
  auto *ann_retract = ann->add_subcommand("retract", "Hide one of your annotations");
  ann_retract->add_option("annotation", o.id)->required();
  on(ann_retract, [&o](Runner &r) {
    auto id = r.commit(cmd::RetractAnnotation{AnnotationId(o.id), r.user()});
    r.created_resource(id, ResourceKind::annotation);
    return 0;
  });
  auto *ann_list = ann->add_subcommand("list", "Annotations on a segment");
  ann_list->add_option("--segment", o.segment)->required();
  on(ann_list, [&o](Runner &r) {
    const auto &s = r.state();
    auto user = r.user();
    require_view(s, user, {ResourceKind::segment, o.segment});
    auto list = list_annotations(s, SegmentId(o.segment), user);
    r.emit(Runner::service_json(list), [&] {
      std::vector<Row> rows;
      for (const auto &a : list) {
        std::string part;
        if (const auto *p = std::get_if<annotation::PartTarget>(&a.target))
          part = part_text(search::Part{p->from_ms, p->to_ms});
        rows.push_back({a.id.value, std::string(annotation::body_kind(a.body)), part,
                        a.author.value, annotation_summary(s, a)});
      }
      print_table(r.out(), {"ID", "KIND", "PART", "AUTHOR", "SUMMARY"}, rows);
    });
    return 0;
  });

  auto *bookmark = app.add_subcommand("bookmark", "Bookmark an event in your library");
  bookmark->add_option("event", o.event, "Event to bookmark; omit to list bookmarks");
  bookmark->add_option("--note", o.note);
  vis_opt(bookmark);
  on(bookmark, [&o](Runner &r) {
    if (!o.event.empty()) {
      r.created_resource(r.commit(cmd::AddBookmark{EventId(o.event), o.note, r.user(),
                                                   r.visibility(), r.now()}),
                         ResourceKind::bookmark);
      return 0;
    }
    auto list = list_bookmarks(r.state(), r.user());
    r.emit(Runner::service_json(list), [&] {
      std::vector<Row> rows;
      for (const auto &b : list)
        rows.push_back({b.id.value, b.event.value, b.owner.value, b.note});
      print_table(r.out(), {"ID", "EVENT", "OWNER", "NOTE"}, rows);
    });
    return 0;
  });

  auto *visibility = app.add_subcommand("visibility", "Change who may see a resource");
  visibility->require_subcommand(1);
  auto *vis_set = visibility->add_subcommand("set", "Set the visibility of a resource you own");
  vis_set->add_option("--kind", o.resource_kind)->required();
  vis_set->add_option("--id", o.resource_id)->required();
  vis_set->add_option("visibility", o.visibility)->required();
  on(vis_set, [&o](Runner &r) {
    auto id = r.commit(cmd::SetVisibility{o.resource_kind, o.resource_id, r.visibility(), r.user()});
    r.created_resource(id, workspace::parse_resource_kind(o.resource_kind));
    return 0;
  });

  // search
  auto *search_cmd = app.add_subcommand("search", "Search the archive");
  search_cmd->require_subcommand(1);
  auto *s_kw = search_cmd->add_subcommand("keyword", "Case-insensitive substring search");
  s_kw->add_option("text", o.text)->required();
  s_kw->add_option("--scope", o.scope, "Restrict to one workspace");
  on(s_kw, [&o](Runner &r) {
    search::KeywordOptions opts;
    if (!o.scope.empty())
      opts.scope = WorkspaceId(o.scope);
    auto snap = r.engine().snapshot();
    r.hits(search::keyword_search(snap->state, snap->index, o.text, r.user(), opts));
    return 0;
  });
  auto *s_theme = search_cmd->add_subcommand("theme", "Segments annotated with a theme");
  s_theme->add_option("--ontology", o.ontology)->required();
  s_theme->add_option("--theme", o.theme)->required();
  s_theme->add_flag("--expand", o.expand, "Include descendant themes");
  on(s_theme, [&o](Runner &r) {
    auto snap = r.engine().snapshot();
    const auto &ont = snap->state.ontology(OntologyId(o.ontology));
    r.hits(search::theme_search(snap->state, snap->index, ont.id,
                                ontology::resolve_theme(ont, o.theme), o.expand, r.user()));
    return 0;
  });
  auto *s_graph = search_cmd->add_subcommand("graph", "Annotations whose graph admits a projection");
  s_graph->add_option("--ontology", o.ontology)->required();
  s_graph->add_option("--budget", o.budget);
  s_graph->add_option("query", o.text)->required();
  on(s_graph, [&o](Runner &r) {
    const auto &s = r.state();
    auto user = r.user();
    require_view(s, user, {ResourceKind::ontology, o.ontology});
    auto query = congraph::parse_graph(o.text, s.ontology(OntologyId(o.ontology)));
    query.ontology = OntologyId(o.ontology);
    r.hits(search::graph_search(s, query, user, {o.budget}));
    return 0;
  });
  on(search_cmd->add_subcommand("montage", "Navigation paths you can open"), [](Runner &r) {
    auto list = search::montage_search(r.state(), r.user());
    r.emit(Runner::service_json(list), [&] {
      std::vector<Row> rows;
      for (const auto &p : list)
        rows.push_back({p.id.value, p.name, p.owner.value, std::to_string(p.node_count),
                        std::to_string(p.transition_count)});
      print_table(r.out(), {"ID", "NAME", "OWNER", "NODES", "TRANSITIONS"}, rows);
    });
    return 0;
  });

  // montage
  auto *montage_cmd = app.add_subcommand("montage", "Navigation paths and hyper-documents");
  montage_cmd->require_subcommand(1);
  auto *m_create = montage_cmd->add_subcommand("create", "Create an empty path");
  m_create->add_option("name", o.name)->required();
  vis_opt(m_create);
  on(m_create, [&o](Runner &r) {
    r.created_resource(r.commit(cmd::CreatePath{o.name, r.user(), r.visibility(), r.now()}),
                       ResourceKind::path);
    return 0;
  });
  auto *m_node = montage_cmd->add_subcommand("add-node", "Add a segment as a node");
  m_node->add_option("--path", o.path)->required();
  m_node->add_option("--segment", o.segment)->required();
  m_node->add_option("--id", o.node, "Node id (default n<k>)");
  m_node->add_option("--caption", o.caption);
  on(m_node, [&o](Runner &r) {
    auto id = r.commit(cmd::AddPathNode{PathId(o.path), o.node, SegmentId(o.segment), o.caption,
                                        r.user()});
    r.created(id, r.state().path(PathId(o.path)));
    return 0;
  });
  auto *m_edge = montage_cmd->add_subcommand("add-edge", "Add an oriented transition");
  m_edge->add_option("--path", o.path)->required();
  m_edge->add_option("--from", o.from)->required();
  m_edge->add_option("--to", o.to)->required();
  m_edge->add_option("--label", o.label);
  on(m_edge, [&o](Runner &r) {
    r.commit(cmd::AddPathTransition{PathId(o.path), o.from, o.to, o.label, r.user()});
    r.created(o.from + "->" + o.to, r.state().path(PathId(o.path)));
    return 0;
  });
  auto *m_entry = montage_cmd->add_subcommand("set-entry", "Choose the entry node");
  m_entry->add_option("--path", o.path)->required();
  m_entry->add_option("--node", o.node)->required();
  on(m_entry, [&o](Runner &r) {
    r.commit(cmd::SetPathEntry{PathId(o.path), o.node, r.user()});
    r.created(o.node, r.state().path(PathId(o.path)));
    return 0;
  });
  auto *m_compile = montage_cmd->add_subcommand("compile", "Compile a path to a manifest");
  m_compile->add_option("path", o.path)->required();
  m_compile->add_option("--out", o.out_file, "Write the manifest to a file");
  on(m_compile, [&o](Runner &r) {
    auto text = montage::manifest_text(compile_manifest(r.state(), PathId(o.path), r.user()));
    if (o.out_file.empty()) {
      r.out() << text;
    } else {
      store::write_file_atomic(o.out_file, text);
      r.out() << o.out_file << '\n';
    }
    return 0;
  });
  auto *m_export = montage_cmd->add_subcommand("export", "Write manifest and static pages");
  m_export->add_option("path", o.path)->required();
  m_export->add_option("--out", o.out_dir)->required();
  m_export->add_flag("--force", o.force, "Write into a non-empty directory");
  on(m_export, [&o](Runner &r) {
    auto m = compile_manifest(r.state(), PathId(o.path), r.user());
    auto files = montage::export_site(m, o.out_dir, {o.force});
    r.emit(Json{{"out", o.out_dir}, {"files", files}}, [&] {
      for (const auto &f : files)
        r.out() << f << '\n';
    });
    return 0;
  });

  // workspaces
  auto *ws = app.add_subcommand("workspace", "Work spaces and sharing");
  ws->require_subcommand(1);
  auto *ws_create = ws->add_subcommand("create", "Create a work space");
  ws_create->add_option("name", o.name)->required();
  on(ws_create, [&o](Runner &r) {
    auto id = r.commit(cmd::CreateWorkspace{o.name, r.user(), r.now()});
    r.created(id, r.state().workspace(WorkspaceId(id)));
    return 0;
  });
  auto *ws_member = ws->add_subcommand("add-member", "Add a member (owner only)");
  ws_member->add_option("--workspace", o.workspace)->required();
  ws_member->add_option("--member", o.member)->required();
  on(ws_member, [&o](Runner &r) {
    auto id = r.commit(cmd::AddMember{WorkspaceId(o.workspace), UserId(o.member), r.user()});
    r.created(id, r.state().workspace(WorkspaceId(id)));
    return 0;
  });
  auto *ws_share = ws->add_subcommand("share", "Share a resource you own");
  ws_share->add_option("--workspace", o.workspace)->required();
  ws_share->add_option("--kind", o.resource_kind,
                       "ontology, schema, graph, segment, bookmark, path or annotation")
      ->required();
  ws_share->add_option("--id", o.resource_id)->required();
  on(ws_share, [&o](Runner &r) {
    auto id = r.commit(cmd::ShareResource{WorkspaceId(o.workspace), o.resource_kind,
                                          o.resource_id, r.user()});
    r.created(id, r.state().workspace(WorkspaceId(id)));
    return 0;
  });
  on(ws->add_subcommand("list", "Work spaces you belong to"), [](Runner &r) {
    auto list = list_workspaces(r.state(), r.user());
    r.emit(Runner::service_json(list), [&] {
      std::vector<Row> rows;
      for (const auto &w : list)
        rows.push_back({w.id.value, w.name, w.owner.value, std::to_string(w.members.size()),
                        std::to_string(w.resources.size())});
      print_table(r.out(), {"ID", "NAME", "OWNER", "MEMBERS", "RESOURCES"}, rows);
    });
    return 0;
  });

  // operations
  on(app.add_subcommand("stats", "Archive totals"), [](Runner &r) {
    auto st = archive_stats(r.state());
    r.emit(st, [&] {
      print_table(r.out(), {"EVENTS", "SEGMENTS", "KNOWN DURATION"},
                  {{std::to_string(st.event_count), std::to_string(st.segment_count),
                    format_timecode(st.total_known_duration_ms)}});
    });
    return 0;
  });
  on(app.add_subcommand("snapshot", "Write a snapshot of the current state"), [](Runner &r) {
    r.engine().write_snapshot();
    r.out() << "snapshot at seq " << r.engine().snapshot()->seq << '\n';
    return 0;
  });
  on(app.add_subcommand("reindex", "Rebuild search indexes and compare"), [](Runner &r) {
    bool same = r.engine().rebuild_indexes();
    r.out() << (same ? "indexes unchanged\n" : "indexes differed and were replaced\n");
    return same ? 0 : 3;
  });
  auto *serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", o.config, "JSON config: listen, store, users");
  serve->add_option("--listen", o.listen, "host:port (overrides config)");
  on(serve, [&o](Runner &r) {
    service::ServerConfig config;
    if (!o.config.empty())
      config = service::load_config(o.config);
    if (!o.listen.empty()) {
      auto listen = service::parse_config(Json{{"listen", o.listen}});
      config.host = listen.host;
      config.port = listen.port;
    }
    if (o.store.empty() && !config.store.empty())
      o.store = config.store.string();
    service::ensure_users(r.engine(), config.users);
    service::Server server(r.engine());
    int port = server.bind(config.host, config.port);
    std::cerr << "listening on " << config.host << ':' << port << '\n';
    server.listen();
    return 0;
  });
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
            const CliEnv &env) {
  Opts opts;
  Action action;
  CLI::App app{"Annotate, search and montage audiovisual research archives", "avarc"};
  build(app, opts, action);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (!action)
    return 1;
  Runner runner(opts, out, env);
  try {
    return action(runner);
  } catch (const Error &e) {
    if (opts.json)
      err << service::api_error(e).dump() << '\n';
    else
      err << "error: " << e.code() << ": " << e.what() << '\n';
    return errc_info(e.errc()).exit_code;
  } catch (const std::exception &e) {
    err << "error: internal: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace avarc::cli
