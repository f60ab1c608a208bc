#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <regex>

#include <unistd.h>

#include "avarc/congraph/linear_form.hpp"
#include "avarc/core/text.hpp"

namespace avarc::testing {

using workspace::ResourceKind;
using workspace::ResourceRef;

std::string werner_metadata_text() {
  return "Profil: Schema_Entretien\n"
         "Nom_Invité: Michael Werner\n"
         "Appartenance_Invité: Ecole des Hautes Etudes en Sciences Sociales (EHESS) et "
         "Centre National de la Recherche Scientifique (CNRS)\n"
         "Titre: Histoire socio-culturelle des relations franco-allemandes\n"
         "Description:\n"
         "Catégories: :Histoire sociale; :Histoire sociale; Histoire des pratiques sociales "
         "et culturelles; :Histoire et critique littéraires; :Histoire et critique "
         "littéraires; Pratiques littéraires\n"
         "Mots clés: transfert culturel; histoire croisée; histoire des relations France - "
         "Allemagne; nation et nationalisme; politiques d'exportations culturelles; champs "
         "culturels et littéraires; l'histoire des concepts; l'histoire comme un espace des "
         "possibles\n"
         "Lien: <http://e-semiotics.msh-paris.fr/opales/colloques/colconv/entretien/"
         "introduction.asp?idcol=19>\n"
         "Durée: environ 10 heures\n"
         "Date: 16/07/2002\n"
         "Lieu: Maison des Sciences de l'Homme à Paris\n"
         "Responsable_Entretien: Peter Stockinger (ESCoM)\n"
         "Réalisateur: Charles Biljetina (ESCoM)\n"
         "Auteur: ESCoM - MSH\n"
         "Créé le: 08/05/2003\n"
         "Taille: 138,11 Ko\n";
}

namespace {

template <class T>
const T &pick(Rng &rng, const std::vector<T> &v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool chance(Rng &rng, double p) { return std::bernoulli_distribution(p)(rng); }

int uniform(Rng &rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

ontology::ThemeOntology random_ontology(Rng &rng, int themes, int relations) {
  auto o = ontology::make_ontology(OntologyId("ont-rand"), "random", UserId("u0"),
                                   ThemeId("T0"), Timestamp{});
  std::vector<ThemeId> ids{o.root};
  for (int i = 1; i <= themes; ++i) {
    ontology::Theme t;
    t.id = ThemeId("T" + std::to_string(i));
    t.name = t.id.value;
    t.category = static_cast<ontology::ThemeCategory>(uniform(rng, 0, 2));
    t.parents.insert(pick(rng, ids));
    if (ids.size() > 2 && chance(rng, 0.3))
      t.parents.insert(pick(rng, ids));
    ontology::add_theme(o, t);
    ids.push_back(t.id);
  }
  for (int i = 1; i <= relations; ++i) {
    ontology::RelationType r;
    r.id = RelationTypeId("r" + std::to_string(i));
    r.name = r.id.value;
    r.category = static_cast<ontology::RelationCategory>(uniform(rng, 0, 4));
    r.domain = chance(rng, 0.33) ? pick(rng, ids) : o.root;
    r.range = chance(rng, 0.33) ? pick(rng, ids) : o.root;
    ontology::add_relation(o, r);
  }
  return o;
}

congraph::ConceptualGraph random_graph(Rng &rng, const ontology::ThemeOntology &o,
                                       int max_nodes, int max_arcs,
                                       const std::vector<std::string> &referents) {
  std::vector<ThemeId> themes;
  for (const auto &[id, t] : o.themes)
    themes.push_back(id);
  std::vector<RelationTypeId> relations;
  for (const auto &[id, r] : o.relations)
    relations.push_back(id);

  congraph::ConceptualGraph g;
  g.ontology = o.id;
  int n = uniform(rng, 1, max_nodes);
  for (int i = 0; i < n; ++i) {
    congraph::ConceptNode node;
    node.label = "n" + std::to_string(i + 1);
    node.theme = pick(rng, themes);
    if (!referents.empty()) {
      const auto &ref = pick(rng, referents);
      if (!ref.empty())
        node.referent = ref;
    }
    g.nodes.push_back(node);
  }
  int arcs = relations.empty() ? 0 : uniform(rng, 0, max_arcs);
  for (int tries = 0; tries < 20 * arcs + 20 && static_cast<int>(g.arcs.size()) < arcs;
       ++tries) {
    const auto &rel = *o.relation(pick(rng, relations));
    const auto &src = pick(rng, g.nodes);
    const auto &dst = pick(rng, g.nodes);
    if (!oracle_subsumes(o, rel.domain, src.theme) || !oracle_subsumes(o, rel.range, dst.theme))
      continue;
    congraph::RelationArc arc{rel.id, src.label, dst.label};
    if (std::find(g.arcs.begin(), g.arcs.end(), arc) == g.arcs.end())
      g.arcs.push_back(arc);
  }
  congraph::normalize(g);
  return g;
}

bool oracle_subsumes(const ontology::ThemeOntology &o, const ThemeId &ancestor,
                     const ThemeId &descendant) {
  std::vector<ThemeId> stack{descendant};
  std::set<ThemeId> seen;
  while (!stack.empty()) {
    auto t = stack.back();
    stack.pop_back();
    if (t == ancestor)
      return true;
    if (!seen.insert(t).second)
      continue;
    auto it = o.themes.find(t);
    if (it != o.themes.end())
      for (const auto &p : it->second.parents)
        stack.push_back(p);
  }
  return false;
}

std::vector<std::vector<std::string>> oracle_projections(
    const congraph::ConceptualGraph &query, const congraph::ConceptualGraph &target,
    const ontology::ThemeOntology &o) {
  std::vector<std::vector<std::string>> out;
  std::vector<const congraph::ConceptNode *> q;
  for (const auto &n : query.nodes)
    q.push_back(&n);
  std::sort(q.begin(), q.end(), [](auto *a, auto *b) { return a->label < b->label; });
  const std::size_t qn = q.size(), tn = target.nodes.size();
  if (tn == 0)
    return out;
  std::set<std::tuple<std::string, std::string, std::string>> target_arcs;
  for (const auto &a : target.arcs)
    target_arcs.emplace(a.relation.value, a.source, a.target);

  // Odometer over tn^qn assignments.
  std::vector<std::size_t> pos(qn, 0);
  while (true) {
    std::map<std::string, const congraph::ConceptNode *> image;
    bool ok = true;
    for (std::size_t i = 0; i < qn && ok; ++i) {
      const auto &t = target.nodes[pos[i]];
      image[q[i]->label] = &t;
      ok = oracle_subsumes(o, q[i]->theme, t.theme) &&
           (!q[i]->referent || (t.referent && *t.referent == *q[i]->referent));
    }
    for (std::size_t k = 0; k < query.arcs.size() && ok; ++k) {
      const auto &a = query.arcs[k];
      ok = target_arcs.contains(
          {a.relation.value, image.at(a.source)->label, image.at(a.target)->label});
    }
    if (ok) {
      std::vector<std::string> row;
      for (std::size_t i = 0; i < qn; ++i)
        row.push_back(target.nodes[pos[i]].label);
      out.push_back(row);
    }
    std::size_t i = 0;
    while (i < qn && ++pos[i] == tn)
      pos[i++] = 0;
    if (i == qn)
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::pair<UserId, Visibility> owner_and_visibility(const State &s, const ResourceRef &ref) {
  switch (ref.kind) {
    case ResourceKind::ontology: {
      const auto &x = s.ontologies.at(OntologyId(ref.id));
      return {x.owner, x.visibility};
    }
    case ResourceKind::schema: {
      const auto &x = s.schemas.at(SchemaId(ref.id));
      return {x.owner, x.visibility};
    }
    case ResourceKind::graph: {
      const auto &x = s.graphs.at(GraphId(ref.id));
      return {x.owner, x.visibility};
    }
    case ResourceKind::segment: {
      const auto &x = s.segments.at(SegmentId(ref.id));
      return {x.owner, x.visibility};
    }
    case ResourceKind::bookmark: {
      const auto &x = s.bookmarks.at(BookmarkId(ref.id));
      return {x.owner, x.visibility};
    }
    case ResourceKind::path: {
      const auto &x = s.paths.at(PathId(ref.id));
      return {x.owner, x.visibility};
    }
    case ResourceKind::annotation: {
      const auto &x = s.annotations.at(AnnotationId(ref.id));
      return {x.author, x.visibility};
    }
  }
  return {};
}

SegmentId segment_of(const State &s, const annotation::Target &t) {
  if (const auto *z = std::get_if<annotation::ZoneTarget>(&t))
    return s.zones.at(z->zone).segment;
  if (const auto *p = std::get_if<annotation::PartTarget>(&t))
    return p->segment;
  return std::get<annotation::SegmentTarget>(t).segment;
}

}  // namespace

bool oracle_can_view(const State &s, const UserId &user, const ResourceRef &ref) {
  auto [owner, vis] = owner_and_visibility(s, ref);
  if (vis.level == Visibility::Level::Public || user == owner)
    return true;
  if (vis.level == Visibility::Level::Private)
    return false;
  for (const auto &[id, w] : s.workspaces)
    if ((id == vis.workspace || w.resources.contains(ref)) && w.members.contains(user))
      return true;
  return false;
}

bool oracle_annotation_visible(const State &s, const UserId &user,
                               const annotation::Annotation &a) {
  if (a.retracted || !oracle_can_view(s, user, {ResourceKind::annotation, a.id.value}) ||
      !oracle_can_view(s, user, {ResourceKind::segment, segment_of(s, a.target).value}))
    return false;
  if (const auto *t = std::get_if<annotation::ThemeBody>(&a.body))
    return oracle_can_view(s, user, {ResourceKind::ontology, t->ontology.value});
  if (const auto *g = std::get_if<annotation::GraphBody>(&a.body))
    return oracle_can_view(s, user, {ResourceKind::graph, g->graph.value});
  if (const auto *v = std::get_if<annotation::ViewpointBody>(&a.body))
    return oracle_can_view(s, user, {ResourceKind::schema, v->instance.schema.value});
  return true;
}

namespace {

std::string part_key(Millis from, Millis to) {
  return std::to_string(from) + "-" + std::to_string(to);
}

}  // namespace

std::set<HitAtom> atoms(const std::vector<search::SearchHit> &hits) {
  std::set<HitAtom> out;
  for (const auto &h : hits) {
    std::string seg = h.segment ? h.segment->value : "";
    std::string part = h.part ? part_key(h.part->first, h.part->second) : "";
    out.emplace(h.event.value, seg, part, "");
    for (const auto &a : h.annotations)
      out.emplace(h.event.value, seg, part, a.value);
  }
  return out;
}

std::set<HitAtom> oracle_keyword(const State &s, const std::string &text, const UserId &user) {
  auto needle = fold_case(text);
  auto has = [&](const std::string &hay) {
    return !hay.empty() && fold_case(hay).find(needle) != std::string::npos;
  };
  std::set<HitAtom> out;
  for (const auto &[id, e] : s.events)
    for (const auto &[field, value] : e.metadata.entries)
      if (has(value))
        out.emplace(id.value, "", "", "");
  for (const auto &[id, seg] : s.segments)
    if (seg.label && has(*seg.label) &&
        oracle_can_view(s, user, {ResourceKind::segment, id.value}))
      out.emplace(s.assets.at(seg.asset).event.value, id.value, "", "");
  for (const auto &[id, a] : s.annotations) {
    if (!oracle_annotation_visible(s, user, a))
      continue;
    bool hit = false;
    if (const auto *n = std::get_if<annotation::NoteBody>(&a.body)) {
      hit = has(n->text);
    } else if (const auto *g = std::get_if<annotation::GraphBody>(&a.body)) {
      const auto &graph = s.graphs.at(g->graph);
      hit = graph.free_text && has(*graph.free_text);
    } else if (const auto *t = std::get_if<annotation::ThemeBody>(&a.body)) {
      hit = has(s.ontologies.at(t->ontology).themes.at(t->theme).name);
    } else if (const auto *v = std::get_if<annotation::ViewpointBody>(&a.body)) {
      const auto &schema = s.schemas.at(v->instance.schema);
      for (const auto &f : schema.features)
        if (std::holds_alternative<viewpoint::FreeText>(f.kind)) {
          auto it = v->instance.values.find(f.name);
          if (it != v->instance.values.end())
            if (const auto *str = std::get_if<std::string>(&it->second))
              hit = hit || has(*str);
        }
    }
    if (!hit)
      continue;
    auto seg_id = segment_of(s, a.target);
    std::string part;
    if (const auto *p = std::get_if<annotation::PartTarget>(&a.target))
      part = part_key(p->from_ms, p->to_ms);
    const auto &event = s.assets.at(s.segments.at(seg_id).asset).event.value;
    out.emplace(event, seg_id.value, part, "");
    out.emplace(event, seg_id.value, part, id.value);
  }
  return out;
}

namespace {

// Generates one random command against the current state.
class CommandMaker {
 public:
  CommandMaker(const State &s, Rng &rng, Engine &engine, int users)
      : s_(s), rng_(rng), engine_(engine) {
    for (int i = 0; i < users; ++i)
      users_.emplace_back("u" + std::to_string(i));
  }

  cmd::Command make() {
    for (;;) {
      switch (uniform(rng_, 0, 24)) {
        case 0:
        case 1: return event();
        case 2: if (!s_.events.empty()) return asset(); break;
        case 3:
        case 4: if (!s_.assets.empty()) return segment(); break;
        case 5: if (!s_.segments.empty()) return zone(); break;
        case 6: return cmd::CreateOntology{"onto", user(), visibility(), now()};
        case 7:
        case 8: if (!s_.ontologies.empty()) return theme(); break;
        case 9: if (!s_.ontologies.empty()) return relation(); break;
        case 10: if (!s_.ontologies.empty()) return graph(); break;
        case 11: return schema();
        case 12:
        case 13:
        case 14: if (!s_.segments.empty()) return annotate(); break;
        case 15: if (!s_.events.empty()) return bookmark(); break;
        case 16: return cmd::CreateWorkspace{"ws", user(), now()};
        case 17:
          if (!s_.workspaces.empty()) {
            const auto &w = any(s_.workspaces);
            return cmd::AddMember{w.id, user(), chance(rng_, 0.8) ? w.owner : user()};
          }
          break;
        case 18: if (!s_.workspaces.empty()) return share(); break;
        case 19: return set_visibility();
        case 20: return cmd::CreatePath{"path", user(), visibility(), now()};
        case 21:
        case 22: if (!s_.paths.empty() && !s_.segments.empty()) return path_node(); break;
        case 23: if (!s_.paths.empty()) return path_edge(); break;
        case 24:
          if (!s_.annotations.empty()) {
            const auto &a = any(s_.annotations);
            return cmd::RetractAnnotation{a.id, chance(rng_, 0.8) ? a.author : user()};
          }
          break;
      }
    }
  }

 private:
  template <class Map>
  const typename Map::mapped_type &any(const Map &m) {
    auto it = m.begin();
    std::advance(it, uniform(rng_, 0, static_cast<int>(m.size()) - 1));
    return it->second;
  }

  UserId user() { return pick(rng_, users_); }
  Timestamp now() { return engine_.now(); }

  Visibility visibility() {
    int r = uniform(rng_, 0, 3);
    if (r == 0)
      return Visibility::everyone();
    if (r == 1 && !s_.workspaces.empty())
      return Visibility::group(any(s_.workspaces).id);
    return Visibility::personal();
  }

  std::string word() {
    static const std::vector<std::string> words{
        "histoire", "Croisée", "transfert", "culture", "nation", "Usine", "ouvrier",
        "textile", "urbanisation", "archive"};
    return pick(rng_, words);
  }

  cmd::Command event() {
    static const std::vector<std::string> kinds{"interview", "seminar", "symposium",
                                                "workshop", "lab_life"};
    cmd::RegisterEvent e{pick(rng_, kinds), {}, now()};
    e.metadata.profile = "Schema_Entretien";
    for (int i = 0, n = uniform(rng_, 0, 3); i < n; ++i)
      e.metadata.entries.emplace_back("F" + std::to_string(i), word() + " " + word());
    return e;
  }

  cmd::Command asset() {
    return cmd::AddAsset{any(s_.events).id, "media/" + word() + ".mp4",
                         chance(rng_, 0.2) ? 0 : uniform(rng_, 60, 600) * 1000, "MPEG 1"};
  }

  cmd::Command segment() {
    const auto &a = any(s_.assets);
    Millis dur = a.duration_ms ? a.duration_ms : 600000;
    Millis start = uniform(rng_, 0, static_cast<int>(dur / 1000) - 1) * 1000;
    Millis end = start + uniform(rng_, 1, 120) * 1000;
    std::optional<std::string> label;
    if (chance(rng_, 0.5))
      label = word();
    return cmd::CreateSegment{a.id, start, end, label, user(), visibility(), now()};
  }

  cmd::Command zone() {
    const auto &seg = any(s_.segments);
    return cmd::CreateZone{seg.id, (seg.start_ms + seg.end_ms) / 2, {0.1, 0.1, 0.5, 0.5},
                           chance(rng_, 0.8) ? seg.owner : user()};
  }

  cmd::Command theme() {
    const auto &o = any(s_.ontologies);
    std::vector<std::string> parents;
    if (chance(rng_, 0.7))
      parents.push_back(any(o.themes).id.value);
    return cmd::AddTheme{o.id, word() + std::to_string(uniform(rng_, 0, 99)), "notional", "",
                         parents, chance(rng_, 0.85) ? o.owner : user()};
  }

  cmd::Command relation() {
    const auto &o = any(s_.ontologies);
    return cmd::AddRelationType{o.id, "rel" + std::to_string(uniform(rng_, 0, 20)),
                                "classification", "", "", "",
                                chance(rng_, 0.85) ? o.owner : user()};
  }

  cmd::Command graph() {
    const auto &o = any(s_.ontologies);
    auto g = random_graph(rng_, o, 3, 2, {"", "", "France"});
    std::optional<std::string> free_text;
    if (chance(rng_, 0.5))
      free_text = word();
    return cmd::CreateGraph{o.id, congraph::print_graph(g, o), std::nullopt, free_text,
                            chance(rng_, 0.7) ? o.owner : user(), visibility(), now()};
  }

  cmd::Command schema() {
    std::vector<viewpoint::FeatureDef> features{
        {"importance", viewpoint::Ordinal{1, 5}, false, ""},
        {"remark", viewpoint::FreeText{}, false, ""}};
    return cmd::DefineSchema{"vp", features, user(), visibility(), now()};
  }

  annotation::Target target() {
    const auto &seg = any(s_.segments);
    if (!s_.zones.empty() && chance(rng_, 0.15))
      return annotation::ZoneTarget{any(s_.zones).id};
    if (chance(rng_, 0.4) && seg.end_ms - seg.start_ms >= 2)
      return annotation::PartTarget{seg.id, seg.start_ms, (seg.start_ms + seg.end_ms) / 2};
    return annotation::SegmentTarget{seg.id};
  }

  cmd::Command annotate() {
    auto t = target();
    auto u = user();
    switch (uniform(rng_, 0, 3)) {
      case 0:
        if (!s_.ontologies.empty()) {
          const auto &o = any(s_.ontologies);
          return cmd::AttachTheme{t, o.id, any(o.themes).id.value, u, visibility(), now()};
        }
        break;
      case 1:
        if (!s_.graphs.empty())
          return cmd::AttachGraph{t, any(s_.graphs).id, u, visibility(), now()};
        break;
      case 2:
        if (!s_.schemas.empty())
          return cmd::AttachViewpoint{t, any(s_.schemas).id,
                                      Json{{"importance", uniform(rng_, 1, 5)},
                                           {"remark", word()}},
                                      u, visibility(), now()};
        break;
      default: break;
    }
    return cmd::AttachNote{t, word() + " " + word(), u, visibility(), now()};
  }

  cmd::Command bookmark() {
    return cmd::AddBookmark{any(s_.events).id, word(), user(), visibility(), now()};
  }

  std::pair<std::string, std::string> resource() {
    std::vector<std::pair<std::string, std::string>> refs;
    for (const auto &[id, x] : s_.ontologies) refs.emplace_back("ontology", id.value);
    for (const auto &[id, x] : s_.schemas) refs.emplace_back("schema", id.value);
    for (const auto &[id, x] : s_.graphs) refs.emplace_back("graph", id.value);
    for (const auto &[id, x] : s_.segments) refs.emplace_back("segment", id.value);
    for (const auto &[id, x] : s_.bookmarks) refs.emplace_back("bookmark", id.value);
    for (const auto &[id, x] : s_.paths) refs.emplace_back("path", id.value);
    for (const auto &[id, x] : s_.annotations) refs.emplace_back("annotation", id.value);
    if (refs.empty())
      return {"ontology", "missing"};
    return pick(rng_, refs);
  }

  UserId owner_of(const std::pair<std::string, std::string> &r) {
    try {
      return ownership(s_, {workspace::parse_resource_kind(r.first), r.second}).owner;
    } catch (const Error &) {
      return user();
    }
  }

  cmd::Command share() {
    auto r = resource();
    return cmd::ShareResource{any(s_.workspaces).id, r.first, r.second,
                              chance(rng_, 0.85) ? owner_of(r) : user()};
  }

  cmd::Command set_visibility() {
    auto r = resource();
    return cmd::SetVisibility{r.first, r.second, visibility(),
                              chance(rng_, 0.85) ? owner_of(r) : user()};
  }

  cmd::Command path_node() {
    const auto &p = any(s_.paths);
    return cmd::AddPathNode{p.id, "", any(s_.segments).id, word(),
                            chance(rng_, 0.9) ? p.owner : user()};
  }

  cmd::Command path_edge() {
    const auto &p = any(s_.paths);
    if (p.nodes.empty())
      return cmd::SetPathEntry{p.id, "n1", p.owner};
    if (chance(rng_, 0.3))
      return cmd::SetPathEntry{p.id, pick(rng_, p.nodes).id, p.owner};
    return cmd::AddPathTransition{p.id, pick(rng_, p.nodes).id, pick(rng_, p.nodes).id, "",
                                  p.owner};
  }

  const State &s_;
  Rng &rng_;
  Engine &engine_;
  std::vector<UserId> users_;
};

}  // namespace

int run_workload(Engine &engine, Rng &rng, const WorkloadOptions &options) {
  int accepted = 0, batches = 0;
  {
    std::vector<cmd::Command> users;
    for (int i = 0; i < options.users; ++i) {
      auto id = "u" + std::to_string(i);
      if (!engine.snapshot()->state.users.contains(UserId(id)))
        users.push_back(cmd::AddUser{UserId(id), "User " + std::to_string(i), ""});
    }
    if (!users.empty()) {
      engine.commit(users);
      accepted += static_cast<int>(users.size());
      ++batches;
    }
  }
  int attempts = 0;
  while (accepted < options.operations) {
    if (++attempts > options.operations * 200)
      throw std::runtime_error("workload generator made no progress");
    auto snap = engine.snapshot();
    CommandMaker maker(snap->state, rng, engine, options.users);
    std::vector<cmd::Command> batch{maker.make()};
    if (chance(rng, options.batch_chance))
      for (int i = 0, n = uniform(rng, 1, 2); i < n; ++i)
        batch.push_back(maker.make());
    if (accepted + static_cast<int>(batch.size()) > options.operations)
      batch.resize(options.operations - accepted);
    try {
      engine.commit(batch);
      accepted += static_cast<int>(batch.size());
      ++batches;
    } catch (const Error &) {
      // rejected as a whole; try something else
    }
  }
  return batches;
}

std::filesystem::path scratch_dir(const std::string &tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("avarc-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::string> hrefs(const std::string &html) {
  static const std::regex re("href=\"([^\"]*)\"");
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(html.begin(), html.end(), re); it != std::sregex_iterator();
       ++it)
    out.push_back((*it)[1]);
  return out;
}

}  // namespace avarc::testing
