#include "avarc/ontology/ontology.hpp"

#include <array>
#include <deque>
#include <functional>

namespace avarc::ontology {
namespace {

constexpr std::array<std::pair<ThemeCategory, std::string_view>, 3>
    kThemeCategories = {{
        {ThemeCategory::notional, "notional"},
        {ThemeCategory::rhetorical, "rhetorical"},
        {ThemeCategory::contextual, "contextual"},
    }};

constexpr std::array<std::pair<RelationCategory, std::string_view>, 5>
    kRelationCategories = {{
        {RelationCategory::classification, "classification"},
        {RelationCategory::practical_inference, "practical_inference"},
        {RelationCategory::epistemic_inference, "epistemic_inference"},
        {RelationCategory::modalisation_grading, "modalisation_grading"},
        {RelationCategory::localization, "localization"},
    }};

// Walks parent links upward from `start`; tolerates dangling ids and cycles.
std::set<ThemeId> ancestor_closure(const ThemeOntology &o, const ThemeId &start) {
  std::set<ThemeId> seen{start};
  std::deque<ThemeId> queue{start};
  while (!queue.empty()) {
    auto current = queue.front();
    queue.pop_front();
    const Theme *t = o.theme(current);
    if (t == nullptr)
      continue;
    for (const auto &p : t->parents)
      if (seen.insert(p).second)
        queue.push_back(p);
  }
  return seen;
}

}  // namespace

std::string_view to_string(ThemeCategory c) {
  for (auto [k, name] : kThemeCategories)
    if (k == c)
      return name;
  return "notional";
}

ThemeCategory parse_theme_category(std::string_view text) {
  for (auto [k, name] : kThemeCategories)
    if (name == text)
      return k;
  throw Error(Errc::validation,
              "unknown theme category '" + std::string(text) + "'");
}

std::string_view to_string(RelationCategory c) {
  for (auto [k, name] : kRelationCategories)
    if (k == c)
      return name;
  return "classification";
}

RelationCategory parse_relation_category(std::string_view text) {
  for (auto [k, name] : kRelationCategories)
    if (name == text)
      return k;
  throw Error(Errc::validation,
              "unknown relation category '" + std::string(text) + "'");
}

const Theme *ThemeOntology::theme(const ThemeId &id) const {
  auto it = themes.find(id);
  return it == themes.end() ? nullptr : &it->second;
}

const Theme *ThemeOntology::theme_named(std::string_view n) const {
  for (const auto &[id, t] : themes)
    if (t.name == n)
      return &t;
  return nullptr;
}

const RelationType *ThemeOntology::relation(const RelationTypeId &id) const {
  auto it = relations.find(id);
  return it == relations.end() ? nullptr : &it->second;
}

const RelationType *ThemeOntology::relation_named(std::string_view n) const {
  for (const auto &[id, r] : relations)
    if (r.name == n)
      return &r;
  return nullptr;
}

ThemeOntology make_ontology(OntologyId id, std::string name, UserId owner,
                            ThemeId root_id, Timestamp created_at) {
  if (name.empty())
    throw Error(Errc::validation, "ontology name must not be empty");
  ThemeOntology o;
  o.id = std::move(id);
  o.name = std::move(name);
  o.owner = std::move(owner);
  o.root = root_id;
  o.created_at = created_at;
  o.themes.emplace(root_id, Theme{root_id, std::string(kRootThemeName),
                                  ThemeCategory::notional,
                                  "The most general theme.", {}});
  return o;
}

ThemeId resolve_theme(const ThemeOntology &o, std::string_view ref) {
  ThemeId id{std::string(ref)};
  if (o.theme(id) != nullptr)
    return id;
  if (const Theme *t = o.theme_named(ref))
    return t->id;
  throw Error(Errc::not_found,
              "no theme '" + std::string(ref) + "' in ontology " + o.id.value,
              Json{{"theme", ref}, {"ontology_id", o.id}});
}

RelationTypeId resolve_relation(const ThemeOntology &o, std::string_view ref) {
  RelationTypeId id{std::string(ref)};
  if (o.relation(id) != nullptr)
    return id;
  if (const RelationType *r = o.relation_named(ref))
    return r->id;
  throw Error(Errc::not_found,
              "no relation type '" + std::string(ref) + "' in ontology " +
                  o.id.value,
              Json{{"relation", ref}, {"ontology_id", o.id}});
}

void add_theme(ThemeOntology &o, Theme theme) {
  if (theme.name.empty())
    throw Error(Errc::validation, "theme name must not be empty");
  if (theme.parents.contains(theme.id))
    throw Error(Errc::ontology_cycle,
                "theme '" + theme.name + "' cannot be its own parent");
  if (o.theme_named(theme.name) != nullptr)
    throw Error(Errc::duplicate_name,
                "theme '" + theme.name + "' already exists",
                Json{{"name", theme.name}});
  if (o.themes.contains(theme.id))
    throw Error(Errc::validation, "theme id already in use: " + theme.id.value);
  for (const auto &p : theme.parents)
    if (o.theme(p) == nullptr)
      throw Error(Errc::not_found, "unknown parent theme " + p.value,
                  Json{{"theme", p}});
  if (theme.parents.empty())
    theme.parents.insert(o.root);
  auto id = theme.id;
  o.themes.emplace(std::move(id), std::move(theme));
}

void add_parent(ThemeOntology &o, const ThemeId &child, const ThemeId &parent) {
  if (o.theme(child) == nullptr)
    throw Error(Errc::not_found, "unknown theme " + child.value);
  if (o.theme(parent) == nullptr)
    throw Error(Errc::not_found, "unknown theme " + parent.value);
  if (child == o.root)
    throw Error(Errc::validation, "the root theme cannot have parents");
  if (subsumes(o, child, parent))
    throw Error(Errc::ontology_cycle,
                "linking " + o.theme(child)->name + " under " +
                    o.theme(parent)->name + " would create a cycle",
                Json{{"child", child}, {"parent", parent}});
  auto &parents = o.themes.at(child).parents;
  parents.insert(parent);
  // An explicit parent supersedes the implicit root link.
  if (parent != o.root)
    parents.erase(o.root);
}

void add_relation(ThemeOntology &o, RelationType relation) {
  if (relation.name.empty())
    throw Error(Errc::validation, "relation name must not be empty");
  if (o.relation_named(relation.name) != nullptr)
    throw Error(Errc::duplicate_name,
                "relation type '" + relation.name + "' already exists",
                Json{{"name", relation.name}});
  if (o.theme(relation.domain) == nullptr)
    throw Error(Errc::not_found, "unknown domain theme " + relation.domain.value,
                Json{{"theme", relation.domain}});
  if (o.theme(relation.range) == nullptr)
    throw Error(Errc::not_found, "unknown range theme " + relation.range.value,
                Json{{"theme", relation.range}});
  auto id = relation.id;
  o.relations.emplace(std::move(id), std::move(relation));
}

bool subsumes(const ThemeOntology &o, const ThemeId &ancestor,
              const ThemeId &descendant) {
  if (ancestor == descendant)
    return true;
  return ancestor_closure(o, descendant).contains(ancestor);
}

std::set<ThemeId> descendants(const ThemeOntology &o, const ThemeId &theme) {
  std::map<ThemeId, std::vector<ThemeId>> children;
  for (const auto &[id, t] : o.themes)
    for (const auto &p : t.parents)
      children[p].push_back(id);
  std::set<ThemeId> out{theme};
  std::deque<ThemeId> queue{theme};
  while (!queue.empty()) {
    auto current = queue.front();
    queue.pop_front();
    auto it = children.find(current);
    if (it == children.end())
      continue;
    for (const auto &c : it->second)
      if (out.insert(c).second)
        queue.push_back(c);
  }
  return out;
}

int depth(const ThemeOntology &o, const ThemeId &theme) {
  std::map<ThemeId, int> memo;
  std::set<ThemeId> active;
  std::function<int(const ThemeId &)> visit = [&](const ThemeId &id) -> int {
    if (auto it = memo.find(id); it != memo.end())
      return it->second;
    const Theme *t = o.theme(id);
    if (t == nullptr || t->parents.empty() || !active.insert(id).second)
      return 0;
    int best = 0;
    for (const auto &p : t->parents)
      best = std::max(best, visit(p) + 1);
    active.erase(id);
    memo[id] = best;
    return best;
  };
  return visit(theme);
}

std::optional<std::vector<ThemeId>> topological_order(const ThemeOntology &o) {
  std::map<ThemeId, int> pending;
  std::map<ThemeId, std::vector<ThemeId>> children;
  for (const auto &[id, t] : o.themes) {
    int n = 0;
    for (const auto &p : t.parents) {
      if (o.theme(p) == nullptr)
        continue;
      children[p].push_back(id);
      ++n;
    }
    pending[id] = n;
  }
  std::deque<ThemeId> ready;
  for (const auto &[id, n] : pending)
    if (n == 0)
      ready.push_back(id);
  std::vector<ThemeId> order;
  while (!ready.empty()) {
    auto id = ready.front();
    ready.pop_front();
    order.push_back(id);
    for (const auto &c : children[id])
      if (--pending[c] == 0)
        ready.push_back(c);
  }
  if (order.size() != o.themes.size())
    return std::nullopt;
  return order;
}

std::vector<Violation> validate_ontology(const ThemeOntology &o) {
  std::vector<Violation> out;
  const Theme *root = o.theme(o.root);
  if (root == nullptr) {
    out.push_back({"root.missing", "root theme " + o.root.value + " is absent"});
  } else if (!root->parents.empty()) {
    out.push_back({"root.has_parents", "the root theme must not have parents"});
  }

  std::set<std::string_view> names;
  for (const auto &[id, t] : o.themes) {
    if (t.id != id)
      out.push_back({"theme.id_mismatch", "theme keyed " + id.value +
                                              " carries id " + t.id.value});
    if (t.name.empty())
      out.push_back({"theme.empty_name", "theme " + id.value + " has no name"});
    else if (!names.insert(t.name).second)
      out.push_back({"theme.duplicate_name", "theme name '" + t.name +
                                                 "' is used more than once"});
    if (id != o.root && t.parents.empty())
      out.push_back({"theme.no_parent",
                     "theme '" + t.name + "' is not linked under any theme"});
    for (const auto &p : t.parents)
      if (o.theme(p) == nullptr)
        out.push_back({"theme.dangling_parent", "theme '" + t.name +
                                                    "' names missing parent " +
                                                    p.value});
  }
  if (!topological_order(o))
    out.push_back({"theme.cycle", "the is-a links contain a cycle"});

  std::set<std::string_view> relation_names;
  for (const auto &[id, r] : o.relations) {
    if (r.name.empty())
      out.push_back({"relation.empty_name", "relation " + id.value + " has no name"});
    else if (!relation_names.insert(r.name).second)
      out.push_back({"relation.duplicate_name", "relation name '" + r.name +
                                                    "' is used more than once"});
    if (o.theme(r.domain) == nullptr)
      out.push_back({"relation.dangling_domain", "relation '" + r.name +
                                                     "' names missing domain " +
                                                     r.domain.value});
    if (o.theme(r.range) == nullptr)
      out.push_back({"relation.dangling_range", "relation '" + r.name +
                                                    "' names missing range " +
                                                    r.range.value});
  }
  return out;
}

Taxonomy::Taxonomy(const ThemeOntology &o) {
  for (const auto &[id, t] : o.themes)
    ancestors_.emplace(id, ancestor_closure(o, id));
}

bool Taxonomy::subsumes(const ThemeId &ancestor,
                        const ThemeId &descendant) const {
  if (ancestor == descendant)
    return true;
  auto it = ancestors_.find(descendant);
  return it != ancestors_.end() && it->second.contains(ancestor);
}

const std::set<ThemeId> &Taxonomy::ancestors(const ThemeId &theme) const {
  static const std::set<ThemeId> kEmpty;
  auto it = ancestors_.find(theme);
  return it == ancestors_.end() ? kEmpty : it->second;
}

void to_json(Json &j, const Theme &t) {
  j = Json{{"id", t.id},
           {"name", t.name},
           {"category", to_string(t.category)},
           {"definition", t.definition},
           {"parents", t.parents}};
}

void from_json(const Json &j, Theme &t) {
  t.id = j.at("id").get<ThemeId>();
  t.name = j.at("name").get<std::string>();
  t.category = parse_theme_category(j.at("category").get<std::string>());
  t.definition = j.value("definition", std::string());
  t.parents = j.at("parents").get<std::set<ThemeId>>();
}

void to_json(Json &j, const RelationType &r) {
  j = Json{{"id", r.id},
           {"name", r.name},
           {"category", to_string(r.category)},
           {"definition", r.definition},
           {"domain", r.domain},
           {"range", r.range}};
}

void from_json(const Json &j, RelationType &r) {
  r.id = j.at("id").get<RelationTypeId>();
  r.name = j.at("name").get<std::string>();
  r.category = parse_relation_category(j.at("category").get<std::string>());
  r.definition = j.value("definition", std::string());
  r.domain = j.at("domain").get<ThemeId>();
  r.range = j.at("range").get<ThemeId>();
}

void to_json(Json &j, const ThemeOntology &o) {
  Json themes = Json::array();
  for (const auto &[id, t] : o.themes)
    themes.push_back(t);
  Json relations = Json::array();
  for (const auto &[id, r] : o.relations)
    relations.push_back(r);
  j = Json{{"id", o.id},
           {"name", o.name},
           {"owner", o.owner},
           {"visibility", o.visibility},
           {"root", o.root},
           {"themes", std::move(themes)},
           {"relations", std::move(relations)},
           {"created_at", format_timestamp(o.created_at)}};
}

void from_json(const Json &j, ThemeOntology &o) {
  o.id = j.at("id").get<OntologyId>();
  o.name = j.at("name").get<std::string>();
  o.owner = j.at("owner").get<UserId>();
  o.visibility = j.at("visibility").get<Visibility>();
  o.root = j.at("root").get<ThemeId>();
  o.themes.clear();
  for (const auto &t : j.at("themes")) {
    auto theme = t.get<Theme>();
    auto id = theme.id;
    o.themes.emplace(std::move(id), std::move(theme));
  }
  o.relations.clear();
  for (const auto &r : j.at("relations")) {
    auto rel = r.get<RelationType>();
    auto id = rel.id;
    o.relations.emplace(std::move(id), std::move(rel));
  }
  o.created_at = parse_timestamp(j.at("created_at").get<std::string>());
}

}  // namespace avarc::ontology
