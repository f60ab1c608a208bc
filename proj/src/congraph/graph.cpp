#include "avarc/congraph/graph.hpp"

#include <algorithm>
#include <set>

namespace avarc::congraph {

const ConceptNode *ConceptualGraph::node(std::string_view label) const {
  auto it = std::lower_bound(
      nodes.begin(), nodes.end(), label,
      [](const ConceptNode &n, std::string_view l) { return n.label < l; });
  if (it != nodes.end() && it->label == label)
    return &*it;
  // Not normalized yet.
  for (const auto &n : nodes)
    if (n.label == label)
      return &n;
  return nullptr;
}

void normalize(ConceptualGraph &g) {
  std::stable_sort(g.nodes.begin(), g.nodes.end(),
                   [](const ConceptNode &a, const ConceptNode &b) {
                     return a.label < b.label;
                   });
  std::sort(g.arcs.begin(), g.arcs.end());
  g.arcs.erase(std::unique(g.arcs.begin(), g.arcs.end()), g.arcs.end());
}

bool structurally_equal(const ConceptualGraph &a, const ConceptualGraph &b) {
  auto x = a, y = b;
  normalize(x);
  normalize(y);
  return x.ontology == y.ontology && x.nodes == y.nodes && x.arcs == y.arcs;
}

bool is_node_label(std::string_view s) {
  if (s.empty())
    return false;
  for (char c : s)
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
          (c >= '0' && c <= '9') || c == '_'))
      return false;
  return true;
}

std::vector<Violation> validate_graph(const ConceptualGraph &g,
                                      const ontology::ThemeOntology &o) {
  std::vector<Violation> out;
  if (g.ontology != o.id)
    out.push_back({"graph.ontology_mismatch", "graph is bound to ontology " +
                                                  g.ontology.value + ", not " +
                                                  o.id.value});
  if (g.nodes.empty())
    out.push_back({"graph.empty", "a conceptual graph needs at least one node"});

  std::set<std::string_view> labels;
  for (const auto &n : g.nodes) {
    if (!is_node_label(n.label))
      out.push_back({"node.bad_label", "invalid node label '" + n.label + "'"});
    if (!labels.insert(n.label).second)
      out.push_back({"node.duplicate_label", "node label '" + n.label +
                                                 "' appears more than once"});
    if (o.theme(n.theme) == nullptr)
      out.push_back({"node.unknown_theme", "node '" + n.label +
                                               "' uses unknown theme " +
                                               n.theme.value});
    if (n.referent && n.referent->empty())
      out.push_back({"node.empty_referent",
                     "node '" + n.label + "' has an empty individual referent"});
  }

  for (const auto &a : g.arcs) {
    const auto *rel = o.relation(a.relation);
    const auto *src = g.node(a.source);
    const auto *dst = g.node(a.target);
    if (rel == nullptr)
      out.push_back({"arc.unknown_relation",
                     "arc uses unknown relation " + a.relation.value});
    if (src == nullptr)
      out.push_back({"arc.dangling_source",
                     "arc source '" + a.source + "' is not a node"});
    if (dst == nullptr)
      out.push_back({"arc.dangling_target",
                     "arc target '" + a.target + "' is not a node"});
    if (rel == nullptr)
      continue;
    if (src != nullptr && o.theme(src->theme) != nullptr &&
        !ontology::subsumes(o, rel->domain, src->theme))
      out.push_back({"arc.domain_mismatch",
                     "source '" + a.source + "' is outside the domain of '" +
                         rel->name + "'"});
    if (dst != nullptr && o.theme(dst->theme) != nullptr &&
        !ontology::subsumes(o, rel->range, dst->theme))
      out.push_back({"arc.range_mismatch",
                     "target '" + a.target + "' is outside the range of '" +
                         rel->name + "'"});
  }
  return out;
}

void to_json(Json &j, const ConceptNode &n) {
  j = Json{{"label", n.label},
           {"theme_id", n.theme},
           {"referent", n.referent ? Json(*n.referent) : Json()}};
}

void from_json(const Json &j, ConceptNode &n) {
  n.label = j.at("label").get<std::string>();
  n.theme = j.at("theme_id").get<ThemeId>();
  if (j.contains("referent") && !j.at("referent").is_null())
    n.referent = j.at("referent").get<std::string>();
  else
    n.referent.reset();
}

void to_json(Json &j, const RelationArc &a) {
  j = Json{{"relation_type_id", a.relation},
           {"source", a.source},
           {"target", a.target}};
}

void from_json(const Json &j, RelationArc &a) {
  a.relation = j.at("relation_type_id").get<RelationTypeId>();
  a.source = j.at("source").get<std::string>();
  a.target = j.at("target").get<std::string>();
}

void to_json(Json &j, const ConceptualGraph &g) {
  j = Json{{"id", g.id},
           {"ontology_id", g.ontology},
           {"name", g.name ? Json(*g.name) : Json()},
           {"free_text", g.free_text ? Json(*g.free_text) : Json()},
           {"nodes", g.nodes},
           {"arcs", g.arcs},
           {"owner", g.owner},
           {"visibility", g.visibility},
           {"created_at", format_timestamp(g.created_at)}};
}

void from_json(const Json &j, ConceptualGraph &g) {
  g.id = j.at("id").get<GraphId>();
  g.ontology = j.at("ontology_id").get<OntologyId>();
  g.name = j.contains("name") && !j.at("name").is_null()
               ? std::optional(j.at("name").get<std::string>())
               : std::nullopt;
  g.free_text = j.contains("free_text") && !j.at("free_text").is_null()
                    ? std::optional(j.at("free_text").get<std::string>())
                    : std::nullopt;
  g.nodes = j.at("nodes").get<std::vector<ConceptNode>>();
  g.arcs = j.at("arcs").get<std::vector<RelationArc>>();
  g.owner = j.at("owner").get<UserId>();
  g.visibility = j.at("visibility").get<Visibility>();
  g.created_at = parse_timestamp(j.at("created_at").get<std::string>());
}

}  // namespace avarc::congraph
