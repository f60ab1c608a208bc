#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avarc/core/error.hpp"
#include "avarc/core/ids.hpp"
#include "avarc/core/json.hpp"
#include "avarc/core/time.hpp"
#include "avarc/core/visibility.hpp"
#include "avarc/ontology/ontology.hpp"

namespace avarc::congraph {

/// [theme: referent] with a graph-local label. An absent referent is the
/// generic marker `*`.
struct ConceptNode {
  std::string label;
  ThemeId theme;
  std::optional<std::string> referent;

  bool is_generic() const { return !referent.has_value(); }
  bool operator==(const ConceptNode &) const = default;
};

struct RelationArc {
  RelationTypeId relation;
  std::string source;
  std::string target;

  auto operator<=>(const RelationArc &) const = default;
  bool operator==(const RelationArc &) const = default;
};

struct ConceptualGraph {
  GraphId id;
  OntologyId ontology;
  std::vector<ConceptNode> nodes;  // sorted by label
  std::vector<RelationArc> arcs;   // sorted, no duplicates
  std::optional<std::string> name;
  std::optional<std::string> free_text;
  UserId owner;
  Visibility visibility;
  Timestamp created_at;

  const ConceptNode *node(std::string_view label) const;
};

/// Sorts nodes by label and arcs, dropping duplicate arcs.
void normalize(ConceptualGraph &g);

/// Same nodes (label, theme, referent) and the same arc set.
bool structurally_equal(const ConceptualGraph &a, const ConceptualGraph &b);

std::vector<Violation> validate_graph(const ConceptualGraph &g,
                                      const ontology::ThemeOntology &o);

bool is_node_label(std::string_view s);

void to_json(Json &j, const ConceptNode &n);
void from_json(const Json &j, ConceptNode &n);
void to_json(Json &j, const RelationArc &a);
void from_json(const Json &j, RelationArc &a);
void to_json(Json &j, const ConceptualGraph &g);
void from_json(const Json &j, ConceptualGraph &g);

}  // namespace avarc::congraph
