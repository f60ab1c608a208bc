#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "avarc/core/error.hpp"
#include "avarc/core/ids.hpp"
#include "avarc/core/json.hpp"
#include "avarc/core/time.hpp"
#include "avarc/core/visibility.hpp"

namespace avarc::ontology {

enum class ThemeCategory { notional, rhetorical, contextual };

enum class RelationCategory {
  classification,
  practical_inference,
  epistemic_inference,
  modalisation_grading,
  localization,
};

std::string_view to_string(ThemeCategory c);
ThemeCategory parse_theme_category(std::string_view text);
std::string_view to_string(RelationCategory c);
RelationCategory parse_relation_category(std::string_view text);

inline constexpr std::string_view kRootThemeName = "Thing";

struct Theme {
  ThemeId id;
  std::string name;
  ThemeCategory category = ThemeCategory::notional;
  std::string definition;
  std::set<ThemeId> parents;
};

/// Oriented binary relation. `domain` and `range` are the most general
/// themes its source and target may carry.
struct RelationType {
  RelationTypeId id;
  std::string name;
  RelationCategory category = RelationCategory::classification;
  std::string definition;
  ThemeId domain;
  ThemeId range;
};

struct ThemeOntology {
  OntologyId id;
  std::string name;
  UserId owner;
  Visibility visibility;
  ThemeId root;
  std::map<ThemeId, Theme> themes;
  std::map<RelationTypeId, RelationType> relations;
  Timestamp created_at;

  const Theme *theme(const ThemeId &id) const;
  const Theme *theme_named(std::string_view name) const;
  const RelationType *relation(const RelationTypeId &id) const;
  const RelationType *relation_named(std::string_view name) const;
};

/// A fresh ontology holding only the root theme "Thing".
ThemeOntology make_ontology(OntologyId id, std::string name, UserId owner,
                            ThemeId root_id, Timestamp created_at);

/// Resolves a theme reference given either as an id or as a name.
ThemeId resolve_theme(const ThemeOntology &o, std::string_view ref);
RelationTypeId resolve_relation(const ThemeOntology &o, std::string_view ref);

/// Inserts `theme`. Empty parents default to the root. Throws
/// duplicate_name, ontology_cycle (self-parenting) or not_found.
void add_theme(ThemeOntology &o, Theme theme);

/// Adds an is-a link child -> parent; throws ontology_cycle if the parent is
/// already subsumed by the child.
void add_parent(ThemeOntology &o, const ThemeId &child, const ThemeId &parent);

void add_relation(ThemeOntology &o, RelationType relation);

/// Reflexive-transitive closure of the is-a links.
bool subsumes(const ThemeOntology &o, const ThemeId &ancestor,
              const ThemeId &descendant);

std::set<ThemeId> descendants(const ThemeOntology &o, const ThemeId &theme);

/// Length of the longest is-a chain from the root (root = 0).
int depth(const ThemeOntology &o, const ThemeId &theme);

/// Themes ordered parents-first, or nullopt when the is-a links cycle.
std::optional<std::vector<ThemeId>> topological_order(const ThemeOntology &o);

std::vector<Violation> validate_ontology(const ThemeOntology &o);

/// Precomputed ancestor sets for repeated subsumption tests over one
/// immutable ontology.
class Taxonomy {
 public:
  explicit Taxonomy(const ThemeOntology &o);

  bool subsumes(const ThemeId &ancestor, const ThemeId &descendant) const;
  const std::set<ThemeId> &ancestors(const ThemeId &theme) const;

 private:
  std::map<ThemeId, std::set<ThemeId>> ancestors_;
};

void to_json(Json &j, const Theme &t);
void from_json(const Json &j, Theme &t);
void to_json(Json &j, const RelationType &r);
void from_json(const Json &j, RelationType &r);
void to_json(Json &j, const ThemeOntology &o);
void from_json(const Json &j, ThemeOntology &o);

}  // namespace avarc::ontology
