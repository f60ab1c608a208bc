#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "avarc/congraph/graph.hpp"
#include "avarc/ontology/ontology.hpp"

namespace avarc::congraph {

/// One projection: image[i] is the target label for the i-th query node
/// (query nodes in label order).
struct Mapping {
  std::vector<std::string> image;

  auto operator<=>(const Mapping &) const = default;
  bool operator==(const Mapping &) const = default;
};

struct ProjectionOptions {
  /// Upper bound on candidate node assignments tried before giving up with
  /// Errc::cg_budget.
  std::uint64_t budget = 1'000'000;
};

/// All homomorphisms query -> target that specialize themes, respect
/// individual referents and preserve every arc with its relation type.
/// Non-injective; ordered lexicographically by image.
std::vector<Mapping> project(const ConceptualGraph &query,
                             const ConceptualGraph &target,
                             const ontology::ThemeOntology &o,
                             const ProjectionOptions &options = {});

bool match_exists(const ConceptualGraph &query, const ConceptualGraph &target,
                  const ontology::ThemeOntology &o,
                  const ProjectionOptions &options = {});

/// Checks the projection conditions for a single mapping.
bool is_projection(const ConceptualGraph &query, const ConceptualGraph &target,
                   const ontology::ThemeOntology &o, const Mapping &m);

Json mapping_to_json(const ConceptualGraph &query, const Mapping &m);

}  // namespace avarc::congraph
