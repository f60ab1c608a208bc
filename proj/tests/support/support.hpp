#pragma once

// Shared generators and brute-force oracles for the unit and acceptance
// tests. The oracles deliberately avoid the engine's own helpers (Taxonomy,
// descendants, SearchIndex, workspace::can_view) so that agreement means
// something.

#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "avarc/congraph/graph.hpp"
#include "avarc/engine/engine.hpp"
#include "avarc/ontology/ontology.hpp"
#include "avarc/search/search.hpp"

namespace avarc::testing {

using Rng = std::mt19937_64;

/// The interview description record of the Werner event, one "Field: value"
/// per line, in the original order.
std::string werner_metadata_text();

/// Ontology with `themes` random themes under the root (some with two
/// parents) and `relations` relation types. Theme names are T1..Tn, relation
/// names r1..rm; roughly a third of the relations get a narrowed signature.
ontology::ThemeOntology random_ontology(Rng &rng, int themes, int relations);

/// Random valid graph over `o`: 1..max_nodes nodes, up to max_arcs arcs that
/// respect relation signatures. Referents are drawn from `referents` (empty
/// string = generic).
congraph::ConceptualGraph random_graph(Rng &rng, const ontology::ThemeOntology &o,
                                       int max_nodes, int max_arcs,
                                       const std::vector<std::string> &referents);

/// Upward walk over parent links.
bool oracle_subsumes(const ontology::ThemeOntology &o, const ThemeId &ancestor,
                     const ThemeId &descendant);

/// Every total map query-nodes -> target-nodes checked against the three
/// projection conditions; images listed in query label order, sorted.
std::vector<std::vector<std::string>> oracle_projections(
    const congraph::ConceptualGraph &query, const congraph::ConceptualGraph &target,
    const ontology::ThemeOntology &o);

/// Who may see a resource, straight from the lattice definition.
bool oracle_can_view(const State &s, const UserId &user, const workspace::ResourceRef &ref);

/// An annotation counts as visible when it is live and the annotation, its
/// segment and any ontology/graph/schema body are all viewable.
bool oracle_annotation_visible(const State &s, const UserId &user,
                               const annotation::Annotation &a);

/// (event, segment, part, annotation) tuples a hit list asserts. Every hit
/// contributes its group key with an empty annotation, plus one tuple per
/// annotation.
using HitAtom = std::tuple<std::string, std::string, std::string, std::string>;
std::set<HitAtom> atoms(const std::vector<search::SearchHit> &hits);

/// Naive keyword scan straight over the state.
std::set<HitAtom> oracle_keyword(const State &s, const std::string &text, const UserId &user);

struct WorkloadOptions {
  int users = 3;
  int operations = 200;
  /// Chance that a step is committed as a batch of two or three commands.
  double batch_chance = 0.1;
};

/// Drives `engine` with random, mostly valid commands until `operations`
/// commands have been accepted. Rejected commands are simply dropped.
/// Returns the number of committed batches.
int run_workload(Engine &engine, Rng &rng, const WorkloadOptions &options = {});

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string &tag);

/// Reads every href="..." target of an exported page.
std::vector<std::string> hrefs(const std::string &html);

}  // namespace avarc::testing
