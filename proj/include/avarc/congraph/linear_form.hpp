#pragma once

#include <string>
#include <string_view>

#include "avarc/congraph/graph.hpp"
#include "avarc/ontology/ontology.hpp"

namespace avarc::congraph {

// Textual form of a conceptual graph:
//
//   graph    := stmt (";" stmt)*
//   stmt     := concept (arc)*
//   concept  := "[" NAME (":" referent)? ("#" NODEID)? "]"
//   referent := "*" | DQUOTED_STRING
//   arc      := "-(" NAME ")->" concept
//
// A concept without "#id" is a fresh node and receives the first free label
// among n1, n2, ... A repeated "#id" refers back to the same node; its NAME
// must agree and an omitted referent inherits the first occurrence.

/// Parses and validates against `o`. Errors carry {"position", "line",
/// "column"} in their detail. The returned graph has no id and no owner.
ConceptualGraph parse_graph(std::string_view text,
                            const ontology::ThemeOntology &o);

/// Canonical single-line form: one statement per node in label order, then
/// one per arc ordered by (relation name, source, target).
std::string print_graph(const ConceptualGraph &g,
                        const ontology::ThemeOntology &o);

}  // namespace avarc::congraph
