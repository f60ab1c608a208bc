#include "avarc/congraph/projection.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>

namespace avarc::congraph {
namespace {

// Indexed view of a graph with nodes in label order.
struct IndexedGraph {
  std::vector<const ConceptNode *> nodes;
  std::map<std::string_view, int> index;

  explicit IndexedGraph(const ConceptualGraph &g) {
    for (const auto &n : g.nodes)
      nodes.push_back(&n);
    std::sort(nodes.begin(), nodes.end(),
              [](const ConceptNode *a, const ConceptNode *b) {
                return a->label < b->label;
              });
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
      index.emplace(nodes[i]->label, i);
  }

  int at(const std::string &label) const {
    auto it = index.find(label);
    if (it == index.end())
      throw Error(Errc::validation, "arc refers to missing node '" + label + "'");
    return it->second;
  }
};

using ArcKey = std::tuple<RelationTypeId, int, int>;

// Backtracking homomorphism search. Query nodes are assigned in label order
// and candidates are tried in target label order, so solutions arrive
// already sorted by image.
class Search {
 public:
  Search(const ConceptualGraph &query, const ConceptualGraph &target,
         const ontology::ThemeOntology &o, const ProjectionOptions &options)
      : q_(query), t_(target), budget_(options.budget) {
    if (query.ontology != target.ontology || query.ontology != o.id)
      throw Error(Errc::cg_ontology_mismatch,
                  "query and target graphs must be bound to the same ontology",
                  Json{{"query_ontology", query.ontology},
                       {"target_ontology", target.ontology},
                       {"ontology", o.id}});
    const ontology::Taxonomy tax(o);
    candidates_.resize(q_.nodes.size());
    for (std::size_t i = 0; i < q_.nodes.size(); ++i) {
      const auto &qn = *q_.nodes[i];
      for (std::size_t j = 0; j < t_.nodes.size(); ++j) {
        const auto &tn = *t_.nodes[j];
        if (!tax.subsumes(qn.theme, tn.theme))
          continue;
        if (qn.referent && qn.referent != tn.referent)
          continue;
        candidates_[i].push_back(static_cast<int>(j));
      }
    }
    for (const auto &a : target.arcs)
      target_arcs_.insert({a.relation, t_.at(a.source), t_.at(a.target)});
    // Each query arc is checked once both endpoints are assigned.
    checks_.resize(q_.nodes.size());
    for (const auto &a : query.arcs) {
      int s = q_.at(a.source), d = q_.at(a.target);
      checks_[std::max(s, d)].push_back({a.relation, s, d});
    }
  }

  // Visits every solution until `visit` returns false.
  void run(const std::function<bool(const std::vector<int> &)> &visit) {
    assignment_.assign(q_.nodes.size(), -1);
    visit_ = &visit;
    step(0);
  }

  std::string target_label(int j) const { return t_.nodes[j]->label; }

 private:
  bool step(std::size_t i) {
    if (i == assignment_.size())
      return (*visit_)(assignment_);
    for (int j : candidates_[i]) {
      if (++attempts_ > budget_)
        throw Error(Errc::cg_budget,
                    "projection exceeded its budget of " +
                        std::to_string(budget_) + " candidate assignments",
                    Json{{"budget", budget_}});
      assignment_[i] = j;
      bool ok = true;
      for (const auto &[rel, s, d] : checks_[i]) {
        if (!target_arcs_.contains({rel, assignment_[s], assignment_[d]})) {
          ok = false;
          break;
        }
      }
      if (ok && !step(i + 1))
        return false;
    }
    assignment_[i] = -1;
    return true;
  }

  IndexedGraph q_;
  IndexedGraph t_;
  std::uint64_t budget_;
  std::uint64_t attempts_ = 0;
  std::vector<std::vector<int>> candidates_;
  std::set<ArcKey> target_arcs_;
  std::vector<std::vector<ArcKey>> checks_;
  std::vector<int> assignment_;
  const std::function<bool(const std::vector<int> &)> *visit_ = nullptr;
};

}  // namespace

std::vector<Mapping> project(const ConceptualGraph &query,
                             const ConceptualGraph &target,
                             const ontology::ThemeOntology &o,
                             const ProjectionOptions &options) {
  Search search(query, target, o, options);
  std::vector<Mapping> out;
  search.run([&](const std::vector<int> &assignment) {
    Mapping m;
    m.image.reserve(assignment.size());
    for (int j : assignment)
      m.image.push_back(search.target_label(j));
    out.push_back(std::move(m));
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

bool match_exists(const ConceptualGraph &query, const ConceptualGraph &target,
                  const ontology::ThemeOntology &o,
                  const ProjectionOptions &options) {
  Search search(query, target, o, options);
  bool found = false;
  search.run([&](const std::vector<int> &) {
    found = true;
    return false;
  });
  return found;
}

bool is_projection(const ConceptualGraph &query, const ConceptualGraph &target,
                   const ontology::ThemeOntology &o, const Mapping &m) {
  IndexedGraph q(query);
  if (m.image.size() != q.nodes.size())
    return false;
  std::map<std::string_view, std::string_view> f;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const auto &qn = *q.nodes[i];
    const auto *tn = target.node(m.image[i]);
    if (tn == nullptr || !ontology::subsumes(o, qn.theme, tn->theme))
      return false;
    if (qn.referent && qn.referent != tn->referent)
      return false;
    f.emplace(qn.label, m.image[i]);
  }
  for (const auto &a : query.arcs) {
    RelationArc image{a.relation, std::string(f.at(a.source)),
                      std::string(f.at(a.target))};
    if (std::find(target.arcs.begin(), target.arcs.end(), image) ==
        target.arcs.end())
      return false;
  }
  return true;
}

Json mapping_to_json(const ConceptualGraph &query, const Mapping &m) {
  IndexedGraph q(query);
  Json out = Json::object();
  for (std::size_t i = 0; i < q.nodes.size() && i < m.image.size(); ++i)
    out[q.nodes[i]->label] = m.image[i];
  return out;
}

}  // namespace avarc::congraph
