#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avarc/core/ids.hpp"
#include "avarc/core/json.hpp"
#include "avarc/core/time.hpp"
#include "avarc/core/visibility.hpp"

namespace avarc::montage {

struct PathNode {
  std::string id;
  SegmentId segment;
  std::string caption;
};

struct Transition {
  std::string from;
  std::string to;
  std::string label;

  auto operator<=>(const Transition &) const = default;
  bool operator==(const Transition &) const = default;
};

/// Oriented navigation structure over segments. Branches and loops are
/// allowed; the only structural requirement (checked at compile time) is
/// that every node is reachable from the entry.
struct NavigationPath {
  PathId id;
  std::string name;
  std::vector<PathNode> nodes;
  std::vector<Transition> transitions;
  std::optional<std::string> entry;
  UserId owner;
  Visibility visibility;
  Timestamp created_at;

  const PathNode *node(std::string_view id) const;
};

/// Appends a node; an empty id gets the first free "n<k>". The first node
/// becomes the entry. Returns the node id.
std::string add_node(NavigationPath &p, std::string node_id, SegmentId segment,
                     std::string caption);

void add_transition(NavigationPath &p, Transition t);
void set_entry(NavigationPath &p, const std::string &node_id);

/// Nodes in breadth-first order from the entry, following transitions in
/// insertion order.
std::vector<std::string> reachable_order(const NavigationPath &p);

/// Node ids not reachable from the entry, in insertion order.
std::vector<std::string> unreachable_nodes(const NavigationPath &p);

void to_json(Json &j, const PathNode &n);
void from_json(const Json &j, PathNode &n);
void to_json(Json &j, const Transition &t);
void from_json(const Json &j, Transition &t);
void to_json(Json &j, const NavigationPath &p);
void from_json(const Json &j, NavigationPath &p);

}  // namespace avarc::montage
