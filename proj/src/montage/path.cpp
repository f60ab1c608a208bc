#include "avarc/montage/path.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "avarc/core/error.hpp"

namespace avarc::montage {

const PathNode *NavigationPath::node(std::string_view node_id) const {
  for (const auto &n : nodes)
    if (n.id == node_id)
      return &n;
  return nullptr;
}

std::string add_node(NavigationPath &p, std::string node_id, SegmentId segment,
                     std::string caption) {
  if (node_id.empty()) {
    for (std::size_t k = p.nodes.size() + 1;; ++k) {
      node_id = "n" + std::to_string(k);
      if (p.node(node_id) == nullptr)
        break;
    }
  }
  if (!is_url_safe(node_id))
    throw Error(Errc::validation,
                "path node id '" + node_id + "' must use only [A-Za-z0-9_-]");
  if (p.node(node_id) != nullptr)
    throw Error(Errc::duplicate_name, "path already has a node '" + node_id + "'");
  p.nodes.push_back({node_id, std::move(segment), std::move(caption)});
  if (!p.entry)
    p.entry = node_id;
  return node_id;
}

void add_transition(NavigationPath &p, Transition t) {
  if (p.node(t.from) == nullptr)
    throw Error(Errc::not_found, "unknown path node '" + t.from + "'",
                Json{{"node", t.from}});
  if (p.node(t.to) == nullptr)
    throw Error(Errc::not_found, "unknown path node '" + t.to + "'",
                Json{{"node", t.to}});
  if (std::find(p.transitions.begin(), p.transitions.end(), t) != p.transitions.end())
    throw Error(Errc::duplicate_name, "transition " + t.from + " -> " + t.to +
                                          " with this label already exists");
  p.transitions.push_back(std::move(t));
}

void set_entry(NavigationPath &p, const std::string &node_id) {
  if (p.node(node_id) == nullptr)
    throw Error(Errc::not_found, "unknown path node '" + node_id + "'",
                Json{{"node", node_id}});
  p.entry = node_id;
}

std::vector<std::string> reachable_order(const NavigationPath &p) {
  std::vector<std::string> order;
  if (!p.entry || p.node(*p.entry) == nullptr)
    return order;
  std::set<std::string> seen{*p.entry};
  std::deque<std::string> queue{*p.entry};
  while (!queue.empty()) {
    auto current = queue.front();
    queue.pop_front();
    order.push_back(current);
    for (const auto &t : p.transitions)
      if (t.from == current && seen.insert(t.to).second)
        queue.push_back(t.to);
  }
  return order;
}

std::vector<std::string> unreachable_nodes(const NavigationPath &p) {
  auto reached = reachable_order(p);
  std::set<std::string> seen(reached.begin(), reached.end());
  std::vector<std::string> out;
  for (const auto &n : p.nodes)
    if (!seen.contains(n.id))
      out.push_back(n.id);
  return out;
}

void to_json(Json &j, const PathNode &n) {
  j = Json{{"id", n.id}, {"segment_id", n.segment}, {"caption", n.caption}};
}

void from_json(const Json &j, PathNode &n) {
  n.id = j.at("id").get<std::string>();
  n.segment = j.at("segment_id").get<SegmentId>();
  n.caption = j.value("caption", std::string());
}

void to_json(Json &j, const Transition &t) {
  j = Json{{"from", t.from}, {"to", t.to}, {"label", t.label}};
}

void from_json(const Json &j, Transition &t) {
  t.from = j.at("from").get<std::string>();
  t.to = j.at("to").get<std::string>();
  t.label = j.value("label", std::string());
}

void to_json(Json &j, const NavigationPath &p) {
  j = Json{{"id", p.id},
           {"name", p.name},
           {"nodes", p.nodes},
           {"transitions", p.transitions},
           {"entry", p.entry ? Json(*p.entry) : Json()},
           {"owner", p.owner},
           {"visibility", p.visibility},
           {"created_at", format_timestamp(p.created_at)}};
}

void from_json(const Json &j, NavigationPath &p) {
  p.id = j.at("id").get<PathId>();
  p.name = j.at("name").get<std::string>();
  p.nodes = j.at("nodes").get<std::vector<PathNode>>();
  p.transitions = j.at("transitions").get<std::vector<Transition>>();
  if (j.contains("entry") && !j.at("entry").is_null())
    p.entry = j.at("entry").get<std::string>();
  else
    p.entry.reset();
  p.owner = j.at("owner").get<UserId>();
  p.visibility = j.at("visibility").get<Visibility>();
  p.created_at = parse_timestamp(j.at("created_at").get<std::string>());
}

}  // namespace avarc::montage
