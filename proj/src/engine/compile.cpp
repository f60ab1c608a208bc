#include "avarc/engine/compile.hpp"

#include <algorithm>

#include "avarc/congraph/linear_form.hpp"

namespace avarc {

using workspace::ResourceKind;

std::string annotation_summary(const State &s, const annotation::Annotation &a) {
  if (const auto *t = std::get_if<annotation::ThemeBody>(&a.body)) {
    const auto *theme = s.ontology(t->ontology).theme(t->theme);
    return theme ? theme->name : t->theme.value;
  }
  if (const auto *g = std::get_if<annotation::GraphBody>(&a.body)) {
    const auto &graph = s.graph(g->graph);
    std::string out = congraph::print_graph(graph, s.ontology(graph.ontology));
    if (graph.name)
      out = *graph.name + ": " + out;
    return out;
  }
  if (const auto *v = std::get_if<annotation::ViewpointBody>(&a.body)) {
    std::string out;
    for (const auto &[name, value] : v->instance.values) {
      if (!out.empty())
        out += "; ";
      out += name + "=" + viewpoint::value_text(value);
    }
    return out;
  }
  return std::get<annotation::NoteBody>(a.body).text;
}

montage::HyperDocManifest compile_manifest(const State &s, const PathId &path_id,
                                           const UserId &user) {
  const auto &p = s.path(path_id);
  require_view(s, user, {ResourceKind::path, path_id.value});
  if (p.nodes.empty())
    throw Error(Errc::montage_empty, "path " + path_id.value + " has no nodes");
  auto orphans = montage::unreachable_nodes(p);
  if (!orphans.empty()) {
    std::string names;
    for (const auto &o : orphans)
      names += (names.empty() ? "" : ", ") + o;
    throw Error(Errc::montage_unreachable,
                "unreachable from entry " + p.entry.value_or("") + ": " + names,
                Json{{"orphans", orphans}});
  }

  montage::HyperDocManifest m;
  m.path_id = p.id.value;
  m.path_name = p.name;
  m.entry = *p.entry;
  for (const auto &node_id : montage::reachable_order(p)) {
    const auto &node = *p.node(node_id);
    require_view(s, user, {ResourceKind::segment, node.segment.value});
    const auto &seg = s.segment(node.segment);
    montage::ManifestNode out;
    out.id = node.id;
    out.asset_uri = s.asset(seg.asset).uri;
    out.start_ms = seg.start_ms;
    out.end_ms = seg.end_ms;
    out.caption = node.caption;

    std::vector<const annotation::Annotation *> attached;
    for (const auto &[id, a] : s.annotations)
      if (target_segment(s, a.target) == node.segment && annotation_visible(s, user, a))
        attached.push_back(&a);
    std::stable_sort(attached.begin(), attached.end(), [](auto *x, auto *y) {
      return std::tie(x->created_at.unix_ms, x->id) < std::tie(y->created_at.unix_ms, y->id);
    });
    for (const auto *a : attached) {
      montage::AnnotationSummary sum;
      sum.id = a->id.value;
      sum.kind = std::string(annotation::body_kind(a->body));
      sum.author = a->author.value;
      sum.summary = annotation_summary(s, *a);
      if (const auto *part = std::get_if<annotation::PartTarget>(&a->target))
        sum.part = std::make_pair(part->from_ms, part->to_ms);
      out.annotations.push_back(std::move(sum));
    }
    m.nodes.push_back(std::move(out));
  }
  m.transitions = p.transitions;
  return m;
}

}  // namespace avarc
