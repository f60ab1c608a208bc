#include "avarc/engine/queries.hpp"

#include <algorithm>

namespace avarc {

using workspace::ResourceKind;

std::vector<archive::Event> list_events(const State &s,
                                        std::optional<archive::EventKind> kind) {
  std::vector<archive::Event> out;
  for (const auto &[id, e] : s.events)
    if (!kind || e.kind == *kind)
      out.push_back(e);
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return std::tie(a.created_at.unix_ms, a.id) < std::tie(b.created_at.unix_ms, b.id);
  });
  return out;
}

archive::ArchiveStats archive_stats(const State &s) {
  archive::ArchiveStats st;
  st.event_count = s.events.size();
  st.segment_count = s.segments.size();
  for (const auto &[id, a] : s.assets)
    st.total_known_duration_ms += a.duration_ms;
  return st;
}

std::vector<annotation::Annotation> list_annotations(const State &s,
                                                     const SegmentId &segment,
                                                     const UserId &user) {
  s.segment(segment);
  std::vector<annotation::Annotation> out;
  for (const auto &[id, a] : s.annotations)
    if (target_segment(s, a.target) == segment && annotation_visible(s, user, a))
      out.push_back(a);
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return std::tie(a.created_at.unix_ms, a.id) < std::tie(b.created_at.unix_ms, b.id);
  });
  return out;
}

std::vector<workspace::ResourceRef> visible_resources(const State &s, ResourceKind kind,
                                                      const UserId &user) {
  std::vector<workspace::ResourceRef> out;
  auto collect = [&](const auto &map) {
    for (const auto &[id, v] : map) {
      workspace::ResourceRef ref{kind, id.value};
      if (can_view(s, user, ref))
        out.push_back(std::move(ref));
    }
  };
  switch (kind) {
    case ResourceKind::ontology: collect(s.ontologies); break;
    case ResourceKind::schema: collect(s.schemas); break;
    case ResourceKind::graph: collect(s.graphs); break;
    case ResourceKind::segment: collect(s.segments); break;
    case ResourceKind::bookmark: collect(s.bookmarks); break;
    case ResourceKind::path: collect(s.paths); break;
    case ResourceKind::annotation:
      for (const auto &[id, a] : s.annotations)
        if (annotation_visible(s, user, a))
          out.push_back({kind, id.value});
      break;
  }
  return out;
}

std::vector<annotation::Bookmark> list_bookmarks(const State &s, const UserId &user) {
  std::vector<annotation::Bookmark> out;
  for (const auto &[id, b] : s.bookmarks)
    if (can_view(s, user, {ResourceKind::bookmark, id.value}))
      out.push_back(b);
  return out;
}

std::vector<workspace::Workspace> list_workspaces(const State &s, const UserId &user) {
  std::vector<workspace::Workspace> out;
  for (const auto &[id, w] : s.workspaces)
    if (w.has_member(user))
      out.push_back(w);
  return out;
}

}  // namespace avarc
