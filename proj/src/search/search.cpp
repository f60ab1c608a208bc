#include "avarc/search/search.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "avarc/core/text.hpp"

namespace avarc::search {
namespace {

using workspace::ResourceKind;
using workspace::ResourceRef;

struct Location {
  EventId event;
  std::optional<SegmentId> segment;
  std::optional<Part> part;
  Millis start_ms = 0;
};

Location locate(const State &s, const annotation::Target &t) {
  Location loc;
  auto seg_id = target_segment(s, t);
  const auto &seg = s.segment(seg_id);
  loc.event = s.asset(seg.asset).event;
  loc.segment = seg_id;
  loc.start_ms = seg.start_ms;
  if (const auto *p = std::get_if<annotation::PartTarget>(&t)) {
    loc.part = Part{p->from_ms, p->to_ms};
    loc.start_ms = p->from_ms;
  }
  return loc;
}

auto group_key(const SearchHit &h) {
  return std::tie(h.event, h.segment, h.part);
}

// Accumulates matches into hits keyed by (event, segment, part).
class Grouper {
 public:
  void add(const Location &loc, const std::optional<AnnotationId> &ann, int specificity) {
    auto key = std::make_tuple(loc.event, loc.segment, loc.part);
    auto [it, fresh] = groups_.try_emplace(key);
    auto &h = it->second;
    if (fresh) {
      h.event = loc.event;
      h.segment = loc.segment;
      h.part = loc.part;
      h.start_ms = loc.start_ms;
    }
    ++h.match_count;
    h.specificity = std::max(h.specificity, specificity);
    if (ann)
      h.annotations.push_back(*ann);
  }

  std::vector<SearchHit> finish() {
    std::vector<SearchHit> out;
    for (auto &[key, h] : groups_) {
      std::sort(h.annotations.begin(), h.annotations.end());
      h.annotations.erase(std::unique(h.annotations.begin(), h.annotations.end()),
                          h.annotations.end());
      out.push_back(std::move(h));
    }
    rank(out);
    return out;
  }

 private:
  std::map<std::tuple<EventId, std::optional<SegmentId>, std::optional<Part>>, SearchHit>
      groups_;
};

std::vector<std::string> trigrams_of(std::string_view s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 3 <= s.size(); ++i)
    out.emplace_back(s.substr(i, 3));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool in_workspace(const State &s, const workspace::Workspace &w, const ResourceRef &ref) {
  if (w.resources.contains(ref))
    return true;
  auto own = ownership(s, ref);
  return own.visibility.level == Visibility::Level::Group &&
         own.visibility.workspace == w.id;
}

bool doc_visible(const State &s, const KeywordDoc &d, const UserId &user) {
  if (d.annotation)
    return annotation_visible(s, user, s.annotation(*d.annotation));
  if (d.segment)
    return can_view(s, user, {ResourceKind::segment, d.segment->value});
  return true;  // event metadata is public
}

bool doc_in_scope(const State &s, const KeywordDoc &d, const workspace::Workspace &w) {
  if (d.annotation)
    return in_workspace(s, w, {ResourceKind::annotation, d.annotation->value}) ||
           (d.segment && in_workspace(s, w, {ResourceKind::segment, d.segment->value}));
  if (d.segment)
    return in_workspace(s, w, {ResourceKind::segment, d.segment->value});
  for (const auto &[id, b] : s.bookmarks)
    if (b.event == d.event && in_workspace(s, w, {ResourceKind::bookmark, id.value}))
      return true;
  return false;
}

}  // namespace

bool ranks_before(const SearchHit &a, const SearchHit &b) {
  if (a.match_count != b.match_count)
    return a.match_count > b.match_count;
  if (a.specificity != b.specificity)
    return a.specificity > b.specificity;
  if (a.start_ms != b.start_ms)
    return a.start_ms < b.start_ms;
  return group_key(a) < group_key(b);
}

void rank(std::vector<SearchHit> &hits) {
  std::sort(hits.begin(), hits.end(), ranks_before);
}

std::vector<KeywordDoc> keyword_documents(const State &s) {
  using Source = KeywordDoc::Source;
  std::vector<KeywordDoc> docs;
  for (const auto &[id, e] : s.events)
    for (const auto &[field, value] : e.metadata.entries)
      if (!value.empty())
        docs.push_back({Source::metadata, fold_case(value), id, {}, {}, {}, 0});
  for (const auto &[id, seg] : s.segments)
    if (seg.label && !seg.label->empty())
      docs.push_back({Source::segment_label, fold_case(*seg.label),
                      s.asset(seg.asset).event, id, {}, {}, 0});
  for (const auto &[id, a] : s.annotations) {
    auto loc = locate(s, a.target);
    auto push = [&](Source src, std::string_view text, int spec) {
      if (!text.empty())
        docs.push_back({src, fold_case(text), loc.event, loc.segment, loc.part, id, spec});
    };
    if (const auto *n = std::get_if<annotation::NoteBody>(&a.body)) {
      push(Source::note, n->text, 0);
    } else if (const auto *g = std::get_if<annotation::GraphBody>(&a.body)) {
      const auto &graph = s.graph(g->graph);
      if (graph.free_text)
        push(Source::graph_text, *graph.free_text, 0);
    } else if (const auto *t = std::get_if<annotation::ThemeBody>(&a.body)) {
      const auto &o = s.ontology(t->ontology);
      if (const auto *theme = o.theme(t->theme))
        push(Source::theme_name, theme->name, ontology::depth(o, t->theme));
    } else if (const auto *v = std::get_if<annotation::ViewpointBody>(&a.body)) {
      const auto &schema = s.schema(v->instance.schema);
      for (const auto &[name, value] : v->instance.values) {
        const auto *def = schema.feature(name);
        if (def && std::holds_alternative<viewpoint::FreeText>(def->kind))
          push(Source::viewpoint_text, viewpoint::value_text(value), 0);
      }
    }
  }
  return docs;
}

SearchIndex::SearchIndex(const State &s) : docs_(keyword_documents(s)) {
  for (std::size_t i = 0; i < docs_.size(); ++i)
    for (auto &tri : trigrams_of(docs_[i].folded))
      trigrams_[std::move(tri)].push_back(i);
  for (const auto &[id, a] : s.annotations)
    if (const auto *t = std::get_if<annotation::ThemeBody>(&a.body))
      themes_[{t->ontology, t->theme}].push_back(id);
}

bool SearchIndex::operator==(const SearchIndex &other) const {
  auto doc_key = [](const KeywordDoc &d) {
    return std::tie(d.source, d.folded, d.event, d.segment, d.part, d.annotation,
                    d.specificity);
  };
  if (docs_.size() != other.docs_.size())
    return false;
  for (std::size_t i = 0; i < docs_.size(); ++i)
    if (doc_key(docs_[i]) != doc_key(other.docs_[i]))
      return false;
  return trigrams_ == other.trigrams_ && themes_ == other.themes_;
}

std::vector<std::size_t> SearchIndex::candidates(std::string_view folded_query) const {
  std::vector<std::size_t> result;
  auto grams = trigrams_of(folded_query);
  if (grams.empty()) {
    result.resize(docs_.size());
    for (std::size_t i = 0; i < docs_.size(); ++i)
      result[i] = i;
    return result;
  }
  bool first = true;
  for (const auto &g : grams) {
    auto it = trigrams_.find(g);
    if (it == trigrams_.end())
      return {};
    if (first) {
      result = it->second;
      first = false;
      continue;
    }
    std::vector<std::size_t> next;
    std::set_intersection(result.begin(), result.end(), it->second.begin(),
                          it->second.end(), std::back_inserter(next));
    result = std::move(next);
    if (result.empty())
      break;
  }
  return result;
}

const std::vector<AnnotationId> &SearchIndex::theme_annotations(const OntologyId &o,
                                                                const ThemeId &t) const {
  static const std::vector<AnnotationId> kNone;
  auto it = themes_.find({o, t});
  return it == themes_.end() ? kNone : it->second;
}

std::vector<SearchHit> keyword_search(const State &s, const SearchIndex &index,
                                      std::string_view text, const UserId &user,
                                      const KeywordOptions &options) {
  if (trim(text).empty())
    throw Error(Errc::validation, "keyword query must not be empty");
  const workspace::Workspace *scope = nullptr;
  if (options.scope) {
    scope = &s.workspace(*options.scope);
    if (!scope->has_member(user))
      throw Error(Errc::access_denied,
                  user.value + " is not a member of workspace " + scope->id.value);
  }
  auto needle = fold_case(text);
  Grouper grouper;
  for (auto i : index.candidates(needle)) {
    const auto &d = index.docs()[i];
    if (!contains_folded(d.folded, needle) || !doc_visible(s, d, user))
      continue;
    if (scope && !doc_in_scope(s, d, *scope))
      continue;
    Location loc{d.event, d.segment, d.part, 0};
    if (d.part)
      loc.start_ms = d.part->first;
    else if (d.segment)
      loc.start_ms = s.segment(*d.segment).start_ms;
    grouper.add(loc, d.annotation, d.specificity);
  }
  return grouper.finish();
}

std::vector<SearchHit> theme_search(const State &s, const SearchIndex &index,
                                    const OntologyId &ontology_id, const ThemeId &theme,
                                    bool expand, const UserId &user) {
  const auto &o = s.ontology(ontology_id);
  require_view(s, user, {ResourceKind::ontology, ontology_id.value});
  if (o.theme(theme) == nullptr)
    throw Error(Errc::not_found, "theme " + theme.value + " not found",
                Json{{"kind", "theme"}, {"id", theme.value}});
  std::set<ThemeId> themes{theme};
  if (expand)
    themes = ontology::descendants(o, theme);
  Grouper grouper;
  for (const auto &t : themes) {
    const int spec = ontology::depth(o, t);
    for (const auto &id : index.theme_annotations(ontology_id, t)) {
      const auto &a = s.annotation(id);
      if (annotation_visible(s, user, a))
        grouper.add(locate(s, a.target), id, spec);
    }
  }
  return grouper.finish();
}

std::vector<SearchHit> graph_search(const State &s, const congraph::ConceptualGraph &query,
                                    const UserId &user,
                                    const congraph::ProjectionOptions &options) {
  const auto &o = s.ontology(query.ontology);
  require_view(s, user, {ResourceKind::ontology, query.ontology.value});
  std::vector<SearchHit> hits;
  for (const auto &[id, a] : s.annotations) {
    const auto *body = std::get_if<annotation::GraphBody>(&a.body);
    if (body == nullptr || !annotation_visible(s, user, a))
      continue;
    const auto &target = s.graph(body->graph);
    if (target.ontology != query.ontology)
      continue;
    auto mappings = congraph::project(query, target, o, options);
    if (mappings.empty())
      continue;
    auto loc = locate(s, a.target);
    SearchHit h;
    h.event = loc.event;
    h.segment = loc.segment;
    h.part = loc.part;
    h.start_ms = loc.start_ms;
    h.annotations = {id};
    h.match_count = static_cast<int>(mappings.size());
    hits.push_back(std::move(h));
  }
  std::stable_sort(hits.begin(), hits.end(), [](const SearchHit &a, const SearchHit &b) {
    if (ranks_before(a, b) != ranks_before(b, a))
      return ranks_before(a, b);
    return a.annotations < b.annotations;
  });
  return hits;
}

std::vector<PathSummary> montage_search(const State &s, const UserId &user) {
  std::vector<PathSummary> out;
  for (const auto &[id, p] : s.paths)
    if (can_view(s, user, {ResourceKind::path, id.value}))
      out.push_back({id, p.name, p.owner, p.visibility, p.entry, p.nodes.size(),
                     p.transitions.size()});
  return out;
}

void to_json(Json &j, const SearchHit &h) {
  j = Json{{"event_id", h.event}, {"segment_id", h.segment}, {"part", nullptr}};
  if (h.part)
    j["part"] = Json{{"from_ms", h.part->first},
                     {"to_ms", h.part->second},
                     {"from", format_timecode(h.part->first)},
                     {"to", format_timecode(h.part->second)}};
  j["matched_annotation_ids"] = h.annotations;
  j["score"] = Json{{"match_count", h.match_count}, {"specificity", h.specificity}};
  j["start_ms"] = h.start_ms;
}

void to_json(Json &j, const PathSummary &p) {
  j = Json{{"id", p.id},
           {"name", p.name},
           {"owner", p.owner},
           {"visibility", p.visibility},
           {"entry", p.entry},
           {"node_count", p.node_count},
           {"transition_count", p.transition_count}};
}

}  // namespace avarc::search
