#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "avarc/congraph/projection.hpp"
#include "avarc/engine/state.hpp"

namespace avarc::search {

using Part = std::pair<Millis, Millis>;

/// Hits are grouped by (event, segment, part). An event-level hit (metadata
/// match) has no segment.
struct SearchHit {
  EventId event;
  std::optional<SegmentId> segment;
  std::optional<Part> part;
  std::vector<AnnotationId> annotations;  // sorted
  int match_count = 0;
  int specificity = 0;
  Millis start_ms = 0;  // segment (or part) start; 0 for event-level hits

  bool operator==(const SearchHit &) const = default;
};

/// match_count desc, specificity desc, start_ms asc, then (event, segment,
/// part) asc.
bool ranks_before(const SearchHit &a, const SearchHit &b);
void rank(std::vector<SearchHit> &hits);

/// One searchable piece of text and where it came from.
struct KeywordDoc {
  enum class Source { metadata, segment_label, note, graph_text, theme_name, viewpoint_text };
  Source source = Source::metadata;
  std::string folded;  // fold_case(text)
  EventId event;
  std::optional<SegmentId> segment;
  std::optional<Part> part;
  std::optional<AnnotationId> annotation;
  int specificity = 0;
};

/// Rebuildable indexes over one committed state: a trigram index over
/// keyword documents and a (ontology, theme) -> annotations index.
class SearchIndex {
 public:
  SearchIndex() = default;
  explicit SearchIndex(const State &s);

  const std::vector<KeywordDoc> &docs() const { return docs_; }
  /// Indices of docs that may contain `folded_query`; a superset of the
  /// true matches, in ascending order.
  std::vector<std::size_t> candidates(std::string_view folded_query) const;
  const std::vector<AnnotationId> &theme_annotations(const OntologyId &o,
                                                     const ThemeId &t) const;

  bool operator==(const SearchIndex &) const;

 private:
  std::vector<KeywordDoc> docs_;
  std::map<std::string, std::vector<std::size_t>> trigrams_;
  std::map<std::pair<OntologyId, ThemeId>, std::vector<AnnotationId>> themes_;
};

/// Every searchable text of `s`, in a deterministic order. Includes retracted
/// and hidden sources; visibility is applied at query time.
std::vector<KeywordDoc> keyword_documents(const State &s);

struct KeywordOptions {
  std::optional<WorkspaceId> scope;
};

/// Case-insensitive substring search. Throws validation on an empty query
/// and access_denied when the user is not a member of the scope workspace.
std::vector<SearchHit> keyword_search(const State &s, const SearchIndex &index,
                                      std::string_view text, const UserId &user,
                                      const KeywordOptions &options = {});

/// Annotations carrying `theme` (or, with expand, any descendant of it).
std::vector<SearchHit> theme_search(const State &s, const SearchIndex &index,
                                    const OntologyId &ontology, const ThemeId &theme,
                                    bool expand, const UserId &user);

/// One hit per visible graph annotation whose graph admits a projection of
/// `query`; match_count is the number of projections. Graphs bound to a
/// different ontology than the query are skipped.
std::vector<SearchHit> graph_search(const State &s,
                                    const congraph::ConceptualGraph &query,
                                    const UserId &user,
                                    const congraph::ProjectionOptions &options = {});

struct PathSummary {
  PathId id;
  std::string name;
  UserId owner;
  Visibility visibility;
  std::optional<std::string> entry;
  std::size_t node_count = 0;
  std::size_t transition_count = 0;
};

/// Navigation paths visible to `user`, by id.
std::vector<PathSummary> montage_search(const State &s, const UserId &user);

void to_json(Json &j, const SearchHit &h);
void to_json(Json &j, const PathSummary &p);

}  // namespace avarc::search
