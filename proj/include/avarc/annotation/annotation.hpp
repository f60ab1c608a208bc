#pragma once

#include <string>
#include <variant>

#include "avarc/archive/archive.hpp"
#include "avarc/core/ids.hpp"
#include "avarc/core/json.hpp"
#include "avarc/core/time.hpp"
#include "avarc/core/visibility.hpp"
#include "avarc/viewpoint/viewpoint.hpp"

namespace avarc::annotation {

struct SegmentTarget {
  SegmentId segment;
  bool operator==(const SegmentTarget &) const = default;
};

/// A sub-interval [from_ms, to_ms) of a segment, kept inline on the
/// annotation rather than stored as its own segment.
struct PartTarget {
  SegmentId segment;
  Millis from_ms = 0;
  Millis to_ms = 0;
  bool operator==(const PartTarget &) const = default;
};

struct ZoneTarget {
  ZoneId zone;
  bool operator==(const ZoneTarget &) const = default;
};

using Target = std::variant<SegmentTarget, PartTarget, ZoneTarget>;

struct ThemeBody {
  OntologyId ontology;
  ThemeId theme;
};

struct GraphBody {
  GraphId graph;
};

struct ViewpointBody {
  viewpoint::ViewpointInstance instance;
};

struct NoteBody {
  std::string text;
};

using Body = std::variant<ThemeBody, GraphBody, ViewpointBody, NoteBody>;

std::string_view body_kind(const Body &b);

struct Annotation {
  AnnotationId id;
  Target target;
  Body body;
  UserId author;
  Timestamp created_at;
  Visibility visibility;
  bool retracted = false;  // tombstone; kept for provenance
};

struct Bookmark {
  BookmarkId id;
  EventId event;
  std::string note;
  UserId owner;
  Visibility visibility;
  Timestamp created_at;
};

/// Throws invalid_interval unless start <= from < to <= end.
void check_part(const archive::Segment &segment, Millis from_ms, Millis to_ms);

void to_json(Json &j, const Target &t);
void from_json(const Json &j, Target &t);
void to_json(Json &j, const Body &b);
void from_json(const Json &j, Body &b);
void to_json(Json &j, const Annotation &a);
void from_json(const Json &j, Annotation &a);
void to_json(Json &j, const Bookmark &b);
void from_json(const Json &j, Bookmark &b);

}  // namespace avarc::annotation
