#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "avarc/core/ids.hpp"
#include "avarc/core/json.hpp"
#include "avarc/core/time.hpp"
#include "avarc/core/visibility.hpp"

namespace avarc::archive {

enum class EventKind {
  interview,
  seminar,
  symposium,
  workshop,
  round_table,
  presentation,
  demonstration,
  lab_life,
  other,
};

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

/// Profile-driven, ordered field list. Field names are unique and order is
/// preserved exactly.
struct MetadataRecord {
  std::string profile;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string *find(std::string_view field) const;
  bool operator==(const MetadataRecord &) const = default;
};

/// Throws Error(validation) on an empty or repeated field name.
void validate_metadata(const MetadataRecord &record);

/// Plain "Field: value" line form. A leading "Profil:"/"Profile:" line names
/// the profile; blank lines are skipped.
MetadataRecord parse_metadata_text(std::string_view text);
std::string format_metadata_text(const MetadataRecord &record);

struct Event {
  EventId id;
  EventKind kind = EventKind::other;
  MetadataRecord metadata;
  std::vector<AssetId> asset_ids;
  Timestamp created_at;
};

/// A locator to media the engine never opens. duration_ms == 0 means the
/// duration is not known.
struct MediaAsset {
  AssetId id;
  EventId event;
  std::string uri;
  Millis duration_ms = 0;
  std::string format_label;
};

struct Segment {
  SegmentId id;
  AssetId asset;
  Millis start_ms = 0;
  Millis end_ms = 0;
  std::optional<std::string> label;
  UserId owner;
  Visibility visibility;
  Timestamp created_at;
};

/// Rectangle in normalized frame coordinates.
struct NormRect {
  double x = 0, y = 0, w = 0, h = 0;
  bool operator==(const NormRect &) const = default;
};

struct Zone {
  ZoneId id;
  SegmentId segment;
  Millis at_ms = 0;
  NormRect rect;
};

struct ArchiveStats {
  std::size_t event_count = 0;
  Millis total_known_duration_ms = 0;
  std::size_t segment_count = 0;
  bool operator==(const ArchiveStats &) const = default;
};

void check_asset(std::string_view uri, Millis duration_ms);

/// Throws invalid_interval when start >= end or start < 0 and out_of_range
/// when end passes a known (non-zero) asset duration.
void check_segment_interval(Millis start_ms, Millis end_ms,
                            Millis asset_duration_ms);

void check_zone(const Segment &segment, Millis at_ms, const NormRect &rect);

void to_json(Json &j, const MetadataRecord &r);
void from_json(const Json &j, MetadataRecord &r);
void to_json(Json &j, const Event &e);
void from_json(const Json &j, Event &e);
void to_json(Json &j, const MediaAsset &a);
void from_json(const Json &j, MediaAsset &a);
void to_json(Json &j, const Segment &s);
void from_json(const Json &j, Segment &s);
void to_json(Json &j, const NormRect &r);
void from_json(const Json &j, NormRect &r);
void to_json(Json &j, const Zone &z);
void from_json(const Json &j, Zone &z);
void to_json(Json &j, const ArchiveStats &s);

}  // namespace avarc::archive
