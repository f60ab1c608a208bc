#include "avarc/archive/archive.hpp"

#include <array>
#include <set>

#include "avarc/core/error.hpp"

namespace avarc::archive {
namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 9> kKindNames = {{
    {EventKind::interview, "interview"},
    {EventKind::seminar, "seminar"},
    {EventKind::symposium, "symposium"},
    {EventKind::workshop, "workshop"},
    {EventKind::round_table, "round_table"},
    {EventKind::presentation, "presentation"},
    {EventKind::demonstration, "demonstration"},
    {EventKind::lab_life, "lab_life"},
    {EventKind::other, "other"},
}};

}  // namespace

std::string_view to_string(EventKind kind) {
  for (auto [k, name] : kKindNames)
    if (k == kind)
      return name;
  return "other";
}

EventKind parse_event_kind(std::string_view text) {
  for (auto [k, name] : kKindNames)
    if (name == text)
      return k;
  throw Error(Errc::validation, "unknown event kind '" + std::string(text) + "'");
}

const std::string *MetadataRecord::find(std::string_view field) const {
  for (const auto &[name, value] : entries)
    if (name == field)
      return &value;
  return nullptr;
}

void validate_metadata(const MetadataRecord &record) {
  std::set<std::string_view> seen;
  for (const auto &[name, value] : record.entries) {
    if (name.empty())
      throw Error(Errc::validation, "metadata field name must not be empty");
    if (!seen.insert(name).second)
      throw Error(Errc::validation, "duplicate metadata field '" + name + "'",
                  Json{{"field", name}});
  }
}

MetadataRecord parse_metadata_text(std::string_view text) {
  MetadataRecord record;
  bool first = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos)
      eol = text.size();
    auto line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    pos = eol + 1;
    if (line.find_first_not_of(" \t") == std::string_view::npos)
      continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0)
      throw Error(Errc::validation,
                  "metadata line without 'Field:' prefix: " + std::string(line));
    std::string name(line.substr(0, colon));
    auto value = line.substr(colon + 1);
    if (value.starts_with(' '))
      value.remove_prefix(1);
    if (first && (name == "Profil" || name == "Profile")) {
      record.profile = std::string(value);
    } else {
      record.entries.emplace_back(std::move(name), std::string(value));
    }
    first = false;
  }
  validate_metadata(record);
  return record;
}

std::string format_metadata_text(const MetadataRecord &record) {
  std::string out;
  auto line = [&out](std::string_view name, std::string_view value) {
    out += name;
    out += ':';
    if (!value.empty()) {
      out += ' ';
      out += value;
    }
    out += '\n';
  };
  if (!record.profile.empty())
    line("Profil", record.profile);
  for (const auto &[name, value] : record.entries)
    line(name, value);
  return out;
}

void check_asset(std::string_view uri, Millis duration_ms) {
  if (uri.empty())
    throw Error(Errc::validation, "asset uri must not be empty");
  if (duration_ms < 0)
    throw Error(Errc::validation, "asset duration must be >= 0");
}

void check_segment_interval(Millis start_ms, Millis end_ms,
                            Millis asset_duration_ms) {
  if (start_ms < 0 || start_ms >= end_ms)
    throw Error(Errc::invalid_interval,
                "segment interval [" + std::to_string(start_ms) + ", " +
                    std::to_string(end_ms) + ") is empty or negative",
                Json{{"start_ms", start_ms}, {"end_ms", end_ms}});
  if (asset_duration_ms > 0 && end_ms > asset_duration_ms)
    throw Error(Errc::out_of_range,
                "segment end " + std::to_string(end_ms) +
                    " exceeds asset duration " +
                    std::to_string(asset_duration_ms),
                Json{{"end_ms", end_ms}, {"duration_ms", asset_duration_ms}});
}

void check_zone(const Segment &segment, Millis at_ms, const NormRect &rect) {
  if (at_ms < segment.start_ms || at_ms > segment.end_ms)
    throw Error(Errc::validation, "zone time lies outside its segment",
                Json{{"at_ms", at_ms},
                     {"start_ms", segment.start_ms},
                     {"end_ms", segment.end_ms}});
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(rect.x) || !unit(rect.y) || !unit(rect.w) || !unit(rect.h) ||
      !(rect.w > 0.0) || !(rect.h > 0.0) || rect.x + rect.w > 1.0 ||
      rect.y + rect.h > 1.0)
    throw Error(Errc::validation,
                "zone rectangle must have w,h > 0 and lie in the unit square");
}

void to_json(Json &j, const MetadataRecord &r) {
  Json entries = Json::array();
  for (const auto &[name, value] : r.entries)
    entries.push_back(Json{{"field", name}, {"value", value}});
  j = Json{{"profile", r.profile}, {"entries", std::move(entries)}};
}

void from_json(const Json &j, MetadataRecord &r) {
  r.profile = j.value("profile", std::string());
  r.entries.clear();
  for (const auto &e : j.value("entries", Json::array()))
    r.entries.emplace_back(e.at("field").get<std::string>(),
                           e.at("value").get<std::string>());
}

void to_json(Json &j, const Event &e) {
  j = Json{{"id", e.id},
           {"kind", to_string(e.kind)},
           {"metadata", e.metadata},
           {"asset_ids", e.asset_ids},
           {"created_at", format_timestamp(e.created_at)}};
}

void from_json(const Json &j, Event &e) {
  e.id = j.at("id").get<EventId>();
  e.kind = parse_event_kind(j.at("kind").get<std::string>());
  e.metadata = j.at("metadata").get<MetadataRecord>();
  e.asset_ids = j.at("asset_ids").get<std::vector<AssetId>>();
  e.created_at = parse_timestamp(j.at("created_at").get<std::string>());
}

void to_json(Json &j, const MediaAsset &a) {
  j = Json{{"id", a.id},
           {"event_id", a.event},
           {"uri", a.uri},
           {"duration_ms", a.duration_ms},
           {"format_label", a.format_label}};
}

void from_json(const Json &j, MediaAsset &a) {
  a.id = j.at("id").get<AssetId>();
  a.event = j.at("event_id").get<EventId>();
  a.uri = j.at("uri").get<std::string>();
  a.duration_ms = j.at("duration_ms").get<Millis>();
  a.format_label = j.at("format_label").get<std::string>();
}

void to_json(Json &j, const Segment &s) {
  j = Json{{"id", s.id},
           {"asset_id", s.asset},
           {"start_ms", s.start_ms},
           {"end_ms", s.end_ms},
           {"start", format_timecode(s.start_ms)},
           {"end", format_timecode(s.end_ms)},
           {"label", s.label ? Json(*s.label) : Json()},
           {"owner", s.owner},
           {"visibility", s.visibility},
           {"created_at", format_timestamp(s.created_at)}};
}

void from_json(const Json &j, Segment &s) {
  s.id = j.at("id").get<SegmentId>();
  s.asset = j.at("asset_id").get<AssetId>();
  s.start_ms = j.at("start_ms").get<Millis>();
  s.end_ms = j.at("end_ms").get<Millis>();
  if (j.contains("label") && !j.at("label").is_null())
    s.label = j.at("label").get<std::string>();
  else
    s.label.reset();
  s.owner = j.at("owner").get<UserId>();
  s.visibility = j.at("visibility").get<Visibility>();
  s.created_at = parse_timestamp(j.at("created_at").get<std::string>());
}

void to_json(Json &j, const NormRect &r) {
  j = Json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}};
}

void from_json(const Json &j, NormRect &r) {
  r.x = j.at("x").get<double>();
  r.y = j.at("y").get<double>();
  r.w = j.at("w").get<double>();
  r.h = j.at("h").get<double>();
}

void to_json(Json &j, const Zone &z) {
  j = Json{{"id", z.id},
           {"segment_id", z.segment},
           {"at_ms", z.at_ms},
           {"at", format_timecode(z.at_ms)},
           {"rect", z.rect}};
}

void from_json(const Json &j, Zone &z) {
  z.id = j.at("id").get<ZoneId>();
  z.segment = j.at("segment_id").get<SegmentId>();
  z.at_ms = j.at("at_ms").get<Millis>();
  z.rect = j.at("rect").get<NormRect>();
}

void to_json(Json &j, const ArchiveStats &s) {
  j = Json{{"event_count", s.event_count},
           {"total_known_duration_ms", s.total_known_duration_ms},
           {"total_known_duration", format_timecode(s.total_known_duration_ms)},
           {"segment_count", s.segment_count}};
}

}  // namespace avarc::archive
