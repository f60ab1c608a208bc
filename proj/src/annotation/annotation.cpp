#include "avarc/annotation/annotation.hpp"

#include "avarc/core/error.hpp"

namespace avarc::annotation {

std::string_view body_kind(const Body &b) {
  switch (b.index()) {
    case 0: return "theme";
    case 1: return "graph";
    case 2: return "viewpoint";
    default: return "note";
  }
}

void check_part(const archive::Segment &segment, Millis from_ms, Millis to_ms) {
  if (from_ms >= to_ms || from_ms < segment.start_ms || to_ms > segment.end_ms)
    throw Error(Errc::invalid_interval,
                "part [" + format_timecode(std::max<Millis>(from_ms, 0)) + ", " +
                    format_timecode(std::max<Millis>(to_ms, 0)) +
                    ") does not lie within segment " + segment.id.value,
                Json{{"from_ms", from_ms},
                     {"to_ms", to_ms},
                     {"segment_start_ms", segment.start_ms},
                     {"segment_end_ms", segment.end_ms}});
}

void to_json(Json &j, const Target &t) {
  std::visit(
      [&](const auto &v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SegmentTarget>) {
          j = Json{{"kind", "segment"}, {"segment_id", v.segment}};
        } else if constexpr (std::is_same_v<T, PartTarget>) {
          j = Json{{"kind", "part"},
                   {"segment_id", v.segment},
                   {"from_ms", v.from_ms},
                   {"to_ms", v.to_ms},
                   {"from", format_timecode(v.from_ms)},
                   {"to", format_timecode(v.to_ms)}};
        } else {
          j = Json{{"kind", "zone"}, {"zone_id", v.zone}};
        }
      },
      t);
}

namespace {

Millis time_field(const Json &j, const char *ms_key, const char *text_key) {
  if (j.contains(ms_key))
    return j.at(ms_key).get<Millis>();
  if (j.contains(text_key))
    return parse_timecode(j.at(text_key).get<std::string>());
  throw Error(Errc::validation, std::string("missing '") + ms_key + "'");
}

}  // namespace

void from_json(const Json &j, Target &t) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "segment")
    t = SegmentTarget{j.at("segment_id").get<SegmentId>()};
  else if (kind == "part")
    t = PartTarget{j.at("segment_id").get<SegmentId>(),
                   time_field(j, "from_ms", "from"), time_field(j, "to_ms", "to")};
  else if (kind == "zone")
    t = ZoneTarget{j.at("zone_id").get<ZoneId>()};
  else
    throw Error(Errc::validation, "unknown annotation target kind '" + kind + "'");
}

void to_json(Json &j, const Body &b) {
  std::visit(
      [&](const auto &v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ThemeBody>)
          j = Json{{"kind", "theme"}, {"ontology_id", v.ontology}, {"theme_id", v.theme}};
        else if constexpr (std::is_same_v<T, GraphBody>)
          j = Json{{"kind", "graph"}, {"graph_id", v.graph}};
        else if constexpr (std::is_same_v<T, ViewpointBody>)
          j = Json{{"kind", "viewpoint"}, {"instance", v.instance}};
        else
          j = Json{{"kind", "note"}, {"text", v.text}};
      },
      b);
}

void from_json(const Json &j, Body &b) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "theme")
    b = ThemeBody{j.at("ontology_id").get<OntologyId>(), j.at("theme_id").get<ThemeId>()};
  else if (kind == "graph")
    b = GraphBody{j.at("graph_id").get<GraphId>()};
  else if (kind == "viewpoint")
    b = ViewpointBody{j.at("instance").get<viewpoint::ViewpointInstance>()};
  else if (kind == "note")
    b = NoteBody{j.at("text").get<std::string>()};
  else
    throw Error(Errc::validation, "unknown annotation body kind '" + kind + "'");
}

void to_json(Json &j, const Annotation &a) {
  j = Json{{"id", a.id},
           {"target", a.target},
           {"body", a.body},
           {"author", a.author},
           {"created_at", format_timestamp(a.created_at)},
           {"visibility", a.visibility},
           {"retracted", a.retracted}};
}

void from_json(const Json &j, Annotation &a) {
  a.id = j.at("id").get<AnnotationId>();
  a.target = j.at("target").get<Target>();
  a.body = j.at("body").get<Body>();
  a.author = j.at("author").get<UserId>();
  a.created_at = parse_timestamp(j.at("created_at").get<std::string>());
  a.visibility = j.at("visibility").get<Visibility>();
  a.retracted = j.value("retracted", false);
}

void to_json(Json &j, const Bookmark &b) {
  j = Json{{"id", b.id},
           {"event_id", b.event},
           {"note", b.note},
           {"owner", b.owner},
           {"visibility", b.visibility},
           {"created_at", format_timestamp(b.created_at)}};
}

void from_json(const Json &j, Bookmark &b) {
  b.id = j.at("id").get<BookmarkId>();
  b.event = j.at("event_id").get<EventId>();
  b.note = j.value("note", std::string());
  b.owner = j.at("owner").get<UserId>();
  b.visibility = j.at("visibility").get<Visibility>();
  b.created_at = parse_timestamp(j.at("created_at").get<std::string>());
}

}  // namespace avarc::annotation
