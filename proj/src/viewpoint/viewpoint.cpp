#include "avarc/viewpoint/viewpoint.hpp"

#include <charconv>
#include <set>

namespace avarc::viewpoint {

const FeatureDef *ViewpointSchema::feature(std::string_view n) const {
  for (const auto &f : features)
    if (f.name == n)
      return &f;
  return nullptr;
}

void check_features(const std::vector<FeatureDef> &features) {
  if (features.empty())
    throw Error(Errc::validation, "a viewpoint schema needs at least one feature");
  std::set<std::string_view> names;
  for (const auto &f : features) {
    if (f.name.empty())
      throw Error(Errc::validation, "feature name must not be empty");
    if (!names.insert(f.name).second)
      throw Error(Errc::validation, "duplicate feature '" + f.name + "'",
                  Json{{"feature", f.name}});
    if (const auto *e = std::get_if<Enumeration>(&f.kind)) {
      if (e->values.empty())
        throw Error(Errc::validation,
                    "enumeration feature '" + f.name + "' has no values");
      std::set<std::string_view> seen;
      for (const auto &v : e->values)
        if (v.empty() || !seen.insert(v).second)
          throw Error(Errc::validation, "enumeration feature '" + f.name +
                                            "' has an empty or repeated value");
    } else if (const auto *o = std::get_if<Ordinal>(&f.kind)) {
      if (o->min >= o->max)
        throw Error(Errc::validation,
                    "ordinal feature '" + f.name + "' needs min < max");
    }
  }
}

std::vector<Violation> validate_instance(const ViewpointSchema &schema,
                                         const FeatureValues &values) {
  std::vector<Violation> out;
  for (const auto &f : schema.features)
    if (f.required && !values.contains(f.name))
      out.push_back({"feature.missing", "required feature '" + f.name +
                                            "' has no value"});

  for (const auto &[name, value] : values) {
    const auto *f = schema.feature(name);
    if (f == nullptr) {
      out.push_back({"feature.unknown",
                     "'" + name + "' is not a feature of " + schema.name});
      continue;
    }
    std::visit(
        [&](const auto &kind) {
          using K = std::decay_t<decltype(kind)>;
          if constexpr (std::is_same_v<K, Ordinal>) {
            const auto *n = std::get_if<std::int64_t>(&value);
            if (n == nullptr)
              out.push_back({"feature.type", "'" + name + "' expects an integer"});
            else if (*n < kind.min || *n > kind.max)
              out.push_back({"feature.range",
                             "'" + name + "' = " + std::to_string(*n) +
                                 " lies outside [" + std::to_string(kind.min) +
                                 ", " + std::to_string(kind.max) + "]"});
          } else if constexpr (std::is_same_v<K, Enumeration>) {
            const auto *s = std::get_if<std::string>(&value);
            if (s == nullptr)
              out.push_back({"feature.type", "'" + name + "' expects text"});
            else if (std::find(kind.values.begin(), kind.values.end(), *s) ==
                     kind.values.end())
              out.push_back({"feature.value", "'" + *s +
                                                  "' is not an allowed value of '" +
                                                  name + "'"});
          } else {
            if (!std::holds_alternative<std::string>(value))
              out.push_back({"feature.type", "'" + name + "' expects text"});
          }
        },
        f->kind);
  }
  return out;
}

FeatureValue coerce_value(const FeatureDef &def, std::string_view text) {
  if (std::holds_alternative<Ordinal>(def.kind)) {
    std::int64_t n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw Error(Errc::validation,
                  "feature '" + def.name + "' expects an integer, got '" +
                      std::string(text) + "'");
    return n;
  }
  return std::string(text);
}

const std::vector<SchemaTemplate> &schema_templates() {
  static const std::vector<SchemaTemplate> kTemplates = {
      {"segment-analysis",
       "Analysis of an interview segment",
       {
           {"rhetorical_nature",
            Enumeration{{"argumentation", "description", "narration", "refutation"}},
            true, "The rhetorical nature of the interview passage."},
           {"importance", Ordinal{1, 5}, false,
            "Relative importance of a theme developed within the segment or one of its parts."},
           {"credibility", Ordinal{1, 5}, false,
            "Credibility of the information communicated within the segment."},
           {"added_value", FreeText{}, false,
            "Added value of the communicated information."},
           {"specialization_degree", Ordinal{1, 5}, false,
            "Specialization degree of the communicated information."},
       }},
  };
  return kTemplates;
}

const SchemaTemplate &find_schema_template(std::string_view name) {
  for (const auto &t : schema_templates())
    if (t.name == name)
      return t;
  throw Error(Errc::not_found,
              "unknown viewpoint template '" + std::string(name) + "'",
              Json{{"template", name}});
}

std::string value_text(const FeatureValue &v) {
  if (const auto *n = std::get_if<std::int64_t>(&v))
    return std::to_string(*n);
  return std::get<std::string>(v);
}

void to_json(Json &j, const FeatureDef &f) {
  j = Json{{"name", f.name}};
  std::visit(
      [&](const auto &kind) {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, Enumeration>) {
          j["kind"] = "enumeration";
          j["values"] = kind.values;
        } else if constexpr (std::is_same_v<K, Ordinal>) {
          j["kind"] = "ordinal";
          j["min"] = kind.min;
          j["max"] = kind.max;
        } else {
          j["kind"] = "free_text";
        }
      },
      f.kind);
  j["required"] = f.required;
  j["definition"] = f.definition;
}

void from_json(const Json &j, FeatureDef &f) {
  f.name = j.at("name").get<std::string>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "enumeration")
    f.kind = Enumeration{j.at("values").get<std::vector<std::string>>()};
  else if (kind == "ordinal")
    f.kind = Ordinal{j.at("min").get<std::int64_t>(), j.at("max").get<std::int64_t>()};
  else if (kind == "free_text")
    f.kind = FreeText{};
  else
    throw Error(Errc::validation, "unknown feature kind '" + kind + "'");
  f.required = j.value("required", false);
  f.definition = j.value("definition", std::string());
}

void to_json(Json &j, const ViewpointSchema &s) {
  j = Json{{"id", s.id},
           {"name", s.name},
           {"features", s.features},
           {"owner", s.owner},
           {"visibility", s.visibility},
           {"version", s.version},
           {"previous", s.previous ? Json(*s.previous) : Json()},
           {"created_at", format_timestamp(s.created_at)}};
}

void from_json(const Json &j, ViewpointSchema &s) {
  s.id = j.at("id").get<SchemaId>();
  s.name = j.at("name").get<std::string>();
  s.features = j.at("features").get<std::vector<FeatureDef>>();
  s.owner = j.at("owner").get<UserId>();
  s.visibility = j.at("visibility").get<Visibility>();
  s.version = j.value("version", 1);
  if (j.contains("previous") && !j.at("previous").is_null())
    s.previous = j.at("previous").get<SchemaId>();
  else
    s.previous.reset();
  s.created_at = parse_timestamp(j.at("created_at").get<std::string>());
}

Json values_to_json(const FeatureValues &values) {
  Json out = Json::object();
  for (const auto &[name, v] : values) {
    if (const auto *n = std::get_if<std::int64_t>(&v))
      out[name] = *n;
    else
      out[name] = std::get<std::string>(v);
  }
  return out;
}

FeatureValues values_from_json(const Json &j) {
  if (!j.is_object())
    throw Error(Errc::validation, "viewpoint values must be a JSON object");
  FeatureValues out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_number_integer())
      out.emplace(it.key(), it.value().get<std::int64_t>());
    else if (it.value().is_string())
      out.emplace(it.key(), it.value().get<std::string>());
    else
      throw Error(Errc::validation,
                  "feature '" + it.key() + "' must be an integer or a string");
  }
  return out;
}

void to_json(Json &j, const ViewpointInstance &v) {
  j = Json{{"schema_id", v.schema},
           {"values", values_to_json(v.values)},
           {"author", v.author},
           {"created_at", format_timestamp(v.created_at)}};
}

void from_json(const Json &j, ViewpointInstance &v) {
  v.schema = j.at("schema_id").get<SchemaId>();
  v.values = values_from_json(j.at("values"));
  v.author = j.at("author").get<UserId>();
  v.created_at = parse_timestamp(j.at("created_at").get<std::string>());
}

}  // namespace avarc::viewpoint
