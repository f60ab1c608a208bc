#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "avarc/core/error.hpp"
#include "avarc/core/ids.hpp"
#include "avarc/core/json.hpp"
#include "avarc/core/time.hpp"
#include "avarc/core/visibility.hpp"

namespace avarc::viewpoint {

struct Enumeration {
  std::vector<std::string> values;
  bool operator==(const Enumeration &) const = default;
};

struct Ordinal {
  std::int64_t min = 1;
  std::int64_t max = 5;
  bool operator==(const Ordinal &) const = default;
};

struct FreeText {
  bool operator==(const FreeText &) const = default;
};

using FeatureKind = std::variant<Enumeration, Ordinal, FreeText>;

struct FeatureDef {
  std::string name;
  FeatureKind kind;
  bool required = false;
  std::string definition;

  bool operator==(const FeatureDef &) const = default;
};

/// A formulary. Edits never mutate a schema in place; they produce a new
/// version whose `previous` points back here.
struct ViewpointSchema {
  SchemaId id;
  std::string name;
  std::vector<FeatureDef> features;
  UserId owner;
  Visibility visibility;
  int version = 1;
  std::optional<SchemaId> previous;
  Timestamp created_at;

  const FeatureDef *feature(std::string_view name) const;
};

/// Ordinal values are integers; enumeration and free-text values are text.
using FeatureValue = std::variant<std::int64_t, std::string>;
using FeatureValues = std::map<std::string, FeatureValue>;

struct ViewpointInstance {
  SchemaId schema;
  FeatureValues values;
  UserId author;
  Timestamp created_at;
};

/// Throws Error(validation) for an empty list, duplicate names, an empty or
/// repeated enumeration value or an ordinal with min >= max.
void check_features(const std::vector<FeatureDef> &features);

std::vector<Violation> validate_instance(const ViewpointSchema &schema,
                                         const FeatureValues &values);

/// Interprets raw text (e.g. from a command line) according to the feature
/// kind: ordinals must be integers.
FeatureValue coerce_value(const FeatureDef &def, std::string_view text);

struct SchemaTemplate {
  std::string name;
  std::string title;
  std::vector<FeatureDef> features;
};

const std::vector<SchemaTemplate> &schema_templates();
const SchemaTemplate &find_schema_template(std::string_view name);

std::string value_text(const FeatureValue &v);

void to_json(Json &j, const FeatureDef &f);
void from_json(const Json &j, FeatureDef &f);
void to_json(Json &j, const ViewpointSchema &s);
void from_json(const Json &j, ViewpointSchema &s);
Json values_to_json(const FeatureValues &values);
FeatureValues values_from_json(const Json &j);
void to_json(Json &j, const ViewpointInstance &v);
void from_json(const Json &j, ViewpointInstance &v);

}  // namespace avarc::viewpoint
