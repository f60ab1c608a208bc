#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "avarc/ontology/ontology.hpp"

namespace avarc::ontology {

struct ThemeTemplate {
  std::string name;
  ThemeCategory category;
  std::string definition;
  std::vector<std::string> parents;  // by name; empty = root
};

struct RelationTemplate {
  std::string name;
  RelationCategory category;
  std::string definition;
  std::string domain;  // theme name
  std::string range;
};

struct OntologyTemplate {
  std::string name;
  std::string title;
  std::vector<ThemeTemplate> themes;
  std::vector<RelationTemplate> relations;
};

const std::vector<OntologyTemplate> &ontology_templates();

/// Throws Error(not_found) for an unknown template.
const OntologyTemplate &find_ontology_template(std::string_view name);

}  // namespace avarc::ontology
