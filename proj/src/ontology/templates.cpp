#include "avarc/ontology/templates.hpp"

namespace avarc::ontology {

const std::vector<OntologyTemplate> &ontology_templates() {
  using TC = ThemeCategory;
  using RC = RelationCategory;
  static const std::vector<OntologyTemplate> kTemplates = {
      {"interview-rhetoric",
       "Discourse activities of an interviewed researcher",
       {
           {"DiscourseActivity", TC::rhetorical,
            "An activity a speaker performs while talking about a research object.",
            {}},
           {"Arguing", TC::rhetorical,
            "Supporting a claim, hypothesis or theory with reasons.",
            {"DiscourseActivity"}},
           {"Describing", TC::rhetorical,
            "Presenting the properties of an object, data set or situation.",
            {"DiscourseActivity"}},
           {"Narrating", TC::rhetorical,
            "Recounting a sequence of events, such as the genealogy of a problem.",
            {"DiscourseActivity"}},
           {"Refuting", TC::rhetorical,
            "Rejecting a claim or an existing research result.",
            {"DiscourseActivity"}},
           {"ResearchObject", TC::notional,
            "An object, actor, belief or theory of the research field.",
            {}},
           {"ResearchContext", TC::contextual,
            "History, tradition, objectives and resources of a research activity.",
            {}},
       },
       {
           {"part_of", RC::classification, "Part-whole link between themes.",
            "Thing", "Thing"},
           {"causes", RC::practical_inference,
            "The source brings about the target.", "Thing", "Thing"},
           {"analogous_to", RC::epistemic_inference,
            "Reasoning by analogy from the source to the target.", "Thing",
            "Thing"},
           {"preferred_to", RC::modalisation_grading,
            "The source is preferred over the target.", "Thing", "Thing"},
           {"precedes", RC::localization,
            "The source comes before the target in time.", "Thing", "Thing"},
           {"addresses", RC::practical_inference,
            "A discourse activity deals with a research object.",
            "DiscourseActivity", "ResearchObject"},
       }},
      {"research-context",
       "Contextual themes of a research activity",
       {
           {"Context", TC::contextual, "The setting of a research activity.", {}},
           {"History", TC::contextual, "The history of the research field.",
            {"Context"}},
           {"Tradition", TC::contextual, "Schools and traditions of thought.",
            {"Context"}},
           {"Objectives", TC::contextual, "Goals pursued by the research.",
            {"Context"}},
           {"Resources", TC::contextual, "Means available to the research.",
            {"Context"}},
           {"PracticalExploitation", TC::contextual,
            "Practical uses and challenges of the results.", {"Context"}},
       },
       {
           {"precedes", RC::localization,
            "The source comes before the target in time.", "Thing", "Thing"},
           {"located_in", RC::localization,
            "The source takes place within the target.", "Thing", "Thing"},
       }},
  };
  return kTemplates;
}

const OntologyTemplate &find_ontology_template(std::string_view name) {
  for (const auto &t : ontology_templates())
    if (t.name == name)
      return t;
  throw Error(Errc::not_found,
              "unknown ontology template '" + std::string(name) + "'",
              Json{{"template", name}});
}

}  // namespace avarc::ontology
