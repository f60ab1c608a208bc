#include <doctest.h>

#include <chrono>

#include "avarc/congraph/graph.hpp"
#include "avarc/congraph/linear_form.hpp"
#include "avarc/congraph/projection.hpp"
#include "support.hpp"

using namespace avarc;
using namespace avarc::congraph;

namespace {

// Industrialization > WesternIndustrialization, SocialChange, Country;
// causes: Thing -> Thing, located_in: Industrialization -> Country.
ontology::ThemeOntology fixture() {
  auto o = ontology::make_ontology(OntologyId("ont-1"), "industrialization", UserId("u1"),
                                   ThemeId("t0"), Timestamp{});
  auto theme = [&](const char *id, const char *name, std::set<ThemeId> parents) {
    ontology::add_theme(o, {ThemeId(id), name, ontology::ThemeCategory::notional, "", parents});
  };
  theme("t1", "Industrialization", {});
  theme("t2", "WesternIndustrialization", {ThemeId("t1")});
  theme("t3", "SocialChange", {});
  theme("t4", "Country", {});
  ontology::add_relation(o, {RelationTypeId("r1"), "causes",
                             ontology::RelationCategory::practical_inference, "", o.root, o.root});
  ontology::add_relation(o, {RelationTypeId("r2"), "located_in",
                             ontology::RelationCategory::localization, "", ThemeId("t1"),
                             ThemeId("t4")});
  return o;
}

Error error_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e;
  }
  FAIL("expected an error");
  return Error(Errc::internal, "");
}

std::vector<std::vector<std::string>> images(const std::vector<Mapping> &ms) {
  std::vector<std::vector<std::string>> out;
  for (const auto &m : ms)
    out.push_back(m.image);
  return out;
}

}  // namespace

TEST_CASE("parse_graph on the documented examples") {
  auto o = fixture();
  auto g = parse_graph(R"([Industrialization]-(causes)->[SocialChange: "urbanization"])", o);
  REQUIRE(g.nodes.size() == 2);
  REQUIRE(g.arcs.size() == 1);
  CHECK(g.nodes[0].theme == ThemeId("t1"));
  CHECK(g.nodes[0].is_generic());
  CHECK(g.nodes[1].theme == ThemeId("t3"));
  CHECK(g.nodes[1].referent == std::optional<std::string>("urbanization"));
  CHECK(g.arcs[0] == RelationArc{RelationTypeId("r1"), g.nodes[0].label, g.nodes[1].label});

  auto thing = parse_graph("[Thing]", o);
  REQUIRE(thing.nodes.size() == 1);
  CHECK(thing.nodes[0].is_generic());
  CHECK(thing.arcs.empty());
  CHECK(print_graph(thing, o) == "[Thing #n1]");

  CHECK(error_of([&] { parse_graph("[Nope]-(causes)->[Thing]", o); }).errc() ==
        Errc::cg_unknown_theme);
  CHECK(error_of([&] { parse_graph("[Thing]-(nope)->[Thing]", o); }).errc() ==
        Errc::cg_unknown_relation);
}

TEST_CASE("grammar details") {
  auto o = fixture();
  SUBCASE("star is generic, whitespace is insignificant") {
    auto a = parse_graph("[ SocialChange : * ]", o);
    auto b = parse_graph("[SocialChange]", o);
    CHECK(structurally_equal(a, b));
  }
  SUBCASE("node ids give coreference across statements") {
    auto g = parse_graph(
        "[Industrialization #i]-(causes)->[SocialChange #s]; [SocialChange #s]-(causes)->[Industrialization #i]",
        o);
    CHECK(g.nodes.size() == 2);
    CHECK(g.arcs.size() == 2);
  }
  SUBCASE("chained arcs hang off the statement head") {
    auto g = parse_graph("[Industrialization]-(causes)->[SocialChange]-(causes)->[Thing]", o);
    CHECK(g.nodes.size() == 3);
    CHECK(g.arcs.size() == 2);
  }
  SUBCASE("quoted referents keep escapes and unicode") {
    auto g = parse_graph(R"([Country: "Fran\"ce \\ à Paris"])", o);
    CHECK(g.nodes[0].referent == std::optional<std::string>("Fran\"ce \\ à Paris"));
    CHECK(structurally_equal(parse_graph(print_graph(g, o), o), g));
  }
  SUBCASE("syntax errors carry a position") {
    auto e = error_of([&] { parse_graph("[Industrialization]-(causes->[Thing]", o); });
    CHECK(e.errc() == Errc::cg_syntax);
    CHECK(e.detail().at("position") == 27);
    CHECK(e.detail().at("line") == 1);
    CHECK(e.detail().at("column") == 28);
    CHECK(error_of([&] { parse_graph("", o); }).errc() == Errc::cg_syntax);
    CHECK(error_of([&] { parse_graph("[Thing", o); }).errc() == Errc::cg_syntax);
    CHECK(error_of([&] { parse_graph("[Thing: ]", o); }).errc() == Errc::cg_syntax);
    CHECK(error_of([&] { parse_graph("[Thing: \"\"]", o); }).errc() != Errc::internal);
    CHECK(error_of([&] { parse_graph("[1Thing]", o); }).errc() == Errc::cg_syntax);
    auto multi = error_of([&] { parse_graph("[Thing];\n  [Thing]-(", o); });
    CHECK(multi.detail().at("line") == 2);
  }
  SUBCASE("signatures are enforced") {
    auto e = error_of([&] { parse_graph("[SocialChange]-(located_in)->[Country]", o); });
    CHECK(e.errc() == Errc::cg_signature);
    CHECK_NOTHROW(parse_graph("[WesternIndustrialization]-(located_in)->[Country]", o));
  }
}

TEST_CASE("print_graph is canonical") {
  auto o = fixture();
  auto g = parse_graph(R"([Industrialization]-(causes)->[SocialChange: "urbanization"])", o);
  const std::string expected =
      R"([Industrialization #n1]; [SocialChange: "urbanization" #n2]; )"
      R"([Industrialization #n1]-(causes)->[SocialChange #n2])";
  CHECK(print_graph(g, o) == expected);
  CHECK(print_graph(parse_graph(expected, o), o) == expected);

  // statement order in the input does not matter
  auto a = parse_graph("[Country #b]; [Industrialization #a]-(located_in)->[Country #b]; [Industrialization #a]-(causes)->[Country #b]", o);
  auto b = parse_graph("[Industrialization #a]-(causes)->[Country #b]-(causes)->[Thing #c]; [Industrialization #a]-(located_in)->[Country #b]", o);
  b.nodes.pop_back();
  b.arcs.erase(std::remove_if(b.arcs.begin(), b.arcs.end(),
                              [](const RelationArc &x) { return x.target == "c"; }),
               b.arcs.end());
  CHECK(print_graph(a, o) == print_graph(b, o));
}

TEST_CASE("validate_graph") {
  auto o = fixture();
  auto g = parse_graph("[Industrialization]-(causes)->[SocialChange]", o);
  CHECK(validate_graph(g, o).empty());
  auto dangling = g;
  dangling.arcs.push_back({RelationTypeId("r1"), "n1", "n9"});
  CHECK_FALSE(validate_graph(dangling, o).empty());
  auto bad_sig = g;
  bad_sig.arcs = {{RelationTypeId("r2"), "n2", "n1"}};
  auto v = validate_graph(bad_sig, o);
  CHECK_FALSE(v.empty());
  auto empty = g;
  empty.nodes.clear();
  empty.arcs.clear();
  CHECK_FALSE(validate_graph(empty, o).empty());
}

TEST_CASE("projection on the fixture") {
  auto o = fixture();
  auto query = parse_graph("[Industrialization]-(causes)->[SocialChange]", o);
  auto target = parse_graph(
      R"([WesternIndustrialization: "UK textile"]-(causes)->[SocialChange: "urbanization"])", o);
  auto france = parse_graph(R"([Industrialization: "France"]-(causes)->[SocialChange])", o);
  query.ontology = target.ontology = france.ontology = o.id;

  auto maps = project(query, target, o);
  CHECK(maps.size() == 1);
  CHECK(images(maps) == testing::oracle_projections(query, target, o));

  auto self = project(target, target, o);
  CHECK(std::find(self.begin(), self.end(), Mapping{{"n1", "n2"}}) != self.end());

  CHECK(project(france, target, o).empty());

  CHECK(match_exists(query, target, o));
  CHECK(match_exists(target, target, o));
  CHECK_FALSE(match_exists(france, target, o));
  // projection is directional
  CHECK_FALSE(match_exists(target, query, o));

  auto top = parse_graph("[Thing]", o);
  top.ontology = o.id;
  CHECK(match_exists(top, target, o));
  CHECK(project(top, target, o).size() == 2);
}

TEST_CASE("projection is not injective and respects the budget") {
  auto o = fixture();
  auto query = parse_graph("[Thing #a]; [Thing #b]", o);
  auto target = parse_graph("[Country]", o);
  query.ontology = target.ontology = o.id;
  CHECK(images(project(query, target, o)) ==
        std::vector<std::vector<std::string>>{{"n1", "n1"}});

  auto wide = parse_graph("[Thing #a]; [Thing #b]; [Thing #c]; [Thing #d]", o);
  wide.ontology = o.id;
  CHECK(error_of([&] { project(wide, wide, o, {10}); }).errc() == Errc::cg_budget);

  auto other = target;
  other.ontology = OntologyId("ont-2");
  CHECK(error_of([&] { project(query, other, o); }).errc() == Errc::cg_ontology_mismatch);
}

TEST_CASE("parse and print round-trip on 500 random graphs") {
  testing::Rng rng(5);
  const std::vector<std::string> referents{"", "", "France", "UK textile", "l'usine",
                                           "quote\"d", "back\\slash", "histoire croisée",
                                           "semi;colon [x]"};
  for (int i = 0; i < 500; ++i) {
    auto o = testing::random_ontology(rng, 1 + static_cast<int>(rng() % 12), 1 + static_cast<int>(rng() % 4));
    auto g = testing::random_graph(rng, o, 6, 6, referents);
    REQUIRE(validate_graph(g, o).empty());
    auto text = print_graph(g, o);
    auto back = parse_graph(text, o);
    back.ontology = g.ontology;
    CHECK_MESSAGE(structurally_equal(back, g), text);
    CHECK(print_graph(back, o) == text);
  }
}

TEST_CASE("projection equals the brute-force enumerator") {
  testing::Rng rng(1234);
  const std::vector<std::string> referents{"", "", "", "a", "b"};
  auto started = std::chrono::steady_clock::now();
  int discrepancies = 0, nonempty = 0;
  for (int i = 0; i < 1000; ++i) {
    auto o = testing::random_ontology(rng, 1 + static_cast<int>(rng() % 9), 1 + static_cast<int>(rng() % 3));
    REQUIRE(o.themes.size() <= 10);
    auto q = testing::random_graph(rng, o, 4, 4, referents);
    auto t = testing::random_graph(rng, o, 4, 4, referents);
    auto got = project(q, t, o);
    auto want = testing::oracle_projections(q, t, o);
    if (images(got) != want)
      ++discrepancies;
    nonempty += !want.empty();
    for (const auto &m : got)
      CHECK(is_projection(q, t, o, m));
    CHECK(match_exists(q, t, o) == !want.empty());
    // the identity map is always a projection of a graph into itself
    std::vector<std::string> identity;
    for (const auto &n : t.nodes)
      identity.push_back(n.label);
    auto self = project(t, t, o);
    CHECK(std::find(self.begin(), self.end(), Mapping{identity}) != self.end());
  }
  auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  CHECK(discrepancies == 0);
  CHECK(nonempty > 100);  // the sample is not trivially empty
  CHECK(seconds < 60.0);
}

TEST_CASE("generalizing a query theme never loses mappings") {
  testing::Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    auto o = testing::random_ontology(rng, 8, 2);
    auto q = testing::random_graph(rng, o, 3, 2, {""});
    auto t = testing::random_graph(rng, o, 4, 4, {""});
    auto before = project(q, t, o);
    auto general = q;
    auto &node = general.nodes[rng() % general.nodes.size()];
    const auto &parents = o.theme(node.theme)->parents;
    if (parents.empty())
      continue;
    node.theme = *parents.begin();
    if (!validate_graph(general, o).empty())
      continue;  // the parent may fall outside an arc signature
    auto after = project(general, t, o);
    for (const auto &m : before)
      CHECK(std::find(after.begin(), after.end(), m) != after.end());
  }
}
