// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails. argv[1] is the path of the avarc binary.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "avarc/congraph/linear_form.hpp"
#include "avarc/congraph/projection.hpp"
#include "avarc/engine/compile.hpp"
#include "avarc/engine/engine.hpp"
#include "avarc/engine/queries.hpp"
#include "avarc/montage/manifest.hpp"
#include "support.hpp"

using namespace avarc;
using workspace::ResourceKind;
using workspace::ResourceRef;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records the first failure only; later ones rarely add information.
  void expect(bool ok, const std::string &what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path &p, std::string_view bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::vector<std::string>> images(const std::vector<congraph::Mapping> &ms) {
  std::vector<std::vector<std::string>> out;
  for (const auto &m : ms)
    out.push_back(m.image);
  return out;
}

std::set<std::string> annotation_ids(const std::vector<search::SearchHit> &hits) {
  std::set<std::string> out;
  for (const auto &h : hits)
    for (const auto &a : h.annotations)
      out.insert(a.value);
  return out;
}

Outcome projection_equivalence() {
  Outcome r;
  testing::Rng rng(1234);
  const std::vector<std::string> referents{"", "", "", "a", "b"};
  auto started = std::chrono::steady_clock::now();
  int discrepancies = 0, pairs = 0;
  for (; pairs < 1000; ++pairs) {
    auto o = testing::random_ontology(rng, 1 + static_cast<int>(rng() % 9),
                                      1 + static_cast<int>(rng() % 3));
    r.expect(o.themes.size() <= 10, "ontology larger than 10 themes");
    auto q = testing::random_graph(rng, o, 4, 4, referents);
    auto t = testing::random_graph(rng, o, 4, 4, referents);
    r.expect(q.nodes.size() <= 4 && q.arcs.size() <= 4, "query graph too large");
    if (images(congraph::project(q, t, o)) != testing::oracle_projections(q, t, o))
      ++discrepancies;
  }
  auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  r.expect(discrepancies == 0, std::to_string(discrepancies) + " discrepancies");
  r.expect(seconds < 60.0, "took " + std::to_string(seconds) + " s");
  if (r.pass)
    r.detail = std::to_string(pairs) + " pairs, 0 discrepancies, " + std::to_string(seconds) + " s";
  return r;
}

Outcome subsumption_laws() {
  Outcome r;
  testing::Rng rng(20240611);
  for (int round = 0; round < 200; ++round) {
    auto o = testing::random_ontology(rng, std::uniform_int_distribution<int>(1, 29)(rng), 0);
    std::vector<ThemeId> ids;
    for (const auto &[id, t] : o.themes)
      ids.push_back(id);
    for (int k = 0; k < 10; ++k) {
      try {
        ontology::add_parent(o, ids[rng() % ids.size()], ids[rng() % ids.size()]);
      } catch (const Error &) {
      }
    }
    r.expect(ids.size() <= 30, "DAG larger than 30 nodes");
    for (const auto &a : ids) {
      r.expect(ontology::subsumes(o, a, a), "reflexivity fails");
      auto desc = ontology::descendants(o, a);
      for (const auto &b : ids) {
        bool ab = ontology::subsumes(o, a, b);
        r.expect(ab == testing::oracle_subsumes(o, a, b), "subsumes disagrees with the upward walk");
        r.expect(ab == desc.contains(b), "descendants and subsumes disagree");
        if (ab && a != b)
          r.expect(!ontology::subsumes(o, b, a), "antisymmetry fails");
        if (ab)
          for (const auto &c : ids)
            if (ontology::subsumes(o, b, c))
              r.expect(ontology::subsumes(o, a, c), "transitivity fails");
      }
    }
  }
  if (r.pass)
    r.detail = "200 random DAGs";
  return r;
}

Outcome search_equivalences() {
  Outcome r;
  testing::Rng rng(4242);
  int theme_checks = 0, graph_checks = 0;
  for (int round = 0; round < 40; ++round) {
    Engine engine(EngineOptions{stepping_clock(Timestamp{0}), {}});
    testing::run_workload(engine, rng, {3, 250, 0.1});
    auto snap = engine.snapshot();
    const auto &s = snap->state;
    for (const auto &[u, user] : s.users) {
      for (const auto &[oid, o] : s.ontologies) {
        if (!can_view(s, u, {ResourceKind::ontology, oid.value}))
          continue;
        for (const auto &[tid, t] : o.themes) {
          std::set<std::string> expected;
          for (const auto &[did, d] : o.themes)
            if (testing::oracle_subsumes(o, tid, did))
              for (const auto &id :
                   annotation_ids(search::theme_search(s, snap->index, oid, did, false, u)))
                expected.insert(id);
          r.expect(annotation_ids(search::theme_search(s, snap->index, oid, tid, true, u)) == expected,
                   "expanded theme search differs from the union over descendants");
          ++theme_checks;
        }
        auto query = testing::random_graph(rng, o, 2, 1, {"", "", "France"});
        query.ontology = oid;
        std::set<std::string> expected;
        for (const auto &[aid, a] : s.annotations) {
          const auto *body = std::get_if<annotation::GraphBody>(&a.body);
          if (!body || !testing::oracle_annotation_visible(s, u, a))
            continue;
          const auto &target = s.graph(body->graph);
          if (target.ontology == oid && !testing::oracle_projections(query, target, o).empty())
            expected.insert(aid.value);
        }
        r.expect(annotation_ids(search::graph_search(s, query, u)) == expected,
                 "graph search differs from the projection filter");
        ++graph_checks;
      }
    }
  }
  if (r.pass)
    r.detail = std::to_string(theme_checks) + " theme queries, " + std::to_string(graph_checks) +
               " graph queries";
  return r;
}

Outcome grammar_round_trip() {
  Outcome r;
  testing::Rng rng(5);
  const std::vector<std::string> referents{"", "", "France", "UK textile", "quote\"d",
                                           "back\\slash", "histoire croisée", "semi;colon [x]"};
  for (int i = 0; i < 500; ++i) {
    auto o = testing::random_ontology(rng, 1 + static_cast<int>(rng() % 12),
                                      1 + static_cast<int>(rng() % 4));
    auto g = testing::random_graph(rng, o, 6, 6, referents);
    auto text = congraph::print_graph(g, o);
    auto back = congraph::parse_graph(text, o);
    back.ontology = g.ontology;
    r.expect(congraph::structurally_equal(back, g), "parse(print(g)) != g for " + text);
    r.expect(congraph::print_graph(back, o) == text, "print is not idempotent for " + text);
  }
  if (r.pass)
    r.detail = "500 random graphs";
  return r;
}

Outcome interview_fixture() {
  Outcome r;
  const auto text = testing::werner_metadata_text();
  auto record = archive::parse_metadata_text(text);
  const std::size_t fields = record.entries.size() + (record.profile.empty() ? 0 : 1);
  r.expect(fields == 16, "record has " + std::to_string(fields) + " fields");
  r.expect(record.find("Nom_Invité") && *record.find("Nom_Invité") == "Michael Werner",
           "Nom_Invité missing");
  r.expect(record.find("Durée") && *record.find("Durée") == "environ 10 heures", "Durée missing");

  Engine engine(EngineOptions{stepping_clock(Timestamp{0}), {}});
  engine.commit(cmd::AddUser{UserId("reader"), "Reader", ""});
  auto id = EventId(engine.commit(cmd::RegisterEvent{"interview", record, engine.now()}));
  auto snap = engine.snapshot();
  r.expect(archive::format_metadata_text(snap->state.event(id).metadata) == text,
           "stored record does not round-trip byte-exactly");
  Json doc = snap->state.event(id);
  r.expect(archive::format_metadata_text(doc.get<archive::Event>().metadata) == text,
           "JSON form does not round-trip byte-exactly");
  auto hits = search::keyword_search(snap->state, snap->index, "histoire croisée", UserId("reader"));
  r.expect(hits.size() == 1 && hits[0].event == id, "keyword search did not return the event");
  if (r.pass)
    r.detail = "16 fields, byte-exact, keyword hit " + id.value;
  return r;
}

std::vector<ResourceRef> all_resources(const State &s) {
  std::vector<ResourceRef> out;
  for (const auto &[id, x] : s.ontologies) out.push_back({ResourceKind::ontology, id.value});
  for (const auto &[id, x] : s.schemas) out.push_back({ResourceKind::schema, id.value});
  for (const auto &[id, x] : s.graphs) out.push_back({ResourceKind::graph, id.value});
  for (const auto &[id, x] : s.segments) out.push_back({ResourceKind::segment, id.value});
  for (const auto &[id, x] : s.bookmarks) out.push_back({ResourceKind::bookmark, id.value});
  for (const auto &[id, x] : s.paths) out.push_back({ResourceKind::path, id.value});
  for (const auto &[id, x] : s.annotations) out.push_back({ResourceKind::annotation, id.value});
  return out;
}

std::set<UserId> viewers(const State &s, const ResourceRef &ref) {
  std::set<UserId> out;
  for (const auto &[u, user] : s.users)
    if (testing::oracle_can_view(s, u, ref))
      out.insert(u);
  return out;
}

Outcome visibility_lattice() {
  Outcome r;
  testing::Rng rng(99);
  std::size_t outputs = 0;
  for (int round = 0; round < 100; ++round) {
    Engine engine(EngineOptions{stepping_clock(Timestamp{0}), {}});
    testing::run_workload(engine, rng, {4, 60 + static_cast<int>(rng() % 90), 0.1});
    auto snap = engine.snapshot();
    const auto &s = snap->state;
    auto visible = [&](const UserId &u, ResourceRef ref) {
      ++outputs;
      r.expect(testing::oracle_can_view(s, u, ref),
               "output includes hidden " + std::string(workspace::to_string(ref.kind)) + " " + ref.id);
    };
    for (const auto &[u, user] : s.users) {
      for (auto kind : {ResourceKind::ontology, ResourceKind::schema, ResourceKind::graph,
                        ResourceKind::segment, ResourceKind::path})
        for (const auto &ref : visible_resources(s, kind, u))
          visible(u, ref);
      for (const auto &b : list_bookmarks(s, u))
        visible(u, {ResourceKind::bookmark, b.id.value});
      for (const auto &p : search::montage_search(s, u))
        visible(u, {ResourceKind::path, p.id.value});
      for (const auto &[sid, seg] : s.segments)
        for (const auto &a : list_annotations(s, sid, u)) {
          ++outputs;
          r.expect(testing::oracle_annotation_visible(s, u, a), "list shows hidden annotation " + a.id.value);
        }
      for (auto q : {"histoire", "e", "usine"})
        for (const auto &hit : search::keyword_search(s, snap->index, q, u)) {
          if (hit.segment)
            visible(u, {ResourceKind::segment, hit.segment->value});
          for (const auto &a : hit.annotations) {
            ++outputs;
            r.expect(testing::oracle_annotation_visible(s, u, s.annotation(a)),
                     "keyword search shows hidden annotation " + a.value);
          }
        }
    }

    auto resources = all_resources(s);
    for (int k = 0; k < 5 && !resources.empty(); ++k) {
      auto ref = resources[rng() % resources.size()];
      auto own = ownership(s, ref);
      std::vector<Visibility> higher;
      if (own.visibility.level == Visibility::Level::Private)
        for (const auto &[wid, w] : s.workspaces)
          if (w.has_member(own.owner))
            higher.push_back(Visibility::group(wid));
      if (own.visibility.level != Visibility::Level::Public)
        higher.push_back(Visibility::everyone());
      auto before = viewers(s, ref);
      for (const auto &v : higher) {
        State raised = s;
        cmd::apply(raised, cmd::SetVisibility{std::string(workspace::to_string(ref.kind)), ref.id, v,
                                              own.owner});
        auto after = viewers(raised, ref);
        r.expect(std::includes(after.begin(), after.end(), before.begin(), before.end()),
                 "raising visibility of " + ref.id + " lost a viewer");
      }
    }
  }
  if (r.pass)
    r.detail = "100 stores, " + std::to_string(outputs) + " outputs checked";
  return r;
}

Outcome crash_safety() {
  Outcome r;
  auto dir = testing::scratch_dir("accept-crash");
  std::vector<std::size_t> sizes;
  std::vector<std::string> states;
  {
    Engine *self = nullptr;
    EngineOptions options{stepping_clock(Timestamp{0}), [&](std::string_view point) {
                            if (point != "journal.before_fsync")
                              return;
                            states.push_back(state_to_json(self->snapshot()->state).dump());
                            sizes.push_back(fs::file_size(dir / store::kJournalFile));
                          }};
    Engine engine(dir, options);
    self = &engine;
    testing::Rng rng(23);
    testing::run_workload(engine, rng, {3, 200, 0.15});
    states.push_back(state_to_json(engine.snapshot()->state).dump());
  }
  const auto journal = slurp(dir / store::kJournalFile);

  // every line boundary, every line's first byte and midpoint, and the last byte
  std::set<std::size_t> cuts{0, journal.size()};
  std::size_t start = 0;
  for (std::size_t i = 0; i < journal.size(); ++i)
    if (journal[i] == '\n') {
      cuts.insert(start + 1);
      cuts.insert((start + i) / 2);
      cuts.insert(i);
      cuts.insert(i + 1);
      start = i + 1;
    }
  auto scratch = testing::scratch_dir("accept-crash-cut");
  for (auto cut : cuts) {
    std::size_t complete = 0;
    while (complete < sizes.size() && sizes[complete] <= cut)
      ++complete;
    fs::remove_all(scratch);
    fs::create_directories(scratch);
    spit(scratch / store::kJournalFile, std::string_view(journal).substr(0, cut));
    try {
      Engine engine(scratch, EngineOptions{stepping_clock(Timestamp{0}), {}});
      const auto &s = engine.snapshot()->state;
      r.expect(check_invariants(s).empty(), "invariants broken at cut " + std::to_string(cut));
      r.expect(state_to_json(s).dump() == states[complete],
               "cut " + std::to_string(cut) + " did not recover the last complete batch");
    } catch (const std::exception &e) {
      r.expect(false, "reopen failed at cut " + std::to_string(cut) + ": " + e.what());
    }
  }

  // abort between writing a snapshot and renaming it into place
  {
    Engine engine(dir, EngineOptions{stepping_clock(Timestamp{0}), {}});
    engine.write_snapshot();
    engine.commit(cmd::AddUser{UserId("after-snapshot"), "After", ""});
  }
  auto snapshot_file = dir / store::kSnapshotDir / store::kSnapshotFile;
  const auto prior_snapshot = slurp(snapshot_file);
  std::string prior_state;
  {
    Engine engine(dir, EngineOptions{stepping_clock(Timestamp{0}), {}});
    prior_state = state_to_json(engine.snapshot()->state).dump();
  }
  {
    EngineOptions options{stepping_clock(Timestamp{0}), [](std::string_view point) {
                            if (point == "snapshot.before_rename")
                              throw std::runtime_error("simulated abort");
                          }};
    Engine engine(dir, options);
    bool threw = false;
    try {
      engine.write_snapshot();
    } catch (const std::exception &) {
      threw = true;
    }
    r.expect(threw, "fault hook was not reached");
  }
  r.expect(slurp(snapshot_file) == prior_snapshot, "prior snapshot was replaced");
  {
    Engine engine(dir, EngineOptions{stepping_clock(Timestamp{0}), {}});
    r.expect(state_to_json(engine.snapshot()->state).dump() == prior_state,
             "state changed after the aborted snapshot");
    r.expect(check_invariants(engine.snapshot()->state).empty(), "invariants broken after abort");
  }
  if (r.pass)
    r.detail = std::to_string(cuts.size()) + " journal prefixes of " + std::to_string(sizes.size()) +
               " batches";
  fs::remove_all(scratch);
  fs::remove_all(dir);
  return r;
}

Outcome montage_criterion() {
  Outcome r;
  auto build = [](bool orphan) {
    auto engine = std::make_unique<Engine>(EngineOptions{stepping_clock(Timestamp{0}), {}});
    UserId u("u1");
    engine->commit(cmd::AddUser{u, "One", ""});
    auto ev = EventId(engine->commit(cmd::RegisterEvent{"interview", {}, engine->now()}));
    auto asset = AssetId(engine->commit(cmd::AddAsset{ev, "media/werner-1.mp4", 9'000'000, "MPEG 1"}));
    std::vector<SegmentId> segs;
    for (Millis start : {60000, 180000, 300000, 420000})
      segs.push_back(SegmentId(engine->commit(
          cmd::CreateSegment{asset, start, start + 60000, std::nullopt, u, {}, engine->now()})));
    engine->commit(cmd::AttachNote{annotation::SegmentTarget{segs[1]}, "crossed histories", u, {},
                                   engine->now()});
    auto path = PathId(engine->commit(cmd::CreatePath{"tour", u, {}, engine->now()}));
    for (int i = 0; i < 3; ++i)
      engine->commit(cmd::AddPathNode{path, "", segs[i], "part " + std::to_string(i + 1), u});
    engine->commit(cmd::AddPathTransition{path, "n1", "n2", "next", u});
    engine->commit(cmd::AddPathTransition{path, "n2", "n3", "next", u});
    engine->commit(cmd::AddPathTransition{path, "n1", "n3", "skip", u});
    engine->commit(cmd::AddPathTransition{path, "n3", "n1", "again", u});
    if (orphan)
      engine->commit(cmd::AddPathNode{path, "stray", segs[3], "", u});
    return std::make_pair(std::move(engine), path);
  };

  auto [a, path_a] = build(false);
  auto [b, path_b] = build(false);
  auto ma = compile_manifest(a->snapshot()->state, path_a, UserId("u1"));
  auto text = montage::manifest_text(ma);
  r.expect(text == montage::manifest_text(compile_manifest(b->snapshot()->state, path_b, UserId("u1"))),
           "manifests differ between identical stores");
  r.expect(text == montage::manifest_text(compile_manifest(a->snapshot()->state, path_a, UserId("u1"))),
           "manifests differ between runs");

  auto dir = testing::scratch_dir("accept-montage");
  montage::export_site(ma, dir);
  std::set<std::pair<std::string, std::string>> links, transitions;
  for (const auto &n : ma.nodes)
    for (const auto &href : testing::hrefs(slurp(dir / montage::node_page_name(n.id))))
      if (href != "index.html")
        links.emplace(n.id, href);
  for (const auto &t : ma.transitions)
    transitions.emplace(t.from, montage::node_page_name(t.to));
  r.expect(links == transitions, "exported links differ from the transition set");
  fs::remove_all(dir);

  auto [c, path_c] = build(true);
  try {
    compile_manifest(c->snapshot()->state, path_c, UserId("u1"));
    r.expect(false, "orphan was not reported");
  } catch (const Error &e) {
    r.expect(e.errc() == Errc::montage_unreachable && e.detail().at("orphans") == Json::array({"stray"}),
             "orphan report is not exact: " + e.detail().dump());
  }
  if (r.pass)
    r.detail = "byte-identical manifest, " + std::to_string(links.size()) + " links, orphan 'stray'";
  return r;
}

struct Shell {
  std::string binary;
  fs::path dir;
  int last_code = 0;
  std::string last_err;

  std::string operator()(const std::vector<std::string> &args) {
    auto quote = [](const std::string &s) {
      std::string q = "'";
      for (char ch : s)
        q += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
      return q + "'";
    };
    std::string line = quote(binary) + " --store " + quote((dir / "store").string()) +
                       " --user researcher";
    for (const auto &a : args)
      line += " " + quote(a);
    line += " 2>" + quote((dir / "stderr").string());
    std::string out;
    FILE *pipe = ::popen(line.c_str(), "r");
    if (!pipe)
      throw std::runtime_error("cannot run " + binary);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
      out.append(buf, n);
    int status = ::pclose(pipe);
    last_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    last_err = slurp(dir / "stderr");
    if (last_code != 0)
      throw std::runtime_error("'" + args[0] + " " + (args.size() > 1 ? args[1] : "") + "' exited " +
                               std::to_string(last_code) + ": " + last_err);
    return out.substr(0, out.find('\n'));
  }
};

Outcome end_to_end(const std::string &binary) {
  Outcome r;
  Shell sh{binary, testing::scratch_dir("accept-e2e")};
  try {
    std::ofstream(sh.dir / "werner.txt") << testing::werner_metadata_text();

    // work space
    sh({"init", "--user-id", "researcher", "--name", "Researcher"});
    auto ws = sh({"workspace", "create", "crossed histories"});
    // events and annotated bookmarks
    auto ev = sh({"event", "register", "--kind", "interview", "--metadata-file",
                  (sh.dir / "werner.txt").string()});
    auto asset = sh({"asset", "add", "--event", ev, "--uri", "media/werner-1.mp4", "--duration",
                     "02:30:00", "--format", "MPEG 1"});
    sh({"bookmark", ev, "--note", "transfert culturel"});
    // segments and a frame zone
    auto seg1 = sh({"segment", "create", "--asset", asset, "--start", "00:01:00", "--end", "00:03:00",
                    "--label", "industrialization"});
    auto seg2 = sh({"segment", "create", "--asset", asset, "--start", "00:10:00", "--end", "00:12:30",
                    "--label", "urbanization"});
    auto zone = sh({"zone", "create", "--segment", seg1, "--at", "00:01:30", "--rect", "0.1,0.1,0.5,0.5"});
    // ontology
    auto onto = sh({"ontology", "create", "industrialization"});
    sh({"ontology", "add-theme", "--ontology", onto, "--name", "Industrialization"});
    sh({"ontology", "add-theme", "--ontology", onto, "--name", "WesternIndustrialization", "--parent",
        "Industrialization"});
    sh({"ontology", "add-theme", "--ontology", onto, "--name", "SocialChange"});
    sh({"ontology", "add-rel", "--ontology", onto, "--name", "causes", "--category",
        "practical_inference"});
    sh({"ontology", "validate", onto});
    sh({"annotate", "theme", "--segment", seg1, "--from", "00:01:30", "--to", "00:02:00", "--ontology",
        onto, "--theme", "WesternIndustrialization"});
    // typical scene as a conceptual graph
    auto graph = sh({"cg", "create", "--ontology", onto, "--name", "textile scene",
                     R"([WesternIndustrialization: "UK textile"]-(causes)->[SocialChange: "urbanization"])"});
    sh({"annotate", "graph", "--zone", zone, "--graph", graph});
    // viewpoint
    auto schema = sh({"viewpoint", "load-template", "segment-analysis"});
    sh({"annotate", "viewpoint", "--segment", seg1, "--schema", schema, "--value",
        "rhetorical_nature=argumentation", "--value", "importance=5", "--value", "credibility=4"});
    // montage
    auto path = sh({"montage", "create", "werner tour"});
    sh({"montage", "add-node", "--path", path, "--segment", seg1, "--caption", "Industrialization"});
    sh({"montage", "add-node", "--path", path, "--segment", seg2, "--caption", "Urbanization"});
    sh({"montage", "add-edge", "--path", path, "--from", "n1", "--to", "n2", "--label", "then"});
    sh({"montage", "compile", path, "--out", (sh.dir / "manifest.json").string()});
    // sharing
    sh({"workspace", "share", "--workspace", ws, "--kind", "ontology", "--id", onto});
    sh({"workspace", "share", "--workspace", ws, "--kind", "graph", "--id", graph});
    sh({"visibility", "set", "--kind", "segment", "--id", seg1, "public"});
    auto hit = sh({"--json", "search", "keyword", "histoire croisée"});
    r.expect(!hit.empty(), "keyword search printed nothing");
  } catch (const std::exception &e) {
    r.expect(false, e.what());
  }

  if (r.pass) {
    Engine engine(sh.dir / "store", EngineOptions{});
    const auto &s = engine.snapshot()->state;
    std::size_t themes = 0, graph_ann = 0, vp_ann = 0;
    for (const auto &[id, o] : s.ontologies)
      themes += o.themes.size() - 1;  // not counting the root
    for (const auto &[id, a] : s.annotations) {
      graph_ann += std::holds_alternative<annotation::GraphBody>(a.body);
      vp_ann += std::holds_alternative<annotation::ViewpointBody>(a.body);
    }
    std::size_t compiled = 0;
    try {
      auto m = montage::manifest_from_json(Json::parse(slurp(sh.dir / "manifest.json")));
      compiled = m.nodes.size() == 2 ? 1 : 0;
    } catch (const std::exception &) {
    }
    r.expect(s.workspaces.size() == 1, "workspaces: " + std::to_string(s.workspaces.size()));
    r.expect(s.bookmarks.size() >= 1, "no bookmark");
    r.expect(s.segments.size() >= 1, "no segment");
    r.expect(themes >= 3, "themes: " + std::to_string(themes));
    r.expect(graph_ann >= 1, "no graph annotation");
    r.expect(vp_ann >= 1, "no viewpoint annotation");
    r.expect(compiled == 1 && s.paths.size() == 1, "compiled montages: " + std::to_string(compiled));
    r.expect(check_invariants(s).empty(), "store invariants broken");
    if (r.pass) {
      std::ostringstream d;
      d << s.workspaces.size() << " workspace, " << s.bookmarks.size() << " bookmark, "
        << s.segments.size() << " segments, " << themes << " themes, " << graph_ann
        << " graph annotation, " << vp_ann << " viewpoint annotation, " << compiled
        << " compiled montage";
      r.detail = d.str();
    }
  }
  fs::remove_all(sh.dir);
  return r;
}

}  // namespace

int main(int argc, char **argv) {
  if (argc < 2) {
    std::cerr << "usage: avarc_acceptance <path-to-avarc>\n";
    return 2;
  }
  const std::string binary = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"projection-oracle-equivalence", projection_equivalence},
      {"subsumption-laws", subsumption_laws},
      {"search-equivalences", search_equivalences},
      {"grammar-round-trip", grammar_round_trip},
      {"interview-record-fixture", interview_fixture},
      {"visibility-lattice", visibility_lattice},
      {"crash-safety", crash_safety},
      {"montage", montage_criterion},
      {"end-to-end-cli", [&] { return end_to_end(binary); }},
  };
  int failed = 0;
  for (const auto &[name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
