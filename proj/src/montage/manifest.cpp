#include "avarc/montage/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "avarc/core/error.hpp"
#include "avarc/core/text.hpp"

namespace avarc::montage {
namespace fs = std::filesystem;
namespace {

void write_file_atomically(const fs::path &target, const std::string &content) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(Errc::io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out)
      throw Error(Errc::io, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec)
    throw Error(Errc::io, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string page_head(std::string_view title) {
  return "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" +
         html_escape(title) + "</title>\n</head>\n<body>\n";
}

constexpr std::string_view kPageTail = "</body>\n</html>\n";

}  // namespace

std::string node_page_name(std::string_view node_id) {
  return "node-" + std::string(node_id) + ".html";
}

Json manifest_to_json(const HyperDocManifest &m) {
  Json nodes = Json::array();
  for (const auto &n : m.nodes) {
    Json annotations = Json::array();
    for (const auto &a : n.annotations) {
      Json part;
      if (a.part)
        part = Json{{"from_ms", a.part->first}, {"to_ms", a.part->second}};
      annotations.push_back(Json{{"id", a.id},
                                 {"kind", a.kind},
                                 {"author", a.author},
                                 {"summary", a.summary},
                                 {"part", part}});
    }
    nodes.push_back(Json{{"id", n.id},
                         {"segment",
                          Json{{"asset_uri", n.asset_uri},
                               {"start_ms", n.start_ms},
                               {"end_ms", n.end_ms}}},
                         {"caption", n.caption},
                         {"annotations", std::move(annotations)}});
  }
  return Json{{"format_version", m.format_version},
              {"path", Json{{"id", m.path_id}, {"name", m.path_name}, {"entry", m.entry}}},
              {"nodes", std::move(nodes)},
              {"transitions", m.transitions}};
}

HyperDocManifest manifest_from_json(const Json &j) {
  HyperDocManifest m;
  m.format_version = j.at("format_version").get<std::string>();
  if (m.format_version != kManifestFormatVersion)
    throw Error(Errc::validation,
                "unsupported manifest format_version '" + m.format_version + "'");
  const auto &path = j.at("path");
  m.path_id = path.at("id").get<std::string>();
  m.path_name = path.at("name").get<std::string>();
  m.entry = path.at("entry").get<std::string>();
  for (const auto &n : j.at("nodes")) {
    ManifestNode node;
    node.id = n.at("id").get<std::string>();
    const auto &seg = n.at("segment");
    node.asset_uri = seg.at("asset_uri").get<std::string>();
    node.start_ms = seg.at("start_ms").get<Millis>();
    node.end_ms = seg.at("end_ms").get<Millis>();
    node.caption = n.at("caption").get<std::string>();
    for (const auto &a : n.at("annotations")) {
      AnnotationSummary s;
      s.id = a.at("id").get<std::string>();
      s.kind = a.at("kind").get<std::string>();
      s.author = a.value("author", std::string());
      s.summary = a.at("summary").get<std::string>();
      if (a.contains("part") && !a.at("part").is_null())
        s.part = std::pair{a.at("part").at("from_ms").get<Millis>(),
                           a.at("part").at("to_ms").get<Millis>()};
      node.annotations.push_back(std::move(s));
    }
    m.nodes.push_back(std::move(node));
  }
  m.transitions = j.at("transitions").get<std::vector<Transition>>();
  return m;
}

std::string manifest_text(const HyperDocManifest &m) {
  return manifest_to_json(m).dump(2) + "\n";
}

std::vector<std::string> export_site(const HyperDocManifest &m,
                                     const fs::path &out_dir,
                                     const ExportOptions &options) {
  std::error_code ec;
  if (fs::exists(out_dir, ec)) {
    if (!fs::is_directory(out_dir))
      throw Error(Errc::validation, out_dir.string() + " is not a directory");
    if (!fs::is_empty(out_dir) && !options.force)
      throw Error(Errc::export_not_empty,
                  "output directory " + out_dir.string() +
                      " is not empty (use --force to overwrite)",
                  Json{{"out_dir", out_dir.string()}});
  } else {
    fs::create_directories(out_dir, ec);
    if (ec)
      throw Error(Errc::io, "cannot create " + out_dir.string() + ": " + ec.message());
  }

  std::map<std::string, const ManifestNode *> by_id;
  for (const auto &n : m.nodes)
    by_id.emplace(n.id, &n);
  for (const auto &t : m.transitions)
    if (!by_id.contains(t.from) || !by_id.contains(t.to))
      throw Error(Errc::validation,
                  "manifest transition " + t.from + " -> " + t.to +
                      " names a node that is not in the manifest");
  if (!by_id.contains(m.entry))
    throw Error(Errc::validation, "manifest entry '" + m.entry + "' is not a node");

  std::vector<std::string> written;
  auto emit = [&](const std::string &name, const std::string &content) {
    write_file_atomically(out_dir / name, content);
    written.push_back(name);
  };

  emit("manifest.json", manifest_text(m));

  std::string index = page_head(m.path_name);
  index += "<h1>" + html_escape(m.path_name) + "</h1>\n";
  index += "<p><a class=\"entry\" href=\"" + node_page_name(m.entry) +
           "\">Start</a></p>\n<ol>\n";
  for (const auto &n : m.nodes)
    index += "<li><a class=\"node\" href=\"" + node_page_name(n.id) + "\">" +
             html_escape(n.caption.empty() ? n.id : n.caption) + "</a></li>\n";
  index += "</ol>\n";
  index += kPageTail;
  emit("index.html", index);

  for (const auto &n : m.nodes) {
    std::string page = page_head(n.caption.empty() ? n.id : n.caption);
    page += "<h1>" + html_escape(n.caption) + "</h1>\n";
    page += "<p class=\"segment\" data-start-ms=\"" + std::to_string(n.start_ms) +
            "\" data-end-ms=\"" + std::to_string(n.end_ms) + "\">" +
            html_escape(n.asset_uri) + " " + format_timecode(n.start_ms) + " - " +
            format_timecode(n.end_ms) + "</p>\n";
    if (!n.annotations.empty()) {
      page += "<ul class=\"annotations\">\n";
      for (const auto &a : n.annotations)
        page += "<li data-kind=\"" + html_escape(a.kind) + "\">" +
                html_escape(a.summary) + "</li>\n";
      page += "</ul>\n";
    }
    page += "<nav>\n";
    for (const auto &t : m.transitions)
      if (t.from == n.id)
        page += "<a class=\"transition\" data-label=\"" + html_escape(t.label) +
                "\" href=\"" + node_page_name(t.to) + "\">" +
                html_escape(t.label.empty() ? t.to : t.label) + "</a>\n";
    page += "<a class=\"home\" href=\"index.html\">Index</a>\n</nav>\n";
    page += kPageTail;
    emit(node_page_name(n.id), page);
  }
  std::sort(written.begin(), written.end());
  return written;
}

}  // namespace avarc::montage
