#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "avarc/core/json.hpp"
#include "avarc/core/time.hpp"
#include "avarc/montage/path.hpp"

namespace avarc::montage {

inline constexpr std::string_view kManifestFormatVersion = "1";

struct AnnotationSummary {
  std::string id;
  std::string kind;
  std::string author;
  std::string summary;
  std::optional<std::pair<Millis, Millis>> part;
};

struct ManifestNode {
  std::string id;
  std::string asset_uri;
  Millis start_ms = 0;
  Millis end_ms = 0;
  std::string caption;
  std::vector<AnnotationSummary> annotations;
};

/// Self-contained description of a compiled navigation path. Nodes appear in
/// breadth-first order from the entry; transitions in path order.
struct HyperDocManifest {
  std::string format_version{kManifestFormatVersion};
  std::string path_id;
  std::string path_name;
  std::string entry;
  std::vector<ManifestNode> nodes;
  std::vector<Transition> transitions;
};

/// Fixed key order: format_version, path, nodes, transitions.
Json manifest_to_json(const HyperDocManifest &m);
HyperDocManifest manifest_from_json(const Json &j);

/// Serialized manifest text (two-space indent, trailing newline).
std::string manifest_text(const HyperDocManifest &m);

struct ExportOptions {
  bool force = false;
};

/// Writes manifest.json, index.html and node-<id>.html per node into
/// `out_dir`, creating it when absent. Refuses a non-empty directory unless
/// `force`. Each file is written to a temporary name and renamed. Returns
/// the written paths relative to out_dir, sorted.
std::vector<std::string> export_site(const HyperDocManifest &m,
                                     const std::filesystem::path &out_dir,
                                     const ExportOptions &options = {});

std::string node_page_name(std::string_view node_id);

}  // namespace avarc::montage
