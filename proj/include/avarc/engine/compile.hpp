#pragma once

#include "avarc/engine/state.hpp"
#include "avarc/montage/manifest.hpp"

namespace avarc {

/// Short human-readable rendering of an annotation body.
std::string annotation_summary(const State &s, const annotation::Annotation &a);

/// Resolves a navigation path into a self-contained manifest as seen by
/// `user`. Throws montage_empty for a path without nodes, montage_unreachable
/// (detail {"orphans": [...]}) when a node cannot be reached from the entry,
/// and access_denied when the path or one of its segments is hidden.
montage::HyperDocManifest compile_manifest(const State &s, const PathId &path,
                                           const UserId &user);

}  // namespace avarc
