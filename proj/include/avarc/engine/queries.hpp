#pragma once

#include <optional>
#include <vector>

#include "avarc/engine/state.hpp"

namespace avarc {

/// Events ordered by (created_at, id), optionally restricted to one kind.
std::vector<archive::Event> list_events(const State &s,
                                        std::optional<archive::EventKind> kind = {});

archive::ArchiveStats archive_stats(const State &s);

/// Live annotations on `segment` (any target kind) that `user` may see,
/// ordered by (created_at, id).
std::vector<annotation::Annotation> list_annotations(const State &s,
                                                     const SegmentId &segment,
                                                     const UserId &user);

/// Every resource of `kind` visible to `user`, by id.
std::vector<workspace::ResourceRef> visible_resources(const State &s,
                                                      workspace::ResourceKind kind,
                                                      const UserId &user);

std::vector<annotation::Bookmark> list_bookmarks(const State &s, const UserId &user);

/// Workspaces the user belongs to.
std::vector<workspace::Workspace> list_workspaces(const State &s, const UserId &user);

}  // namespace avarc
