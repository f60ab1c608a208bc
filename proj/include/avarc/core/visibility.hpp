#pragma once

#include <string>
#include <string_view>

#include "avarc/core/ids.hpp"
#include "avarc/core/json.hpp"

namespace avarc {

/// Three-level sharing lattice: private <= group(workspace) <= public.
struct Visibility {
  enum class Level { Private, Group, Public };

  Level level = Level::Private;
  WorkspaceId workspace;  // set iff level == Group

  static Visibility personal() { return {}; }
  static Visibility group(WorkspaceId w) { return {Level::Group, std::move(w)}; }
  static Visibility everyone() { return {Level::Public, {}}; }

  bool operator==(const Visibility &) const = default;
};

/// "private", "public" or "group:<workspace-id>".
std::string to_string(const Visibility &v);
Visibility parse_visibility(std::string_view text);

/// Position in the lattice, for monotonicity checks.
int rank(Visibility::Level level);

void to_json(Json &j, const Visibility &v);
void from_json(const Json &j, Visibility &v);

}  // namespace avarc
