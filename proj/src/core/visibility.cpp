#include "avarc/core/visibility.hpp"

#include "avarc/core/error.hpp"

namespace avarc {

std::string to_string(const Visibility &v) {
  switch (v.level) {
    case Visibility::Level::Private: return "private";
    case Visibility::Level::Public: return "public";
    case Visibility::Level::Group: return "group:" + v.workspace.value;
  }
  return "private";
}

Visibility parse_visibility(std::string_view text) {
  if (text == "private")
    return Visibility::personal();
  if (text == "public")
    return Visibility::everyone();
  if (text.starts_with("group:") && text.size() > 6)
    return Visibility::group(WorkspaceId(std::string(text.substr(6))));
  throw Error(Errc::validation,
              "invalid visibility '" + std::string(text) +
                  "' (expected private, public or group:<workspace>)");
}

int rank(Visibility::Level level) {
  switch (level) {
    case Visibility::Level::Private: return 0;
    case Visibility::Level::Group: return 1;
    case Visibility::Level::Public: return 2;
  }
  return 0;
}

void to_json(Json &j, const Visibility &v) {
  j = to_string(v);
}

void from_json(const Json &j, Visibility &v) {
  v = parse_visibility(j.get<std::string>());
}

}  // namespace avarc
