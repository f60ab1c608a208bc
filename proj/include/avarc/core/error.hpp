#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "avarc/core/json.hpp"

namespace avarc {

/// Every failure the engine can report. Each value maps to exactly one
/// machine-readable code, one HTTP status and one CLI exit code.
enum class Errc {
  validation,
  invalid_interval,
  out_of_range,
  duplicate_name,
  ontology_cycle,
  not_found,
  access_denied,
  permission_denied,
  cg_syntax,
  cg_unknown_theme,
  cg_unknown_relation,
  cg_signature,
  cg_ontology_mismatch,
  cg_budget,
  montage_unreachable,
  montage_empty,
  export_not_empty,
  auth_missing,
  auth_invalid,
  bad_request,
  io,
  corrupt,
  internal,
};

struct ErrcInfo {
  Errc errc;
  std::string_view code;
  int http_status;
  int exit_code;
};

const ErrcInfo &errc_info(Errc e);
std::span<const ErrcInfo> all_errcs();

class Error : public std::runtime_error {
 public:
  Error(Errc errc, std::string message, Json detail = Json::object())
      : std::runtime_error(std::move(message)), errc_(errc),
        detail_(std::move(detail)) { }

  Errc errc() const noexcept { return errc_; }
  std::string_view code() const { return errc_info(errc_).code; }
  const Json &detail() const noexcept { return detail_; }

 private:
  Errc errc_;
  Json detail_;
};

/// One broken invariant reported by a validate_* operation.
struct Violation {
  std::string code;
  std::string message;

  bool operator==(const Violation &) const = default;
};

void to_json(Json &j, const Violation &v);

}  // namespace avarc
