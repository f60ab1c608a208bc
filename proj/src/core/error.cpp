#include "avarc/core/error.hpp"

#include <array>

namespace avarc {
namespace {

constexpr std::array kErrcTable = {
    ErrcInfo{Errc::validation, "validation", 422, 1},
    ErrcInfo{Errc::invalid_interval, "segment.invalid_interval", 422, 1},
    ErrcInfo{Errc::out_of_range, "segment.out_of_range", 422, 1},
    ErrcInfo{Errc::duplicate_name, "name.duplicate", 409, 1},
    ErrcInfo{Errc::ontology_cycle, "ontology.cycle", 422, 1},
    ErrcInfo{Errc::not_found, "not_found", 404, 2},
    ErrcInfo{Errc::access_denied, "access.denied", 403, 2},
    ErrcInfo{Errc::permission_denied, "permission.denied", 403, 2},
    ErrcInfo{Errc::cg_syntax, "cg.syntax", 422, 1},
    ErrcInfo{Errc::cg_unknown_theme, "cg.unknown_theme", 422, 1},
    ErrcInfo{Errc::cg_unknown_relation, "cg.unknown_relation", 422, 1},
    ErrcInfo{Errc::cg_signature, "cg.signature", 422, 1},
    ErrcInfo{Errc::cg_ontology_mismatch, "cg.ontology_mismatch", 422, 1},
    ErrcInfo{Errc::cg_budget, "cg.budget_exceeded", 422, 1},
    ErrcInfo{Errc::montage_unreachable, "montage.unreachable", 422, 1},
    ErrcInfo{Errc::montage_empty, "montage.empty", 422, 1},
    ErrcInfo{Errc::export_not_empty, "export.dir_not_empty", 409, 1},
    ErrcInfo{Errc::auth_missing, "auth.missing", 401, 2},
    ErrcInfo{Errc::auth_invalid, "auth.invalid", 401, 2},
    ErrcInfo{Errc::bad_request, "request.malformed", 400, 1},
    ErrcInfo{Errc::io, "store.io", 500, 3},
    ErrcInfo{Errc::corrupt, "store.corrupt", 500, 3},
    ErrcInfo{Errc::internal, "internal", 500, 3},
};

}  // namespace

const ErrcInfo &errc_info(Errc e) {
  for (const auto &info : kErrcTable)
    if (info.errc == e)
      return info;
  return kErrcTable.back();
}

std::span<const ErrcInfo> all_errcs() {
  return kErrcTable;
}

void to_json(Json &j, const Violation &v) {
  j = Json{{"code", v.code}, {"message", v.message}};
}

}  // namespace avarc
