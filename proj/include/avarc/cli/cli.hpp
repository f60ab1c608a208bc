#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "avarc/core/time.hpp"

namespace avarc::cli {

struct CliEnv {
  Clock clock = system_clock();
  std::optional<std::string> store;  // fallback for --store (AVARC_STORE)
  std::optional<std::string> user;   // fallback for --user (AVARC_USER)
};

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 validation or usage error, 2 not found / access, 3 internal or I/O.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
            const CliEnv &env = {});

}  // namespace avarc::cli
