#include <cstdlib>
#include <iostream>

#include "avarc/cli/cli.hpp"

int main(int argc, char **argv) {
  avarc::cli::CliEnv env;
  if (const char *store = std::getenv("AVARC_STORE"))
    env.store = store;
  if (const char *user = std::getenv("AVARC_USER"))
    env.user = user;
  return avarc::cli::run_cli({argv + 1, argv + argc}, std::cout, std::cerr, env);
}
