#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "avarc/engine/engine.hpp"
#include "avarc/service/api.hpp"

namespace avarc::service {

struct ConfigUser {
  UserId id;
  std::string display_name;
  std::string token_hash;  // hex SHA-256; a plain "token" in the file is hashed on load
};

/// {"listen": "host:port", "store": "path", "users": [{"id", "display_name",
/// "token_hash" | "token"}]}
struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path store;
  std::vector<ConfigUser> users;
};

ServerConfig parse_config(const Json &j);
ServerConfig load_config(const std::filesystem::path &path);

/// Registers configured users that the store does not know yet.
void ensure_users(Engine &engine, const std::vector<ConfigUser> &users);

class Server {
 public:
  explicit Server(Engine &engine);
  ~Server();

  /// Binds to host:port (port 0 picks a free one) and returns the bound port.
  int bind(const std::string &host, int port);
  /// Serves until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace avarc::service
