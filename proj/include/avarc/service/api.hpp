#pragma once

#include <map>
#include <optional>
#include <string>

#include "avarc/core/error.hpp"
#include "avarc/core/json.hpp"
#include "avarc/engine/engine.hpp"

namespace avarc::service {

inline constexpr std::string_view kApiPrefix = "/api/v1";

struct Request {
  std::string method;  // "GET", "POST", ...
  std::string path;    // e.g. "/api/v1/events"
  std::map<std::string, std::string> query;
  std::string body;
  std::optional<std::string> bearer;  // token from "Authorization: Bearer ..."
};

struct Response {
  int status = 200;
  Json body;
};

/// {http_status, code, message, detail}
Json api_error(const Error &e);
Response error_response(const Error &e);

/// Transport-independent request handling. Thread-safe: reads use one
/// engine snapshot per request and writes go through Engine::commit.
class Api {
 public:
  explicit Api(Engine &engine) : engine_(engine) { }

  Response handle(const Request &req);

 private:
  Engine &engine_;
};

}  // namespace avarc::service
