#include "avarc/service/server.hpp"

#include <httplib.h>

#include <fstream>

#include "avarc/core/digest.hpp"

namespace avarc::service {

ServerConfig parse_config(const Json &j) {
  ServerConfig c;
  if (auto listen = j.value("listen", std::string()); !listen.empty()) {
    auto colon = listen.rfind(':');
    if (colon == std::string::npos)
      throw Error(Errc::validation, "listen must be host:port");
    c.host = listen.substr(0, colon);
    try {
      c.port = std::stoi(listen.substr(colon + 1));
    } catch (const std::exception &) {
      throw Error(Errc::validation, "bad port in listen address '" + listen + "'");
    }
  }
  c.store = j.value("store", std::string());
  for (const auto &u : j.value("users", Json::array())) {
    ConfigUser cu;
    cu.id = UserId(u.at("id").get<std::string>());
    cu.display_name = u.value("display_name", cu.id.value);
    if (u.contains("token_hash"))
      cu.token_hash = u.at("token_hash").get<std::string>();
    else if (u.contains("token"))
      cu.token_hash = sha256_hex(u.at("token").get<std::string>());
    c.users.push_back(std::move(cu));
  }
  return c;
}

ServerConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::not_found, "cannot read config " + path.string());
  try {
    return parse_config(Json::parse(in));
  } catch (const nlohmann::json::exception &e) {
    throw Error(Errc::validation, "bad config " + path.string() + ": " + e.what());
  }
}

void ensure_users(Engine &engine, const std::vector<ConfigUser> &users) {
  std::vector<cmd::Command> batch;
  auto snap = engine.snapshot();
  for (const auto &u : users)
    if (!snap->state.users.contains(u.id))
      batch.push_back(cmd::AddUser{u.id, u.display_name, u.token_hash});
  if (!batch.empty())
    engine.commit(batch);
}

struct Server::Impl {
  Api api;
  httplib::Server http;
  explicit Impl(Engine &e) : api(e) { }
};

Server::Server(Engine &engine) : impl_(std::make_unique<Impl>(engine)) {
  auto handler = [this](const httplib::Request &hreq, httplib::Response &hres) {
    Request req;
    req.method = hreq.method;
    req.path = hreq.path;
    for (const auto &[k, v] : hreq.params)
      req.query.emplace(k, v);
    req.body = hreq.body;
    auto auth = hreq.get_header_value("Authorization");
    if (auth.starts_with("Bearer "))
      req.bearer = auth.substr(7);
    auto res = impl_->api.handle(req);
    hres.status = res.status;
    hres.set_content(res.body.dump(), "application/json");
  };
  const std::string pattern = R"(/.*)";
  impl_->http.Get(pattern, handler);
  impl_->http.Post(pattern, handler);
  impl_->http.Put(pattern, handler);
  impl_->http.Delete(pattern, handler);
}

Server::~Server() = default;

int Server::bind(const std::string &host, int port) {
  if (port == 0)
    port = impl_->http.bind_to_any_port(host);
  else if (!impl_->http.bind_to_port(host, port))
    port = -1;
  if (port < 0)
    throw Error(Errc::io, "cannot bind " + host);
  return port;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() { impl_->http.stop(); }

}  // namespace avarc::service
