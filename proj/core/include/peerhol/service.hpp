/* Copyright 2026 The PeerHOL Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef PEERHOL_SERVICE_HPP_
#define PEERHOL_SERVICE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "peerhol/engine.hpp"

namespace peerhol {

// Transport-neutral request and response; the HTTP adapter below and the
// tests both go through Api::handle.
struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Route table entry. `fields` lists every JSON body member the route reads;
// anything else is rejected.
struct RouteInfo {
  std::string method;
  std::string pattern;  // e.g. /api/context/{key}/{index}
  bool authenticated = true;
  std::vector<std::string> fields;
};

struct ApiOptions {
  std::int64_t session_idle_ms = 24LL * 3600 * 1000;
  // argon2id cost; crypto_pwhash_*_INTERACTIVE when zero.
  unsigned long long pwhash_ops = 0;
  std::size_t pwhash_mem = 0;
  Clock clock;  // the store's clock if empty
  std::function<void(const std::string&)> log;  // one JSON line per request
};

class Api {
 public:
  Api(Engine& engine, ApiOptions options = {});

  HttpResponse handle(const HttpRequest& request);
  static const std::vector<RouteInfo>& routes();

  // Also reachable through POST /api/user; exposed for admin tooling.
  // Throws kAuthFailure when the login is taken or malformed.
  void register_user(const std::string& login, const std::string& password);

 private:
  struct Session {
    std::string token;
    std::string login;
    std::int64_t created = 0;
    std::int64_t last_seen = 0;
  };

  HttpResponse dispatch(const HttpRequest& request);
  std::optional<std::string> authenticate(const HttpRequest& request);
  std::string login(const std::string& login, const std::string& password);
  void logout(const std::string& token);
  std::int64_t now() const;

  Engine& engine_;
  ApiOptions options_;
  std::mutex write_mu_;  // script runs, repairs, user and session writes
  mutable std::mutex session_mu_;
  std::map<std::string, std::string> password_hashes_;
  std::map<std::string, Session> sessions_;       // by token
  std::map<std::string, std::string> by_login_;  // login -> token
};

// Report rendering shared by the service and the CLI.
std::string render_report_json(const ExecuteReport& report, ContextTree& tree, PrintMode mode);
std::string render_repair_json(const RepairReport& report);
// Human readable form of a rendered report.
std::string format_report_text(const std::string& report_json);
std::string format_repair_report_text(const std::string& repair_json);

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store;      // empty: in-memory
  std::string bootstrap;  // root theory file; the built-in one if empty
  bool sync = true;
  double session_idle_hours = 24;

  // Reads an optional JSON file, then PEERHOL_HOST, PEERHOL_PORT,
  // PEERHOL_STORE and PEERHOL_BOOTSTRAP. Throws kStorageFailure or
  // kCodecError.
  static ServiceConfig load(const std::optional<std::string>& path);
};

// cpp-httplib front end.
class HttpServer {
 public:
  explicit HttpServer(Api& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 binds an ephemeral port. Returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace peerhol

#endif  // PEERHOL_SERVICE_HPP_
