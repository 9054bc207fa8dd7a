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

#include <sodium.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <regex>
#include <set>

#include "json.hpp"
#include "peerhol/service.hpp"
#include "render.hpp"

namespace peerhol {
namespace {

using nlohmann::json;

const std::vector<RouteInfo> kRoutes = {
    {"POST", "/api/user", false, {"login", "password"}},
    {"POST", "/api/login", false, {"login", "password"}},
    {"POST", "/api/logout", false, {}},
    {"POST", "/api/execute", true, {"script", "chronicle", "assignment"}},
    {"POST", "/api/repair", true, {}},
    {"GET", "/api/context/{key}/{index}", true, {}},
    {"GET", "/api/chronicles", true, {}},
    {"GET", "/api/chronicle/{owner}/{name}", true, {}},
    {"GET", "/api/chronicle/{owner}/{name}/{version}", true, {}},
};

// Thrown by handlers; becomes a JSON error document.
struct HttpError {
  int status;
  std::string kind;
  std::string message;
};

[[noreturn]] void http_error(int status, std::string kind, std::string message) {
  throw HttpError{status, std::move(kind), std::move(message)};
}

HttpResponse json_response(int status, const json& body) {
  HttpResponse r;
  r.status = status;
  r.body = body.dump();
  return r;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t j = std::min(path.find('/', i), path.size());
    out.push_back(path.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<std::map<std::string, std::string>> match(const std::string& pattern,
                                                        const std::vector<std::string>& parts) {
  const auto pat = split_path(pattern);
  if (pat.size() != parts.size()) return std::nullopt;
  std::map<std::string, std::string> params;
  for (std::size_t i = 0; i < pat.size(); ++i) {
    if (pat[i].front() == '{') {
      params[pat[i].substr(1, pat[i].size() - 2)] = parts[i];
    } else if (pat[i] != parts[i]) {
      return std::nullopt;
    }
  }
  return params;
}

std::uint64_t parse_uint(const std::string& s, const char* what) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    http_error(404, "NotFound", std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

bool valid_login(const std::string& s) {
  static const std::regex re("[A-Za-z][A-Za-z0-9_.-]{0,63}");
  return std::regex_match(s, re) && s != kRootChronicle.owner;
}

std::string field_string(const json& body, const char* name, bool required) {
  if (!body.contains(name)) {
    if (required) http_error(422, "BadRequest", std::string("missing field '") + name + "'");
    return {};
  }
  if (!body[name].is_string()) {
    http_error(422, "BadRequest", std::string("field '") + name + "' must be a string");
  }
  return body[name].get<std::string>();
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kAuthFailure: return 403;
    case ErrorKind::kStorageFailure:
    case ErrorKind::kInternalError: return 500;
    default: return 422;
  }
}

std::string random_token() {
  unsigned char buf[16];
  randombytes_buf(buf, sizeof buf);
  char hex[33];
  sodium_bin2hex(hex, sizeof hex, buf, sizeof buf);
  return hex;
}

json refs_json(const std::vector<ContextRef>& refs) {
  json out = json::array();
  for (const auto& r : refs) out.push_back(r.to_string());
  return out;
}

}  // namespace

Api::Api(Engine& engine, ApiOptions options) : engine_(engine), options_(std::move(options)) {
  if (sodium_init() < 0) fail(ErrorKind::kInternalError, "libsodium failed to initialize");
  if (options_.pwhash_ops == 0) options_.pwhash_ops = crypto_pwhash_OPSLIMIT_INTERACTIVE;
  if (options_.pwhash_mem == 0) options_.pwhash_mem = crypto_pwhash_MEMLIMIT_INTERACTIVE;
  for (const auto& m : engine_.store().meta()) {
    if (const auto* u = std::get_if<UserRecord>(&m)) {
      password_hashes_[u->login] = u->password_hash;
    } else if (const auto* s = std::get_if<SessionOpenRecord>(&m)) {
      sessions_[s->token] = Session{s->token, s->login, s->timestamp, s->timestamp};
      by_login_[s->login] = s->token;
    } else if (const auto* c = std::get_if<SessionCloseRecord>(&m)) {
      if (auto it = sessions_.find(c->token); it != sessions_.end()) {
        by_login_.erase(it->second.login);
        sessions_.erase(it);
      }
    }
  }
}

const std::vector<RouteInfo>& Api::routes() { return kRoutes; }

std::int64_t Api::now() const {
  return options_.clock ? options_.clock() : engine_.store().now();
}

void Api::register_user(const std::string& login, const std::string& password) {
  if (!valid_login(login)) throw Error(ErrorKind::kAuthFailure, "invalid login '" + login + "'");
  if (password.empty()) throw Error(ErrorKind::kAuthFailure, "empty password");
  char hash[crypto_pwhash_STRBYTES];
  if (crypto_pwhash_str(hash, password.data(), password.size(), options_.pwhash_ops,
                        options_.pwhash_mem) != 0) {
    fail(ErrorKind::kInternalError, "password hashing ran out of memory");
  }
  std::lock_guard lock(session_mu_);
  if (password_hashes_.count(login)) {
    throw Error(ErrorKind::kAuthFailure, "login '" + login + "' is taken");
  }
  engine_.store().put(UserRecord{login, hash, now()});
  password_hashes_[login] = hash;
}

std::string Api::login(const std::string& login, const std::string& password) {
  std::string hash;
  {
    std::lock_guard lock(session_mu_);
    if (auto it = password_hashes_.find(login); it != password_hashes_.end()) hash = it->second;
  }
  const bool known = !hash.empty();
  if (!known) {
    // same work for unknown users
    static const std::string dummy = [&] {
      char h[crypto_pwhash_STRBYTES];
      if (crypto_pwhash_str(h, "x", 1, options_.pwhash_ops, options_.pwhash_mem) != 0) return std::string();
      return std::string(h);
    }();
    hash = dummy;
  }
  const bool ok = crypto_pwhash_str_verify(hash.c_str(), password.data(), password.size()) == 0;
  if (!known || !ok) throw Error(ErrorKind::kAuthFailure, "invalid login or password");

  std::lock_guard lock(session_mu_);
  const std::int64_t t = now();
  if (auto it = by_login_.find(login); it != by_login_.end()) {
    Session& s = sessions_.at(it->second);
    if (t - s.last_seen <= options_.session_idle_ms) {
      s.last_seen = t;
      return s.token;
    }
    sessions_.erase(it->second);
    by_login_.erase(it);
  }
  Session s{random_token(), login, t, t};
  engine_.store().put(SessionOpenRecord{s.token, login, t});
  by_login_[login] = s.token;
  const std::string token = s.token;
  sessions_[token] = std::move(s);
  return token;
}

void Api::logout(const std::string& token) {
  std::lock_guard lock(session_mu_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) return;
  engine_.store().put(SessionCloseRecord{token, now()});
  by_login_.erase(it->second.login);
  sessions_.erase(it);
}

std::optional<std::string> Api::authenticate(const HttpRequest& request) {
  auto h = request.headers.find("authorization");
  if (h == request.headers.end()) return std::nullopt;
  static constexpr std::string_view kBearer = "Bearer ";
  if (h->second.compare(0, kBearer.size(), kBearer) != 0) return std::nullopt;
  const std::string token = h->second.substr(kBearer.size());
  std::lock_guard lock(session_mu_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) return std::nullopt;
  const std::int64_t t = now();
  if (t - it->second.last_seen > options_.session_idle_ms) {
    by_login_.erase(it->second.login);
    sessions_.erase(it);
    return std::nullopt;
  }
  it->second.last_seen = t;
  return it->second.login;
}

HttpResponse Api::handle(const HttpRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  HttpResponse response;
  try {
    response = dispatch(request);
  } catch (const HttpError& e) {
    response = json_response(e.status, {{"error", {{"kind", e.kind}, {"message", e.message}}}});
  } catch (const Error& e) {
    response = json_response(
        status_for(e.kind()),
        {{"error", {{"kind", std::string(error_kind_name(e.kind()))}, {"message", e.what()}}}});
  } catch (const std::exception& e) {
    response = json_response(500, {{"error", {{"kind", "InternalError"}, {"message", e.what()}}}});
  }
  if (options_.log) {
    const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    options_.log(json{{"method", request.method},
                      {"path", request.path},
                      {"status", response.status},
                      {"us", us}}
                     .dump());
  }
  return response;
}

HttpResponse Api::dispatch(const HttpRequest& request) {
  const auto parts = split_path(request.path);
  const RouteInfo* route = nullptr;
  std::map<std::string, std::string> params;
  bool path_known = false;
  for (const auto& r : kRoutes) {
    auto m = match(r.pattern, parts);
    if (!m) continue;
    path_known = true;
    if (r.method != request.method) continue;
    route = &r;
    params = std::move(*m);
    break;
  }
  if (!route) {
    if (path_known) http_error(405, "MethodNotAllowed", request.method + " " + request.path);
    http_error(404, "NotFound", "no route " + request.path);
  }

  std::optional<std::string> user;
  if (route->authenticated) {
    user = authenticate(request);
    if (!user) http_error(401, "Unauthorized", "missing, invalid or expired session token");
  }

  // Strict bodies: only the declared members, so nothing but a script can
  // ever reach the engine.
  json body = json::object();
  if (!request.body.empty()) {
    try {
      body = json::parse(request.body);
    } catch (const json::parse_error& e) {
      http_error(400, "BadRequest", std::string("malformed JSON: ") + e.what());
    }
    if (!body.is_object()) http_error(400, "BadRequest", "the body must be a JSON object");
    for (const auto& [k, _] : body.items()) {
      if (std::find(route->fields.begin(), route->fields.end(), k) == route->fields.end()) {
        http_error(422, "BadRequest", "unexpected field '" + k + "'");
      }
    }
  }
  const PrintMode mode = request.query.count("ascii") && request.query.at("ascii") != "0"
                             ? PrintMode::kAscii
                             : PrintMode::kUnicode;
  const std::string& p = route->pattern;

  if (p == "/api/user") {
    std::lock_guard lock(write_mu_);
    const std::string login = field_string(body, "login", true);
    try {
      register_user(login, field_string(body, "password", true));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kAuthFailure) {
        http_error(std::string(e.what()).find("taken") != std::string::npos ? 409 : 422,
                   "AuthFailure", e.what());
      }
      throw;
    }
    return json_response(201, {{"login", login}});
  }
  if (p == "/api/login") {
    const std::string login = field_string(body, "login", true);
    try {
      const std::string token = this->login(login, field_string(body, "password", true));
      return json_response(200, {{"token", token}, {"login", login}});
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kAuthFailure) http_error(401, "AuthFailure", e.what());
      throw;
    }
  }
  if (p == "/api/logout") {
    auto h = request.headers.find("authorization");
    if (h != request.headers.end() && h->second.rfind("Bearer ", 0) == 0) {
      logout(h->second.substr(7));
    }
    return json_response(200, {{"ok", true}});
  }
  if (p == "/api/execute") {
    ExecuteRequest req;
    req.user = *user;
    req.script = field_string(body, "script", true);
    if (body.contains("chronicle") && !body["chronicle"].is_null()) {
      const std::string c = field_string(body, "chronicle", false);
      const auto colon = c.find(':');
      req.publish = colon == std::string::npos
                        ? ChronicleId{*user, c}
                        : ChronicleId{c.substr(0, colon), c.substr(colon + 1)};
      if (req.publish->name.empty() || !is_identifier(req.publish->name)) {
        http_error(422, "BadRequest", "invalid chronicle name '" + c + "'");
      }
    }
    if (body.contains("assignment")) {
      if (!body["assignment"].is_object()) {
        http_error(422, "BadRequest", "assignment must map \"owner:name\" to a version");
      }
      for (const auto& [k, v] : body["assignment"].items()) {
        const auto colon = k.find(':');
        if (colon == std::string::npos || !v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
          http_error(422, "BadRequest", "bad assignment entry '" + k + "'");
        }
        req.assignment[{k.substr(0, colon), k.substr(colon + 1)}] = v.get<std::uint64_t>();
      }
    }
    std::lock_guard lock(write_mu_);
    const ExecuteReport report = engine_.execute(req);
    const int status = report.error ? status_for(report.error->kind) : 200;
    return json_response(status, report_json(report, engine_.tree(), mode));
  }
  if (p == "/api/repair") {
    std::lock_guard lock(write_mu_);
    return json_response(200, repair_json(engine_.repair()));
  }
  if (p == "/api/context/{key}/{index}") {
    const ContextRef ref{params["key"],
                         static_cast<std::uint32_t>(parse_uint(params["index"], "index"))};
    ContextPtr ctx;
    try {
      ctx = engine_.tree().load(ref);
    } catch (const Error& e) {
      http_error(404, "NotFound", e.what());
    }
    const ContextNames names(ctx);
    json doc{{"ref", ref.to_string()},
             {"kind", std::string(context_kind_name(ctx->kind()))},
             {"parent", ctx->parent() ? json(ctx->parent()->ref().to_string()) : json(nullptr)},
             {"owner", ctx->owner()},
             {"timestamp", ctx->timestamp()},
             {"depth", ctx->depth()}};
    doc["constants"] = json::array();
    for (const auto& [n, t] : ctx->record().constants) {
      doc["constants"].push_back({{"name", n}, {"type", print_type(t, mode)}});
    }
    doc["assumptions"] = json::array();
    for (const auto& a : ctx->record().assumptions) {
      doc["assumptions"].push_back(print_term(a, names, mode));
    }
    doc["bindings"] = json::array();
    for (const auto& [n, v] : ctx->record().bindings) {
      json b = value_json(v, engine_.tree(), mode);
      b["name"] = n;
      doc["bindings"].push_back(std::move(b));
    }
    doc["unbound"] = ctx->record().unbound;
    // exact owner only; contexts below a published one are not part of it
    json owned_by = nullptr;
    if (const auto owner = engine_.chronicles().owner_of(ctx)) {
      const auto rec = engine_.chronicles().version(*owner);
      if (rec && std::find(rec->owned.begin(), rec->owned.end(), ref) != rec->owned.end()) {
        owned_by = version_json(*owner);
      }
    }
    doc["chronicle_version"] = owned_by;
    return json_response(200, doc);
  }

  Chronicles& ch = engine_.chronicles();
  auto status_json = [&](const ChronicleId& c) {
    const ChronicleStatus s = ch.status(c);
    return json{{"owner", c.owner},
                {"name", c.name},
                {"newest", ch.newest(c)->version},
                {"up_to_date", s.up_to_date},
                {"regeneration_failed", s.regeneration_failed},
                {"message", s.message}};
  };
  auto version_doc = [&](const VersionKey& v, bool with_script) {
    const auto rec = ch.version(v);
    json doc{{"version", v.version},
             {"final_context", rec->final_context.to_string()},
             {"owned", refs_json(rec->owned)},
             {"timestamp", rec->timestamp}};
    doc["dependencies"] = json::array();
    for (const auto& d : ch.direct_dependencies(v)) doc["dependencies"].push_back(version_json(d));
    doc["assignment"] = json::array();
    for (const auto& a : rec->assignment) doc["assignment"].push_back(version_json(a));
    if (with_script) doc["script"] = rec->script;
    return doc;
  };

  if (p == "/api/chronicles") {
    json list = json::array();
    for (const auto& c : ch.list()) list.push_back(status_json(c));
    return json_response(200, {{"chronicles", list}});
  }
  const ChronicleId id{params["owner"], params["name"]};
  if (!ch.newest(id)) http_error(404, "NotFound", "no chronicle " + id.to_string());
  if (p == "/api/chronicle/{owner}/{name}") {
    json doc = status_json(id);
    doc["versions"] = json::array();
    for (const auto& v : ch.versions(id)) doc["versions"].push_back(version_doc(v, false));
    return json_response(200, doc);
  }
  const VersionKey v{id.owner, id.name, parse_uint(params["version"], "version")};
  if (!ch.version(v)) http_error(404, "NotFound", "no version " + to_string(v));
  json doc = version_doc(v, true);
  doc["owner"] = id.owner;
  doc["name"] = id.name;
  return json_response(200, doc);
}

}  // namespace peerhol
