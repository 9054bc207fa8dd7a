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

// peerhol: batch runner and REPL. Talks to a server (--server) or runs an
// engine in-process over a store file (--store) or memory.

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"
#include "peerhol/engine.hpp"
#include "peerhol/script.hpp"
#include "peerhol/service.hpp"

namespace {

using nlohmann::json;
using namespace peerhol;

constexpr int kExitOk = 0;
constexpr int kExitScript = 1;
constexpr int kExitIo = 2;

struct Options {
  std::vector<std::string> files;
  std::string server;
  std::string store;
  std::string user = "local";
  std::string password;
  std::string publish;
  bool ascii = false;
  bool repair = false;
  bool list = false;
};

// Results come back as the JSON documents the service sends, so both
// targets print the same text.
class Target {
 public:
  virtual ~Target() = default;
  virtual json execute(const std::string& script, const std::string& publish) = 0;
  virtual json repair() = 0;
  virtual json chronicles() = 0;
};

class EmbeddedTarget final : public Target {
 public:
  EmbeddedTarget(const Options& o)
      : engine_(o.store.empty() ? std::unique_ptr<StorageBackend>(new MemoryBackend())
                                : std::make_unique<FileBackend>(o.store, true)),
        user_(o.user),
        mode_(o.ascii ? PrintMode::kAscii : PrintMode::kUnicode) {}

  json execute(const std::string& script, const std::string& publish) override {
    ExecuteRequest req;
    req.user = user_;
    req.script = script;
    if (!publish.empty()) req.publish = parse_chronicle(publish, user_);
    return json::parse(render_report_json(engine_.execute(req), engine_.tree(), mode_));
  }
  json repair() override { return json::parse(render_repair_json(engine_.repair())); }
  json chronicles() override {
    json list = json::array();
    Chronicles& ch = engine_.chronicles();
    for (const auto& c : ch.list()) {
      const ChronicleStatus s = ch.status(c);
      list.push_back({{"owner", c.owner},
                      {"name", c.name},
                      {"newest", ch.newest(c)->version},
                      {"up_to_date", s.up_to_date},
                      {"regeneration_failed", s.regeneration_failed},
                      {"message", s.message}});
    }
    return {{"chronicles", list}};
  }

  Engine& engine() { return engine_; }
  PrintMode mode() const { return mode_; }
  const std::string& user() const { return user_; }

  static ChronicleId parse_chronicle(const std::string& s, const std::string& user) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) return {user, s};
    return {s.substr(0, colon), s.substr(colon + 1)};
  }

 private:
  Engine engine_;
  std::string user_;
  PrintMode mode_;
};

class RemoteTarget final : public Target {
 public:
  RemoteTarget(const Options& o) : client_(o.server), ascii_(o.ascii) {
    client_.set_connection_timeout(10);
    client_.set_read_timeout(600);
    const json creds{{"login", o.user}, {"password", o.password}};
    const json r = call("POST", "/api/login", creds.dump(), /*allow_error=*/false);
    token_ = r.at("token").get<std::string>();
  }
  ~RemoteTarget() override {
    if (!token_.empty()) client_.Post("/api/logout", headers(), "", "application/json");
  }

  json execute(const std::string& script, const std::string& publish) override {
    json body{{"script", script}};
    if (!publish.empty()) body["chronicle"] = publish;
    return call("POST", std::string("/api/execute") + (ascii_ ? "?ascii=1" : ""), body.dump(),
                true);
  }
  json repair() override { return call("POST", "/api/repair", "", false); }
  json chronicles() override { return call("GET", "/api/chronicles", "", false); }

 private:
  httplib::Headers headers() const {
    if (token_.empty()) return {};
    return {{"Authorization", "Bearer " + token_}};
  }

  // Script failures come back as full reports; everything else is fatal.
  json call(const std::string& method, const std::string& path, const std::string& body,
            bool allow_error) {
    auto res = method == "GET" ? client_.Get(path, headers())
                               : client_.Post(path, headers(), body, "application/json");
    if (!res) {
      throw std::runtime_error("cannot reach server: " + httplib::to_string(res.error()));
    }
    json doc = json::parse(res->body, nullptr, false);
    if (res->status == 200 || (allow_error && doc.is_object() && doc.contains("ok"))) return doc;
    std::string msg = "HTTP " + std::to_string(res->status);
    if (doc.is_object() && doc.contains("error")) msg += ": " + doc["error"].value("message", "");
    throw std::runtime_error(msg);
  }

  httplib::Client client_;
  bool ascii_;
  std::string token_;
};

std::string chronicles_text(const json& doc) {
  std::ostringstream out;
  for (const auto& c : doc.at("chronicles")) {
    out << c.at("owner").get<std::string>() << ":" << c.at("name").get<std::string>() << " v"
        << c.at("newest").get<std::uint64_t>();
    if (c.at("regeneration_failed").get<bool>()) {
      out << " regeneration failed: " << c.at("message").get<std::string>();
    } else if (!c.at("up_to_date").get<bool>()) {
      out << " out of date";
    }
    out << "\n";
  }
  return out.str();
}

std::string env_text(EmbeddedTarget& t, const State& s) {
  std::ostringstream out;
  std::set<std::string> seen;
  for (const EnvNode* n = s.env.get(); n != nullptr; n = n->next.get()) {
    if (!seen.insert(n->name).second || !n->value) continue;
    out << n->name << " : " << tag_name(n->value->tag()) << " = "
        << print_value(*n->value, t.engine().tree(), t.mode()) << "\n";
  }
  return out.str();
}

std::string context_text(EmbeddedTarget& t, const State& s) {
  std::ostringstream out;
  const ContextNames names(s.ctx);
  out << s.ctx->ref().to_string() << " " << context_kind_name(s.ctx->kind()) << " depth "
      << s.ctx->depth() << "\n";
  // constants of the whole chain, innermost last
  for (std::size_t i = names.size(); i-- > 0;) {
    out << "  " << names.name_at(i) << " : " << print_type(names.type_at(i), t.mode()) << "\n";
  }
  // assumptions made since the root theory
  const ContextRef root = t.engine().root()->ref();
  for (const Context* c = s.ctx.get(); c != nullptr && c->ref() != root;
       c = c->parent().get()) {
    for (const auto& a : c->record().assumptions) {
      out << "  assume " << print_term(a, ContextNames(t.engine().tree().load(c->ref())), t.mode())
          << "\n";
    }
  }
  return out.str();
}

int repl(EmbeddedTarget& t) {
  Engine::Session session(t.engine(), t.user());
  const bool tty = isatty(STDIN_FILENO);
  std::string buffer;
  std::string line;
  int status = kExitOk;
  auto prompt = [&] {
    if (tty) std::cout << (buffer.empty() ? "peerhol> " : "     ... ") << std::flush;
  };
  prompt();
  while (std::getline(std::cin, line)) {
    if (buffer.empty() && !line.empty() && line[0] == ':') {
      if (line == ":quit" || line == ":q") break;
      if (line == ":context") {
        std::cout << context_text(t, session.state());
      } else if (line == ":env") {
        std::cout << env_text(t, session.state());
      } else {
        std::cout << ":context  current context\n:env      visible bindings\n:quit\n";
      }
      prompt();
      continue;
    }
    buffer += line;
    buffer += '\n';
    if (script::needs_more_input(buffer)) {
      prompt();
      continue;
    }
    const ExecuteReport r = session.run(buffer);
    buffer.clear();
    std::cout << format_report_text(render_report_json(r, t.engine().tree(), t.mode()));
    if (!r.ok()) status = kExitScript;
    prompt();
  }
  if (tty) std::cout << "\n";
  return tty ? kExitOk : status;
}

void apply_config(Options& o, CLI::App& app) {
  const char* path = std::getenv("PEERHOL_CONFIG");
  if (!path) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error(std::string("cannot read PEERHOL_CONFIG ") + path);
  const json j = json::parse(in);
  // command line wins
  if (app.count("--server") == 0) o.server = j.value("server", o.server);
  if (app.count("--store") == 0) o.store = j.value("store", o.store);
  if (app.count("--user") == 0) o.user = j.value("user", o.user);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"peerhol: run proof scripts"};
  Options o;
  app.add_option("files", o.files, "script files, run in order");
  auto* server = app.add_option("--server", o.server, "server URL, e.g. http://127.0.0.1:8080");
  app.add_option("--store", o.store, "store file for in-process runs")->excludes(server);
  app.add_option("--user", o.user, "login (default: local)");
  app.add_option("--password", o.password, "password for --server (or PEERHOL_PASSWORD)");
  app.add_option("--publish", o.publish, "publish each file as NAME or OWNER:NAME");
  app.add_flag("--ascii", o.ascii, "ASCII output");
  app.add_flag("--repair", o.repair, "run a repair sweep");
  app.add_flag("--list", o.list, "list chronicles");
  CLI11_PARSE(app, argc, argv);

  try {
    apply_config(o, app);
    if (o.password.empty()) {
      if (const char* p = std::getenv("PEERHOL_PASSWORD")) o.password = p;
    }
    std::vector<std::string> sources;
    for (const auto& f : o.files) {
      if (!std::filesystem::is_regular_file(f)) {
        std::cerr << "peerhol: no such file " << f << "\n";
        return kExitIo;
      }
      sources.push_back(read_file(f));
    }

    std::unique_ptr<Target> target;
    EmbeddedTarget* embedded = nullptr;
    if (o.server.empty()) {
      auto e = std::make_unique<EmbeddedTarget>(o);
      embedded = e.get();
      target = std::move(e);
    } else {
      target = std::make_unique<RemoteTarget>(o);
    }

    int status = kExitOk;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const json r = target->execute(sources[i], o.publish);
      if (sources.size() > 1) std::cout << "== " << o.files[i] << "\n";
      std::cout << format_report_text(r.dump());
      if (!r.at("ok").get<bool>()) {
        status = kExitScript;
        break;
      }
    }
    if (o.repair) std::cout << format_repair_report_text(target->repair().dump());
    if (o.list) std::cout << chronicles_text(target->chronicles());

    if (sources.empty() && !o.repair && !o.list) {
      if (!embedded) {
        std::cerr << "peerhol: the REPL runs in-process only; drop --server\n";
        return kExitIo;
      }
      return repl(*embedded);
    }
    return status;
  } catch (const Error& e) {
    std::cerr << "peerhol: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "peerhol: " << e.what() << "\n";
    return kExitIo;
  }
}
