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

// peerhol-server: the HTTP API over a store file.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "peerhol/engine.hpp"
#include "peerhol/service.hpp"

namespace {

peerhol::HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace peerhol;
  CLI::App app{"peerhol-server: HTTP API for peerhol"};
  std::string config_path;
  std::string host;
  int port = -1;
  std::string store;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON config file (or PEERHOL_CONFIG)");
  app.add_option("--host", host, "bind address");
  app.add_option("--port", port, "port, 0 for any");
  app.add_option("--store", store, "store file; memory if empty");
  app.add_flag("--quiet", quiet, "no request log");
  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<std::string> path;
    if (!config_path.empty()) {
      path = config_path;
    } else if (const char* env = std::getenv("PEERHOL_CONFIG")) {
      path = env;
    }
    ServiceConfig cfg = ServiceConfig::load(path);
    if (!host.empty()) cfg.host = host;
    if (port >= 0) cfg.port = port;
    if (!store.empty()) cfg.store = store;

    EngineOptions eo;
    if (!cfg.bootstrap.empty()) eo.bootstrap = read_file(cfg.bootstrap);
    std::unique_ptr<StorageBackend> backend;
    if (cfg.store.empty()) {
      backend = std::make_unique<MemoryBackend>();
    } else {
      backend = std::make_unique<FileBackend>(cfg.store, cfg.sync);
    }
    Engine engine(std::move(backend), {}, eo);

    ApiOptions ao;
    ao.session_idle_ms = static_cast<std::int64_t>(cfg.session_idle_hours * 3600 * 1000);
    if (!quiet) ao.log = [](const std::string& line) { std::cerr << line << "\n"; };
    Api api(engine, ao);
    HttpServer server(api);
    const int bound = server.bind(cfg.host, cfg.port);
    std::cout << "listening on " << cfg.host << ":" << bound
              << (cfg.store.empty() ? " (memory store)" : " store " + cfg.store) << std::endl;
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.listen();
    g_server = nullptr;
    return 0;
  } catch (const Error& e) {
    std::cerr << "peerhol-server: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "peerhol-server: " << e.what() << "\n";
    return 2;
  }
}
