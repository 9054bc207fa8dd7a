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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "peerhol/service.hpp"

namespace peerhol {

ServiceConfig ServiceConfig::load(const std::optional<std::string>& path) {
  ServiceConfig c;
  if (path) {
    std::ifstream in(*path);
    if (!in) fail(ErrorKind::kStorageFailure, "cannot read config " + *path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
      c.host = j.value("host", c.host);
      c.port = j.value("port", c.port);
      c.store = j.value("store", c.store);
      c.bootstrap = j.value("bootstrap", c.bootstrap);
      c.sync = j.value("sync", c.sync);
      c.session_idle_hours = j.value("session_idle_hours", c.session_idle_hours);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kCodecError, "config " + *path + ": " + e.what());
    }
  }
  if (const char* v = std::getenv("PEERHOL_HOST")) c.host = v;
  if (const char* v = std::getenv("PEERHOL_PORT")) {
    try {
      c.port = std::stoi(v);
    } catch (const std::exception&) {
      fail(ErrorKind::kCodecError, std::string("PEERHOL_PORT is not a number: ") + v);
    }
  }
  if (const char* v = std::getenv("PEERHOL_STORE")) c.store = v;
  if (const char* v = std::getenv("PEERHOL_BOOTSTRAP")) c.bootstrap = v;
  if (c.port < 0 || c.port > 65535) fail(ErrorKind::kCodecError, "port out of range");
  return c;
}

}  // namespace peerhol
