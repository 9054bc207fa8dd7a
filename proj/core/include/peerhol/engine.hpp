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

#ifndef PEERHOL_ENGINE_HPP_
#define PEERHOL_ENGINE_HPP_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peerhol/chronicle.hpp"
#include "peerhol/interpreter.hpp"
#include "peerhol/store.hpp"

namespace peerhol {

// The root theory compiled into the library.
std::string_view default_bootstrap();

struct EngineOptions {
  std::string bootstrap;  // root theory source; default_bootstrap() if empty
  std::size_t max_call_depth = 10'000;
};

struct ScriptFailure {
  ErrorKind kind = ErrorKind::kScriptError;
  std::string message;
  std::optional<SourcePos> pos;
};

struct ExecuteRequest {
  std::string user = "system";
  std::string script;
  std::optional<ChronicleId> publish;
  Assignment assignment;
  bool repair = true;  // run a repair sweep after publishing
};

struct ExecuteReport {
  std::optional<ScriptFailure> error;
  std::vector<ContextRef> created;
  std::optional<ContextRef> final_context;
  // Bindings made by the script, oldest first, one per name.
  std::vector<std::pair<std::string, Value>> bindings;
  std::optional<Value> result;
  std::vector<std::string> output;
  std::optional<VersionKey> published;
  std::optional<RepairReport> repair;

  bool ok() const { return !error; }
};

class Engine {
 public:
  // Creates the root chronicle from the bootstrap theory on first use.
  Engine(std::unique_ptr<StorageBackend> backend, StoreOptions store_options = {},
         EngineOptions options = {});

  ExecuteReport execute(const ExecuteRequest& request);
  RepairReport repair();

  // Final context of the root chronicle version selected by `a`.
  ContextPtr root(const Assignment& a = {}) const;

  Store& store() { return store_; }
  ContextTree& tree() { return tree_; }
  Chronicles& chronicles() { return *chronicles_; }

  // Incremental execution for the REPL: state persists between snippets,
  // nothing is published, a failed snippet leaves the state unchanged.
  class Session {
   public:
    Session(Engine& engine, std::string user);
    ExecuteReport run(const std::string& source);
    const State& state() const { return state_; }
    Interpreter& interpreter() { return interp_; }

   private:
    Engine& engine_;
    std::vector<std::string> output_;
    Interpreter interp_;
    State state_;
  };

 private:
  void bootstrap();

  EngineOptions options_;
  Store store_;
  ContextTree tree_;
  std::unique_ptr<Chronicles> chronicles_;
  std::mutex repair_mu_;
};

// Bindings added to `env` since `base`, oldest first, one per name, masks
// skipped.
std::vector<std::pair<std::string, Value>> bindings_since(const Env& env, const Env& base);

std::string read_file(const std::string& path);

}  // namespace peerhol

#endif  // PEERHOL_ENGINE_HPP_
