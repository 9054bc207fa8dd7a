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

#ifndef PEERHOL_TESTS_FIXTURES_HPP_
#define PEERHOL_TESTS_FIXTURES_HPP_

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "peerhol/engine.hpp"
#include "peerhol/syntax.hpp"

namespace peerhol::testing {

// Deterministic store: counter keys and a frozen clock.
inline StoreOptions fixed_store_options(std::size_t chunk = 64) {
  StoreOptions o;
  o.chunk = chunk;
  o.keys = counter_keys();
  o.clock = fixed_clock(1'700'000'000'000);
  return o;
}

// Published as alice:basics to produce tests/data/golden_store.bin.
inline constexpr const char* kGoldenFixtureScript = R"(
have impl = "∀ x : prop. x ⟶ x" by
begin
  fix "x : prop"
  assume h = "x"
  have "x" by h
end
let five = 5
def twice f x = f (f x)
def dbl n = n + n
let double = twice dbl
)";

inline std::unique_ptr<Engine> make_engine(std::unique_ptr<StorageBackend> backend = nullptr) {
  if (!backend) backend = std::make_unique<MemoryBackend>();
  return std::make_unique<Engine>(std::move(backend), fixed_store_options());
}

inline ExecuteReport run(Engine& engine, const std::string& script,
                         const std::string& user = "alice",
                         std::optional<ChronicleId> publish = std::nullopt) {
  ExecuteRequest req;
  req.user = user;
  req.script = script;
  req.publish = std::move(publish);
  return engine.execute(req);
}

inline std::string describe(const ExecuteReport& r) {
  if (!r.error) return "ok";
  std::string s = std::string(error_kind_name(r.error->kind)) + ": " + r.error->message;
  if (r.error->pos) {
    s += " at " + std::to_string(r.error->pos->line) + ":" +
         std::to_string(r.error->pos->column);
  }
  return s;
}

inline const Value& binding(const ExecuteReport& r, const std::string& name) {
  for (const auto& [n, v] : r.bindings) {
    if (n == name) return v;
  }
  throw std::runtime_error("no binding " + name);
}

// Theorem proposition printed in its home context.
inline std::string proposition_text(ContextTree& tree, const Theorem& th,
                                    PrintMode mode = PrintMode::kUnicode) {
  return print_term(th.proposition(), ContextNames(tree.load(th.context())), mode);
}

inline Term term_in(const ContextPtr& ctx, const std::string& src) {
  return parse_term(src, ContextNames(ctx));
}

}  // namespace peerhol::testing

#endif  // PEERHOL_TESTS_FIXTURES_HPP_
