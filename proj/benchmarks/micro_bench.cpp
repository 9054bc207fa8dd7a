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

#include <benchmark/benchmark.h>

#include <memory>

#include "peerhol/engine.hpp"
#include "peerhol/kernel.hpp"
#include "peerhol/syntax.hpp"

namespace peerhol {
namespace {

Engine& shared_engine() {
  static Engine engine(std::make_unique<MemoryBackend>());
  return engine;
}

const char* kFormula = "∀ A. ∀ B. (A ⊆ B) = (∀ x. x ∈ A ⟶ x ∈ B)";

void BM_ParseTerm(benchmark::State& state) {
  const ContextNames names(shared_engine().root());
  for (auto _ : state) benchmark::DoNotOptimize(parse_term(kFormula, names));
}
BENCHMARK(BM_ParseTerm);

void BM_PrintTerm(benchmark::State& state) {
  const ContextNames names(shared_engine().root());
  const Term t = parse_term(kFormula, names);
  for (auto _ : state) benchmark::DoNotOptimize(print_term(t, names));
}
BENCHMARK(BM_PrintTerm);

// Nested redexes; the source roughly doubles with each step.
void BM_Normalize(benchmark::State& state) {
  const ContextNames names(shared_engine().root());
  std::string src = "λ x. f (f x)";
  for (int i = 1; i < state.range(0); ++i) src = "λ x. (" + src + ") ((" + src + ") x)";
  src = "∀ f : set → set. (" + src + ") ∅ = ∅";
  const Term t = parse_term(src, names);
  for (auto _ : state) benchmark::DoNotOptimize(normalize(t));
}
BENCHMARK(BM_Normalize)->DenseRange(1, 6);

void BM_StoreAppend(benchmark::State& state) {
  StoreOptions o;
  o.chunk = static_cast<std::size_t>(state.range(0));
  o.keys = counter_keys();
  o.clock = fixed_clock(0);
  for (auto _ : state) {
    Store store(std::make_unique<MemoryBackend>(), o);
    std::optional<ContextRef> parent;
    for (int i = 0; i < 256; ++i) {
      parent = store.append_record(parent, "bench", [](const ContextRef&) {
        ContextRecord r;
        r.kind = ContextKind::kUnbind;
        r.unbound = {"x"};
        return r;
      });
    }
    benchmark::DoNotOptimize(store.context_count());
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_StoreAppend)->Arg(1)->Arg(16)->Arg(64);

void BM_ScriptRun(benchmark::State& state) {
  Engine& engine = shared_engine();
  ExecuteRequest req;
  req.user = "bench";
  req.script = R"(have impl = "∀ x : prop. x ⟶ x" by
begin
  fix "x : prop"
  assume h = "x"
  have "x" by h
end
def fib n = if n < 2 then n else fib (n - 1) + fib (n - 2) end
val f = fib 12)";
  for (auto _ : state) {
    const ExecuteReport r = engine.execute(req);
    if (!r.ok()) state.SkipWithError(r.error->message.c_str());
  }
}
BENCHMARK(BM_ScriptRun);

}  // namespace
}  // namespace peerhol

BENCHMARK_MAIN();
