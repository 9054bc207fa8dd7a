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

#ifndef PEERHOL_INTERPRETER_HPP_
#define PEERHOL_INTERPRETER_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "peerhol/chronicle.hpp"
#include "peerhol/context.hpp"
#include "peerhol/script.hpp"
#include "peerhol/syntax.hpp"
#include "peerhol/value.hpp"

namespace peerhol {

struct RunOptions {
  std::string user = "system";
  Assignment assignment;  // explicit versions; others resolve to the newest
  // Chronicle the run will be published as; enables the dependency guard.
  std::optional<ChronicleId> publishing;
  std::size_t max_call_depth = 10'000;
  std::function<void(const std::string&)> print;
  PrintMode print_mode = PrintMode::kUnicode;
};

// The pair (C, E). `scope` overrides where stored bindings are looked up;
// it is set while running a function restored from the store.
struct State {
  ContextPtr ctx;
  Env env;
  ContextPtr scope;
};

class Interpreter;

class CallSite {
 public:
  CallSite(Interpreter& interp, const State& state) : interp_(interp), state_(state) {}
  Interpreter& interpreter() { return interp_; }
  const State& state() const { return state_; }

 private:
  Interpreter& interp_;
  const State& state_;
};

class Interpreter {
 public:
  // `chronicles` may be null; @-references then fail with kUnknownChronicle.
  Interpreter(ContextTree& tree, Chronicles* chronicles, ContextPtr root, RunOptions options);

  // Folds the statements over the state. `value` receives the value of the
  // block: the last statement's value if it is an expression, else a ref to
  // the final context.
  State exec_block(const script::Block& block, State state, std::optional<Value>* value = nullptr);
  State exec_statement(const script::StmtPtr& stmt, State state, std::optional<Value>* value);
  Value eval(const script::Expr& expr, const State& state);
  Value apply(const Value& f, const Value& g, const State& state);

  // Strings are parsed in `ctx`; terms are moved into it.
  Term as_term(const Value& v, const ContextPtr& ctx);
  // Contexts convert through their "fact" binding; the result is moved into
  // `ctx`.
  Theorem as_theorem(const Value& v, const ContextPtr& ctx);
  Value lookup(const std::string& name, const State& state);
  bool equal(const Value& a, const Value& b, const ContextPtr& ctx);
  std::string show(const Value& v);

  const std::vector<ContextPtr>& created() const { return created_; }
  bool created_here(const ContextRef& ref) const { return created_refs_.count(ref) != 0; }
  // Versions the run resolved for chronicles it referenced.
  const Assignment& used() const { return used_; }
  const RunOptions& options() const { return options_; }
  ContextTree& tree() { return tree_; }
  const ContextPtr& root() const { return root_; }
  const CreationHooks& hooks() const { return hooks_; }

 private:
  Value eval_inner(const script::Expr& expr, const State& state);
  State exec_inner(const script::StmtPtr& stmt, State state, std::optional<Value>* value);
  State exec_control(const script::Expr& expr, State state, Value* value);
  State push_bindings(State state, const ContextPtr& ctx);
  bool bind_pattern(const script::Pattern& p, const Value& v, State& state);
  Value call(const Function& f, const State& state);
  Value binary(const script::Expr& expr, const State& state);
  ContextRef resolve_reference(const script::RefSpec& ref);
  std::uint64_t version_for(const ChronicleId& c);
  Term literal(const script::Expr& expr, const ContextPtr& ctx);

  ContextTree& tree_;
  Chronicles* chronicles_;
  ContextPtr root_;
  RunOptions options_;
  CreationHooks hooks_;
  std::vector<ContextPtr> created_;
  std::unordered_set<ContextRef, ContextRefHash> created_refs_;
  Assignment used_;
  std::size_t depth_ = 0;
};

// Printed form used in reports: theorems as "⊢ p", terms quoted.
std::string print_value(const Value& v, ContextTree& tree, PrintMode mode = PrintMode::kUnicode);

// Runs `fn` on a thread with a large stack, rethrowing its exception.
void run_with_large_stack(const std::function<void()>& fn, std::size_t bytes = 512u << 20);

}  // namespace peerhol

#endif  // PEERHOL_INTERPRETER_HPP_
