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

#include "peerhol/engine.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace peerhol {
namespace {

ScriptFailure failure_of(const Error& e) { return {e.kind(), e.what(), e.position()}; }

}  // namespace

std::vector<std::pair<std::string, Value>> bindings_since(const Env& env, const Env& base) {
  std::vector<std::pair<std::string, Value>> out;
  std::set<std::string> seen;
  for (const EnvNode* n = env.get(); n != nullptr && n != base.get(); n = n->next.get()) {
    if (!seen.insert(n->name).second) continue;
    if (n->value) out.emplace_back(n->name, *n->value);
  }
  return {out.rbegin(), out.rend()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kStorageFailure, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Engine::Engine(std::unique_ptr<StorageBackend> backend, StoreOptions store_options,
               EngineOptions options)
    : options_(std::move(options)),
      store_(std::move(backend), std::move(store_options)),
      tree_(store_),
      chronicles_(std::make_unique<Chronicles>(store_, tree_)) {
  if (options_.bootstrap.empty()) options_.bootstrap = std::string(default_bootstrap());
  if (!chronicles_->newest(kRootChronicle)) bootstrap();
}

void Engine::bootstrap() {
  RunOptions ro;
  ro.user = kRootChronicle.owner;
  ro.publishing = kRootChronicle;
  ro.max_call_depth = options_.max_call_depth;
  std::vector<ContextRef> owned;
  CreationHooks hooks;
  hooks.owner = kRootChronicle.owner;
  const ContextPtr root = tree_.create_root(hooks);
  Interpreter interp(tree_, chronicles_.get(), root, ro);
  State final_state;
  try {
    run_with_large_stack([&] {
      const script::Block block = script::parse_script(options_.bootstrap);
      final_state = interp.exec_block(block, State{root, nullptr, nullptr});
    });
  } catch (const Error& e) {
    std::string where;
    if (e.position()) {
      where = " at " + std::to_string(e.position()->line) + ":" +
              std::to_string(e.position()->column);
    }
    fail(ErrorKind::kInternalError, "root theory failed" + where + ": " + e.what());
  }
  owned.push_back(root->ref());
  for (const auto& c : interp.created()) owned.push_back(c->ref());
  chronicles_->publish(kRootChronicle, owned, final_state.ctx->ref(), options_.bootstrap, {});
}

ContextPtr Engine::root(const Assignment& a) const {
  std::uint64_t v = 0;
  if (auto it = a.find(kRootChronicle); it != a.end()) {
    v = it->second;
  } else {
    v = chronicles_->newest(kRootChronicle)->version;
  }
  const auto rec = chronicles_->version({kRootChronicle.owner, kRootChronicle.name, v});
  if (!rec) fail(ErrorKind::kUnknownChronicle, "root chronicle has no version " + std::to_string(v));
  return tree_.load(rec->final_context);
}

ExecuteReport Engine::execute(const ExecuteRequest& request) {
  ExecuteReport report;
  RunOptions ro;
  ro.user = request.user;
  ro.assignment = request.assignment;
  ro.publishing = request.publish;
  ro.max_call_depth = options_.max_call_depth;
  ro.print = [&report](const std::string& s) { report.output.push_back(s); };
  std::optional<Interpreter> interp;
  try {
    if (request.publish && request.publish->owner != request.user) {
      fail(ErrorKind::kAuthFailure, "only " + request.publish->owner + " can publish " +
                                        request.publish->to_string());
    }
    if (request.publish && *request.publish == kRootChronicle) {
      fail(ErrorKind::kAuthFailure, "the root chronicle is maintained by the system");
    }
    const ContextPtr start = root(request.assignment);
    interp.emplace(tree_, chronicles_.get(), start, ro);
    run_with_large_stack([&] {
      const script::Block block = script::parse_script(request.script);
      std::optional<Value> value;
      const State st = interp->exec_block(block, State{start, nullptr, nullptr}, &value);
      report.result = value;
      report.bindings = bindings_since(st.env, nullptr);
      ContextPtr final_ctx = st.ctx;
      if (request.publish) {
        if (!interp->created_here(final_ctx->ref())) {
          final_ctx = tree_.import(final_ctx, interp->hooks());
        }
        std::vector<ContextRef> owned;
        for (const auto& c : interp->created()) owned.push_back(c->ref());
        Assignment used = interp->used();
        used[kRootChronicle] = chronicles_->owner_of(start)->version;
        report.published =
            chronicles_->publish(*request.publish, owned, final_ctx->ref(), request.script, used);
      }
      report.final_context = final_ctx->ref();
    });
  } catch (const Error& e) {
    report.error = failure_of(e);
  }
  if (interp) {
    for (const auto& c : interp->created()) report.created.push_back(c->ref());
  }
  if (report.published && request.repair) report.repair = repair();
  return report;
}

RepairReport Engine::repair() {
  std::lock_guard lock(repair_mu_);
  return chronicles_->repair_sweep(
      [this](const ChronicleVersionRecord& rec) -> std::variant<VersionKey, std::string> {
        ExecuteRequest req;
        req.user = rec.key.owner;
        req.script = rec.script;
        req.publish = ChronicleId{rec.key.owner, rec.key.name};
        req.repair = false;
        const ExecuteReport r = execute(req);
        if (r.error) {
          std::string msg = std::string(error_kind_name(r.error->kind)) + ": " + r.error->message;
          if (r.error->pos) {
            msg += " at " + std::to_string(r.error->pos->line) + ":" +
                   std::to_string(r.error->pos->column);
          }
          return msg;
        }
        return *r.published;
      });
}

Engine::Session::Session(Engine& engine, std::string user)
    : engine_(engine),
      interp_(engine.tree_, engine.chronicles_.get(), engine.root(),
              [&] {
                RunOptions ro;
                ro.user = std::move(user);
                ro.max_call_depth = engine.options_.max_call_depth;
                ro.print = [this](const std::string& s) { output_.push_back(s); };
                return ro;
              }()),
      state_{interp_.root(), nullptr, nullptr} {}

ExecuteReport Engine::Session::run(const std::string& source) {
  ExecuteReport report;
  output_.clear();
  const std::size_t before = interp_.created().size();
  try {
    run_with_large_stack([&] {
      const script::Block block = script::parse_script(source);
      std::optional<Value> value;
      State st = interp_.exec_block(block, state_, &value);
      report.result = value;
      report.bindings = bindings_since(st.env, state_.env);
      report.final_context = st.ctx->ref();
      state_ = std::move(st);
    });
  } catch (const Error& e) {
    report.error = failure_of(e);
  }
  for (std::size_t i = before; i < interp_.created().size(); ++i) {
    report.created.push_back(interp_.created()[i]->ref());
  }
  report.output = output_;
  return report;
}

}  // namespace peerhol
