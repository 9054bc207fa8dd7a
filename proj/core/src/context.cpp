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

#include "peerhol/context.hpp"

#include <algorithm>

namespace peerhol {
namespace {

Term remap_rec(const Term& t, std::uint32_t depth,
               const std::function<std::uint32_t(std::uint32_t)>& fn) {
  if (t.free_bound() <= depth) return t;
  switch (t.kind()) {
    case Term::Kind::kVar:
      return Term::var(depth + fn(t.index() - depth));
    case Term::Kind::kLam:
      return Term::lam(t.domain(), remap_rec(t.body(), depth + 1, fn), t.hint());
    case Term::Kind::kApp:
      return Term::app(remap_rec(t.fun(), depth, fn), remap_rec(t.arg(), depth, fn));
    case Term::Kind::kConst:
      break;
  }
  return t;
}

Term expect_prop(const Term& t, const ContextPtr& ctx, const char* what) {
  const ContextNames names(ctx);
  if (!typecheck(t, names).is_prop()) {
    throw Error(ErrorKind::kTypeError, std::string(what) + " must be a proposition");
  }
  return t;
}

void check_name(const std::string& name) {
  if (!is_identifier(name)) {
    throw Error(ErrorKind::kNameError, "'" + name + "' is not a valid name");
  }
}

void add_fact(ContextRecord& rec, const Theorem& th, const std::optional<std::string>& label) {
  rec.bindings.emplace_back("fact", Value(th));
  if (label && *label != "fact") rec.bindings.emplace_back(*label, Value(th));
}

}  // namespace

std::string_view context_kind_name(ContextKind kind) {
  switch (kind) {
    case ContextKind::kRoot: return "root";
    case ContextKind::kFix: return "fix";
    case ContextKind::kAssume: return "assume";
    case ContextKind::kDefine: return "define";
    case ContextKind::kObtain: return "obtain";
    case ContextKind::kHave: return "have";
    case ContextKind::kBind: return "bind";
    case ContextKind::kUnbind: return "unbind";
    case ContextKind::kImport: return "import";
  }
  return "?";
}

Context::Context(ContextRef ref, ContextPtr parent, std::string owner,
                 std::int64_t timestamp, ContextRecord record)
    : ref_(std::move(ref)),
      parent_(std::move(parent)),
      owner_(std::move(owner)),
      timestamp_(timestamp),
      record_(std::move(record)) {
  if (parent_) {
    depth_ = parent_->depth_ + 1;
    constant_count_ = parent_->constant_count_;
    constant_scope_ = parent_->constant_scope_;
  }
  if (!record_.constants.empty()) {
    constant_count_ += record_.constants.size();
    constant_scope_ = this;
  }
}

const Value* Context::find_binding(std::string_view name) const {
  for (const auto& [n, v] : record_.bindings) {
    if (n == name) return &v;
  }
  return nullptr;
}

bool Context::masks(std::string_view name) const {
  return std::find(record_.unbound.begin(), record_.unbound.end(), name) !=
         record_.unbound.end();
}

ContextNames::ContextNames(const ContextPtr& ctx) : keep_alive_(ctx) {
  entries_.reserve(ctx ? ctx->constant_count() : 0);
  for (const Context* c = ctx ? ctx->constant_scope() : nullptr; c != nullptr;
       c = c->parent() ? c->parent()->constant_scope() : nullptr) {
    const auto& cs = c->record().constants;
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
      entries_.emplace_back(&it->first, &it->second);
    }
  }
}

ContextPtr ContextTree::create(const ContextPtr& parent, const CreationHooks& hooks,
                               const std::function<ContextRecord(const ContextRef&)>& build) {
  if (hooks.guard) hooks.guard(parent);
  ContextPtr ctx = repo_.append(parent, hooks.owner, build);
  if (hooks.created) hooks.created(ctx);
  return ctx;
}

ContextPtr ContextTree::create_root(const CreationHooks& hooks) {
  return create(nullptr, hooks, [](const ContextRef&) {
    ContextRecord rec;
    rec.kind = ContextKind::kRoot;
    return rec;
  });
}

ContextPtr ContextTree::fix(const ContextPtr& parent, std::string name, Type type,
                            const CreationHooks& hooks) {
  check_name(name);
  return create(parent, hooks, [&](const ContextRef&) {
    ContextRecord rec;
    rec.kind = ContextKind::kFix;
    rec.constants.emplace_back(name, type);
    return rec;
  });
}

ContextPtr ContextTree::assume(const ContextPtr& parent, Term h,
                               std::optional<std::string> label,
                               const CreationHooks& hooks) {
  expect_prop(h, parent, "an assumption");
  if (label) check_name(*label);
  return create(parent, hooks, [&](const ContextRef& ref) {
    ContextRecord rec;
    rec.kind = ContextKind::kAssume;
    rec.assumptions.push_back(h);
    add_fact(rec, Theorem(h, ref), label);
    return rec;
  });
}

ContextPtr ContextTree::define(const ContextPtr& parent, std::string name, Term d,
                               std::optional<std::string> label,
                               const CreationHooks& hooks) {
  check_name(name);
  if (label) check_name(*label);
  const Type type = typecheck(d, ContextNames(parent));
  const Term fact = make_eq(type, Term::var(0), shift_constants(d, 1));
  return create(parent, hooks, [&](const ContextRef& ref) {
    ContextRecord rec;
    rec.kind = ContextKind::kDefine;
    rec.constants.emplace_back(name, type);
    add_fact(rec, Theorem(fact, ref), label);
    return rec;
  });
}

ContextPtr ContextTree::obtain(const ContextPtr& parent, const Theorem& th,
                               std::vector<std::string> names,
                               std::optional<std::string> label,
                               const CreationHooks& hooks) {
  for (const auto& n : names) check_name(n);
  if (label) check_name(*label);
  Term p = normalize(move_theorem(th, parent).proposition());
  std::vector<std::pair<std::string, Type>> constants;
  while ((names.empty() || constants.size() < names.size()) && p.is_app() &&
         p.fun().is_const(ConstId::kExists)) {
    const Type domain = p.fun().instance()->domain().domain();
    const Term& pred = p.arg();
    std::string hint;
    Term body = pred;
    if (pred.is_lam()) {
      hint = pred.hint();
      body = pred.body();
    } else {
      body = Term::app(shift_constants(pred, 1), Term::var(0));
    }
    std::string name = names.empty() ? hint : names[constants.size()];
    if (!is_identifier(name)) name = "x";
    constants.emplace_back(std::move(name), domain);
    p = std::move(body);
  }
  if (constants.empty()) {
    throw Error(ErrorKind::kNotExistential, "the theorem is not an existential");
  }
  if (!names.empty() && constants.size() < names.size()) {
    throw Error(ErrorKind::kNotExistential,
                "the theorem has only " + std::to_string(constants.size()) +
                    " leading existential(s)");
  }
  return create(parent, hooks, [&](const ContextRef& ref) {
    ContextRecord rec;
    rec.kind = ContextKind::kObtain;
    rec.constants = constants;
    add_fact(rec, Theorem(p, ref), label);
    return rec;
  });
}

ContextPtr ContextTree::have(const ContextPtr& parent, Term guard, const Theorem& th,
                             std::optional<std::string> label,
                             const CreationHooks& hooks) {
  if (label) check_name(*label);
  expect_prop(guard, parent, "the guard");
  const Theorem moved = move_theorem(th, parent);
  if (!alpha_beta_eta_equal(guard, moved.proposition())) {
    throw Error(ErrorKind::kGuardMismatch,
                "the guard does not match the proposition of the theorem");
  }
  return create(parent, hooks, [&](const ContextRef& ref) {
    ContextRecord rec;
    rec.kind = ContextKind::kHave;
    add_fact(rec, Theorem(guard, ref), label);
    return rec;
  });
}

ContextPtr ContextTree::bind(const ContextPtr& parent, std::string name, Value value,
                             const CreationHooks& hooks) {
  check_name(name);
  return create(parent, hooks, [&](const ContextRef&) {
    ContextRecord rec;
    rec.kind = ContextKind::kBind;
    rec.bindings.emplace_back(name, value);
    return rec;
  });
}

ContextPtr ContextTree::unbind(const ContextPtr& parent, std::string name,
                               const CreationHooks& hooks) {
  check_name(name);
  return create(parent, hooks, [&](const ContextRef&) {
    ContextRecord rec;
    rec.kind = ContextKind::kUnbind;
    rec.unbound.push_back(name);
    return rec;
  });
}

ContextPtr ContextTree::import(const ContextPtr& target, const CreationHooks& hooks) {
  return create(target, hooks, [](const ContextRef&) {
    ContextRecord rec;
    rec.kind = ContextKind::kImport;
    return rec;
  });
}

std::optional<Value> ContextTree::lookup(const ContextPtr& ctx,
                                         std::string_view name) const {
  for (const Context* c = ctx.get(); c != nullptr; c = c->parent().get()) {
    if (c->masks(name)) return std::nullopt;
    if (const Value* v = c->find_binding(name)) return *v;
  }
  return std::nullopt;
}

Value ContextTree::resolve(const ContextPtr& ctx, std::string_view name) const {
  if (auto v = lookup(ctx, name)) return *v;
  throw Error(ErrorKind::kNameError,
              "'" + std::string(name) + "' is not bound in context " +
                  ctx->ref().to_string());
}

ContextPtr ContextTree::common_ancestor(const ContextPtr& a, const ContextPtr& b) {
  ContextPtr x = a;
  ContextPtr y = b;
  while (x->depth() > y->depth()) x = x->parent();
  while (y->depth() > x->depth()) y = y->parent();
  while (x->ref() != y->ref()) {
    x = x->parent();
    y = y->parent();
    if (!x || !y) {
      throw Error(ErrorKind::kInternalError, "contexts belong to different trees");
    }
  }
  return x;
}

std::size_t ContextTree::constants_between(const ContextPtr& ancestor,
                                           const ContextPtr& descendant) {
  std::size_t k = 0;
  for (const Context* c = descendant.get(); c != nullptr; c = c->parent().get()) {
    if (c->ref() == ancestor->ref()) return k;
    k += c->record().constants.size();
  }
  throw Error(ErrorKind::kNotAncestor,
              ancestor->ref().to_string() + " is not an ancestor of " +
                  descendant->ref().to_string());
}

bool ContextTree::is_ancestor_or_self(const ContextPtr& ancestor, const ContextPtr& ctx) {
  for (const Context* c = ctx.get(); c != nullptr; c = c->parent().get()) {
    if (c->ref() == ancestor->ref()) return true;
  }
  return false;
}

Term ContextTree::move_term(const Term& t, const ContextPtr& from, const ContextPtr& to) {
  const ContextPtr anc = common_ancestor(from, to);
  const auto up = static_cast<int>(constants_between(anc, from));
  const auto down = static_cast<int>(constants_between(anc, to));
  return shift_constants(shift_constants(t, -up), down);
}

ClosureCase ContextTree::closure_case(const Context& ctx) {
  const ContextRecord& rec = ctx.record();
  std::vector<Term> normal_assumptions;
  for (const Term& a : rec.assumptions) normal_assumptions.push_back(normalize(a));
  bool residual = false;
  for (const auto& [name, v] : rec.bindings) {
    if (!contains_theorem(v)) continue;
    if (v.is(Value::Tag::kTheorem)) {
      const Term p = normalize(v.theorem().proposition());
      if (std::find(normal_assumptions.begin(), normal_assumptions.end(), p) !=
          normal_assumptions.end()) {
        continue;
      }
    }
    residual = true;
  }
  if (residual && !rec.assumptions.empty()) {
    throw Error(ErrorKind::kInternalError,
                "context " + ctx.ref().to_string() +
                    " has both assumptions and other theorem bindings");
  }
  return residual ? ClosureCase::kExistential : ClosureCase::kUniversal;
}

Term ContextTree::close_over(const Context& ctx, const Term& proposition) {
  const ContextRecord& rec = ctx.record();
  const auto& cs = rec.constants;
  if (closure_case(ctx) == ClosureCase::kUniversal) {
    Term body = proposition;
    for (auto it = rec.assumptions.rbegin(); it != rec.assumptions.rend(); ++it) {
      body = make_binary(ConstId::kImplies, *it, body);
    }
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
      body = make_binder(ConstId::kForall, it->second, body, it->first);
    }
    return body;
  }
  const auto n = static_cast<std::uint32_t>(cs.size());
  // rank[j]: new index of constant j (0 = newest) among the occurring ones
  std::vector<std::int64_t> rank(n, -1);
  std::uint32_t m = 0;
  for (std::uint32_t j = 0; j < n; ++j) {
    if (occurs_free(proposition, j)) rank[j] = m++;
  }
  Term body = remap_rec(proposition, 0, [&](std::uint32_t i) -> std::uint32_t {
    if (i < n) return static_cast<std::uint32_t>(rank[i]);
    return i - n + m;
  });
  for (std::uint32_t j = 0; j < n; ++j) {
    if (rank[j] < 0) continue;
    const auto& [name, type] = cs[n - 1 - j];
    body = make_binder(ConstId::kExists, type, body, name);
  }
  return body;
}

Theorem ContextTree::move_theorem(const Theorem& th, const ContextPtr& to) const {
  if (th.context() == to->ref()) return th;
  const ContextPtr from = load(th.context());
  const ContextPtr anc = common_ancestor(from, to);
  Term p = th.proposition();
  for (ContextPtr c = from; c->ref() != anc->ref(); c = c->parent()) {
    p = close_over(*c, p);
  }
  p = shift_constants(p, static_cast<int>(constants_between(anc, to)));
  return Theorem(std::move(p), to->ref());
}

}  // namespace peerhol
