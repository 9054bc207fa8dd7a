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

#ifndef PEERHOL_TESTS_ORACLES_HPP_
#define PEERHOL_TESTS_ORACLES_HPP_

// Test-side reference implementations. None of these call into the kernel's
// shifting, substitution or normalization code.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "peerhol/term.hpp"

namespace peerhol::oracle {

inline Term shift(const Term& t, int d, std::uint32_t cutoff = 0) {
  switch (t.kind()) {
    case Term::Kind::kConst: return t;
    case Term::Kind::kVar:
      return t.index() < cutoff ? t : Term::var(static_cast<std::uint32_t>(t.index() + d));
    case Term::Kind::kLam: return Term::lam(t.domain(), shift(t.body(), d, cutoff + 1), t.hint());
    case Term::Kind::kApp: return Term::app(shift(t.fun(), d, cutoff), shift(t.arg(), d, cutoff));
  }
  return t;
}

inline bool occurs(const Term& t, std::uint32_t i) {
  switch (t.kind()) {
    case Term::Kind::kConst: return false;
    case Term::Kind::kVar: return t.index() == i;
    case Term::Kind::kLam: return occurs(t.body(), i + 1);
    case Term::Kind::kApp: return occurs(t.fun(), i) || occurs(t.arg(), i);
  }
  return false;
}

// body[arg/0] with the remaining free indices lowered by one.
inline Term subst(const Term& body, const Term& arg, std::uint32_t depth = 0) {
  switch (body.kind()) {
    case Term::Kind::kConst: return body;
    case Term::Kind::kVar:
      if (body.index() < depth) return body;
      if (body.index() == depth) return shift(arg, static_cast<int>(depth));
      return Term::var(body.index() - 1);
    case Term::Kind::kLam:
      return Term::lam(body.domain(), subst(body.body(), arg, depth + 1), body.hint());
    case Term::Kind::kApp:
      return Term::app(subst(body.fun(), arg, depth), subst(body.arg(), arg, depth));
  }
  return body;
}

// Description of the first beta, eta or negation redex in t, if any.
inline std::optional<std::string> find_redex(const Term& t) {
  auto is_const = [](const Term& x, ConstId id) { return x.is_const() && x.const_id() == id; };
  auto is_not = [&](const Term& x) { return x.is_app() && is_const(x.fun(), ConstId::kNot); };
  switch (t.kind()) {
    case Term::Kind::kConst:
    case Term::Kind::kVar: return std::nullopt;
    case Term::Kind::kLam:
      if (t.body().is_app() && t.body().arg().is_var() && t.body().arg().index() == 0 &&
          !occurs(t.body().fun(), 0)) {
        return "eta";
      }
      return find_redex(t.body());
    case Term::Kind::kApp:
      if (t.fun().is_lam()) return "beta";
      if (is_not(t)) {
        if (is_not(t.arg())) return "double negation";
        if (is_const(t.arg(), ConstId::kTrue)) return "not true";
        if (is_const(t.arg(), ConstId::kFalse)) return "not false";
      }
      if (t.fun().is_app() && is_const(t.fun().fun(), ConstId::kImplies) &&
          is_const(t.arg(), ConstId::kFalse)) {
        return "implies false";
      }
      if (auto r = find_redex(t.fun())) return r;
      return find_redex(t.arg());
  }
  return std::nullopt;
}

// Named form: binders get unique names, constants keep the names of the
// stack they were read against.
struct Named {
  enum class Kind { kConst, kName, kLam, kApp } kind;
  Term constant;  // kConst
  std::string name;  // kName, binder name for kLam
  std::optional<Type> domain;
  std::shared_ptr<const Named> a, b;
};
using NamedPtr = std::shared_ptr<const Named>;

// `stack` is newest first. Returns nullptr if an index points past it.
inline NamedPtr to_named(const Term& t, const std::vector<std::string>& stack) {
  int fresh = 0;
  std::vector<std::string> binders;  // innermost last
  std::function<NamedPtr(const Term&)> go = [&](const Term& u) -> NamedPtr {
    switch (u.kind()) {
      case Term::Kind::kConst:
        return std::make_shared<Named>(Named{Named::Kind::kConst, u, {}, {}, {}, {}});
      case Term::Kind::kVar: {
        const std::size_t i = u.index();
        if (i < binders.size()) {
          return std::make_shared<Named>(
              Named{Named::Kind::kName, u, binders[binders.size() - 1 - i], {}, {}, {}});
        }
        if (i - binders.size() >= stack.size()) return nullptr;
        return std::make_shared<Named>(
            Named{Named::Kind::kName, u, stack[i - binders.size()], {}, {}, {}});
      }
      case Term::Kind::kLam: {
        const std::string n = "#b" + std::to_string(fresh++);
        binders.push_back(n);
        NamedPtr body = go(u.body());
        binders.pop_back();
        if (!body) return nullptr;
        return std::make_shared<Named>(Named{Named::Kind::kLam, u, n, u.domain(), body, {}});
      }
      case Term::Kind::kApp: {
        NamedPtr f = go(u.fun());
        NamedPtr a = go(u.arg());
        if (!f || !a) return nullptr;
        return std::make_shared<Named>(Named{Named::Kind::kApp, u, {}, {}, f, a});
      }
    }
    return nullptr;
  };
  return go(t);
}

// Back to de Bruijn against another stack; nullopt when a constant name is
// not on it.
inline std::optional<Term> from_named(const NamedPtr& n, const std::vector<std::string>& stack) {
  std::vector<std::string> binders;
  bool ok = true;
  std::function<Term(const NamedPtr&)> go = [&](const NamedPtr& m) -> Term {
    switch (m->kind) {
      case Named::Kind::kConst: return m->constant;
      case Named::Kind::kName: {
        for (std::size_t i = binders.size(); i-- > 0;) {
          if (binders[i] == m->name) {
            return Term::var(static_cast<std::uint32_t>(binders.size() - 1 - i));
          }
        }
        for (std::size_t i = 0; i < stack.size(); ++i) {
          if (stack[i] == m->name) return Term::var(static_cast<std::uint32_t>(binders.size() + i));
        }
        ok = false;
        return Term::var(0);
      }
      case Named::Kind::kLam: {
        binders.push_back(m->name);
        Term body = go(m->a);
        binders.pop_back();
        return Term::lam(*m->domain, body);
      }
      case Named::Kind::kApp: {
        Term f = go(m->a);
        return Term::app(f, go(m->b));
      }
    }
    return Term::var(0);
  };
  Term out = go(n);
  if (!ok) return std::nullopt;
  return out;
}

// Closed propositional formulas over true, false, not, implies, and.
struct Formula {
  enum class Op { kTrue, kFalse, kNot, kImplies, kAnd } op;
  int a = -1, b = -1;  // indices into the pool
};

struct FormulaPool {
  std::vector<Formula> all;
  std::vector<std::vector<int>> by_size;  // by_size[n]: formulas with n nodes

  explicit FormulaPool(int max_size) : by_size(max_size + 1) {
    add(1, {Formula::Op::kTrue});
    add(1, {Formula::Op::kFalse});
    for (int n = 2; n <= max_size; ++n) {
      for (int x : by_size[n - 1]) add(n, {Formula::Op::kNot, x});
      for (int l = 1; l < n - 1; ++l) {
        for (int x : by_size[l]) {
          for (int y : by_size[n - 1 - l]) {
            add(n, {Formula::Op::kImplies, x, y});
            add(n, {Formula::Op::kAnd, x, y});
          }
        }
      }
    }
  }

  bool eval(int i) const {
    const Formula& f = all[i];
    switch (f.op) {
      case Formula::Op::kTrue: return true;
      case Formula::Op::kFalse: return false;
      case Formula::Op::kNot: return !eval(f.a);
      case Formula::Op::kImplies: return !eval(f.a) || eval(f.b);
      case Formula::Op::kAnd: return eval(f.a) && eval(f.b);
    }
    return false;
  }

  // Built by hand from the constant nodes, not through the parser.
  Term to_term(int i) const {
    const Formula& f = all[i];
    switch (f.op) {
      case Formula::Op::kTrue: return Term::constant(ConstId::kTrue);
      case Formula::Op::kFalse: return Term::constant(ConstId::kFalse);
      case Formula::Op::kNot: return Term::app(Term::constant(ConstId::kNot), to_term(f.a));
      case Formula::Op::kImplies:
        return Term::app(Term::app(Term::constant(ConstId::kImplies), to_term(f.a)), to_term(f.b));
      case Formula::Op::kAnd:
        return Term::app(Term::app(Term::constant(ConstId::kAnd), to_term(f.a)), to_term(f.b));
    }
    return Term::constant(ConstId::kTrue);
  }

  // Only true, false and not.
  bool negation_only(int i) const {
    const Formula& f = all[i];
    if (f.op == Formula::Op::kNot) return negation_only(f.a);
    return f.op == Formula::Op::kTrue || f.op == Formula::Op::kFalse;
  }

 private:
  void add(int size, Formula f) {
    by_size[size].push_back(static_cast<int>(all.size()));
    all.push_back(f);
  }
};

}  // namespace peerhol::oracle

#endif  // PEERHOL_TESTS_ORACLES_HPP_
