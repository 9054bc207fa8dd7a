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

#include "peerhol/kernel.hpp"

#include <string>
#include <vector>

namespace peerhol {
namespace {

class SpanStack final : public ConstantStack {
 public:
  explicit SpanStack(std::span<const Type> types) : types_(types) {}
  std::size_t size() const override { return types_.size(); }
  const Type& type_at(std::size_t i) const override { return types_[i]; }

 private:
  std::span<const Type> types_;
};

Type check(const Term& t, const ConstantStack& constants,
           std::vector<Type>& binders) {
  switch (t.kind()) {
    case Term::Kind::kConst: {
      const ConstInfo& info = const_info(t.const_id());
      if (!info.polymorphic) return const_type(t.const_id());
      if (!t.instance()) {
        throw Error(ErrorKind::kTypeError,
                    "missing instance type on " + std::string(info.glyph));
      }
      if (!is_valid_instance(t.const_id(), *t.instance())) {
        throw Error(ErrorKind::kTypeError,
                    "malformed instance type on " + std::string(info.glyph));
      }
      return *t.instance();
    }
    case Term::Kind::kVar: {
      const std::size_t i = t.index();
      if (i < binders.size()) return binders[binders.size() - 1 - i];
      const std::size_t j = i - binders.size();
      if (j < constants.size()) return constants.type_at(j);
      throw Error(ErrorKind::kTypeError,
                  "index " + std::to_string(i) + " refers to no binder or constant");
    }
    case Term::Kind::kLam: {
      binders.push_back(t.domain());
      Type body = check(t.body(), constants, binders);
      binders.pop_back();
      return Type::fun(t.domain(), std::move(body));
    }
    case Term::Kind::kApp: {
      const Type f = check(t.fun(), constants, binders);
      const Type a = check(t.arg(), constants, binders);
      if (!f.is_fun()) {
        throw Error(ErrorKind::kTypeError, "application of a non-function");
      }
      if (f.domain() != a) {
        throw Error(ErrorKind::kTypeError, "argument type mismatch");
      }
      return f.codomain();
    }
  }
  throw Error(ErrorKind::kInternalError, "corrupt term");
}

Term shift_rec(const Term& t, int k, std::uint32_t cutoff) {
  if (t.free_bound() <= cutoff) return t;
  switch (t.kind()) {
    case Term::Kind::kConst:
      return t;
    case Term::Kind::kVar: {
      const std::int64_t shifted = static_cast<std::int64_t>(t.index()) + k;
      if (shifted < static_cast<std::int64_t>(cutoff)) {
        throw Error(ErrorKind::kDanglingConstant,
                    "term refers to a constant that does not exist in the "
                    "target context");
      }
      return Term::var(static_cast<std::uint32_t>(shifted));
    }
    case Term::Kind::kLam:
      return Term::lam(t.domain(), shift_rec(t.body(), k, cutoff + 1), t.hint());
    case Term::Kind::kApp:
      return Term::app(shift_rec(t.fun(), k, cutoff),
                       shift_rec(t.arg(), k, cutoff));
  }
  return t;
}

Term subst_rec(const Term& t, const Term& arg, std::uint32_t depth) {
  if (t.free_bound() <= depth) return t;
  switch (t.kind()) {
    case Term::Kind::kConst:
      return t;
    case Term::Kind::kVar:
      if (t.index() == depth) return shift_rec(arg, static_cast<int>(depth), 0);
      if (t.index() > depth) return Term::var(t.index() - 1);
      return t;
    case Term::Kind::kLam:
      return Term::lam(t.domain(), subst_rec(t.body(), arg, depth + 1), t.hint());
    case Term::Kind::kApp:
      return Term::app(subst_rec(t.fun(), arg, depth),
                       subst_rec(t.arg(), arg, depth));
  }
  return t;
}

bool occurs_rec(const Term& t, std::uint32_t index) {
  if (t.free_bound() <= index) return false;
  switch (t.kind()) {
    case Term::Kind::kConst:
      return false;
    case Term::Kind::kVar:
      return t.index() == index;
    case Term::Kind::kLam:
      return occurs_rec(t.body(), index + 1);
    case Term::Kind::kApp:
      return occurs_rec(t.fun(), index) || occurs_rec(t.arg(), index);
  }
  return false;
}

// Bottom-up normalizer: children first, then the redex at the root.
class Normalizer {
 public:
  Term norm(const Term& t) {
    DepthGuard guard(depth_);
    switch (t.kind()) {
      case Term::Kind::kConst:
      case Term::Kind::kVar:
        return t;
      case Term::Kind::kLam: {
        Term body = norm(t.body());
        if (body.is_app() && body.arg().is_var() && body.arg().index() == 0 &&
            !occurs_rec(body.fun(), 0)) {
          return shift_rec(body.fun(), -1, 0);
        }
        if (body.same_node(t.body())) return t;
        return Term::lam(t.domain(), std::move(body), t.hint());
      }
      case Term::Kind::kApp: {
        Term f = norm(t.fun());
        Term a = norm(t.arg());
        if (f.same_node(t.fun()) && a.same_node(t.arg()) && !f.is_lam() &&
            !is_negation_redex(f, a)) {
          return t;
        }
        return reduce(std::move(f), std::move(a));
      }
    }
    return t;
  }

 private:
  struct DepthGuard {
    explicit DepthGuard(std::size_t& d) : depth(d) {
      if (++depth > kMaxNormalizeDepth) {
        throw Error(ErrorKind::kInternalError,
                    "normalization exceeded the recursion ceiling");
      }
    }
    ~DepthGuard() { --depth; }
    std::size_t& depth;
  };

  static bool is_negation_redex(const Term& f, const Term& a) {
    if (f.is_const(ConstId::kNot)) {
      return a.is_const(ConstId::kTrue) || a.is_const(ConstId::kFalse) ||
             (a.is_app() && a.fun().is_const(ConstId::kNot));
    }
    return a.is_const(ConstId::kFalse) && f.is_app() &&
           f.fun().is_const(ConstId::kImplies);
  }

  Term reduce(Term f, Term a) {
    if (f.is_lam()) {
      if (++steps_ > kMaxReductions) {
        throw Error(ErrorKind::kInternalError,
                    "normalization exceeded the reduction ceiling");
      }
      return norm(substitute(f.body(), a));
    }
    if (f.is_const(ConstId::kNot)) return negate(std::move(a));
    if (a.is_const(ConstId::kFalse) && f.is_app() &&
        f.fun().is_const(ConstId::kImplies)) {
      return negate(f.arg());
    }
    return Term::app(std::move(f), std::move(a));
  }

  static Term negate(Term a) {
    if (a.is_const(ConstId::kTrue)) return Term::constant(ConstId::kFalse);
    if (a.is_const(ConstId::kFalse)) return Term::constant(ConstId::kTrue);
    if (a.is_app() && a.fun().is_const(ConstId::kNot)) return a.arg();
    return make_not(std::move(a));
  }

  std::size_t steps_ = 0;
  std::size_t depth_ = 0;
};

}  // namespace

Type typecheck(const Term& term, const ConstantStack& constants) {
  std::vector<Type> binders;
  return check(term, constants, binders);
}

Type typecheck(const Term& term, std::span<const Type> newest_first) {
  return typecheck(term, SpanStack(newest_first));
}

Term normalize(const Term& term) {
  Normalizer n;
  Term current = n.norm(term);
  // The bottom-up pass already yields a normal form; the loop guards the
  // fixpoint contract.
  for (;;) {
    Term next = n.norm(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

bool alpha_beta_eta_equal(const Term& a, const Term& b) {
  return normalize(a) == normalize(b);
}

bool alpha_beta_eta_equal(const Term& a, const Term& b,
                          const ConstantStack& constants) {
  if (typecheck(a, constants) != typecheck(b, constants)) {
    throw Error(ErrorKind::kTypeError, "compared terms have different types");
  }
  return alpha_beta_eta_equal(a, b);
}

Term shift_constants(const Term& term, int k) {
  if (k == 0) return term;
  return shift_rec(term, k, 0);
}

Term shift_from(const Term& term, int k, std::uint32_t cutoff) {
  if (k == 0) return term;
  return shift_rec(term, k, cutoff);
}

Term substitute(const Term& body, const Term& arg) {
  return subst_rec(body, arg, 0);
}

bool occurs_free(const Term& term, std::uint32_t index) {
  return occurs_rec(term, index);
}

Theorem apply_theorem(const Theorem& f, const Theorem& g) {
  if (f.context() != g.context()) {
    throw Error(ErrorKind::kNotApplicable,
                "theorems live in different contexts");
  }
  const Term p = normalize(f.proposition());
  const Term h = normalize(g.proposition());
  if (p.is_app() && p.fun().is_app() &&
      p.fun().fun().is_const(ConstId::kImplies)) {
    if (p.fun().arg() == h) return Theorem(p.arg(), f.context());
    throw Error(ErrorKind::kNotApplicable,
                "premise does not match the argument theorem");
  }
  // ~a is the normal form of a --> false.
  if (p.is_app() && p.fun().is_const(ConstId::kNot)) {
    if (p.arg() == h) return Theorem(Term::constant(ConstId::kFalse), f.context());
    throw Error(ErrorKind::kNotApplicable,
                "premise does not match the argument theorem");
  }
  throw Error(ErrorKind::kNotApplicable,
              "theorem is not an implication");
}

Theorem apply_theorem(const Theorem& f, const Term& arg,
                      const ConstantStack& constants) {
  const Term p = normalize(f.proposition());
  if (!(p.is_app() && p.fun().is_const(ConstId::kForall))) {
    throw Error(ErrorKind::kNotApplicable,
                "theorem is not a universal quantification");
  }
  const Type& bound = p.fun().instance()->domain().domain();
  if (typecheck(arg, constants) != bound) {
    throw Error(ErrorKind::kNotApplicable,
                "argument type does not match the quantified variable");
  }
  const Term& pred = p.arg();
  Term result = pred.is_lam() ? substitute(pred.body(), arg) : Term::app(pred, arg);
  return Theorem(std::move(result), f.context());
}

}  // namespace peerhol
