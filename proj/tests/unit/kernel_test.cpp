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

#include "doctest.h"
#include "peerhol/kernel.hpp"

namespace peerhol {
namespace {

const Type kSet = Type::set();
const Type kProp = Type::prop();

Term T() { return Term::constant(ConstId::kTrue); }
Term F() { return Term::constant(ConstId::kFalse); }
Term empty() { return Term::constant(ConstId::kEmptySet); }

TEST_CASE("typecheck of identity, bad application and equality") {
  TypeListStack none;
  CHECK(typecheck(Term::lam(kSet, Term::var(0)), none) == Type::fun(kSet, kSet));
  CHECK_THROWS_AS(typecheck(Term::app(empty(), empty()), none), Error);
  const Term eq = make_eq(kSet, empty(), empty());
  CHECK(typecheck(eq, none) == kProp);
}

TEST_CASE("typecheck resolves indices past the binders into the stack") {
  TypeListStack stack({kProp, kSet});
  CHECK(typecheck(Term::var(0), stack) == kProp);
  CHECK(typecheck(Term::var(1), stack) == kSet);
  CHECK(typecheck(Term::lam(kSet, Term::var(1)), stack) == Type::fun(kSet, kProp));
  CHECK_THROWS_AS(typecheck(Term::var(2), stack), Error);
}

TEST_CASE("polymorphic constants need an instance") {
  CHECK_THROWS_AS(Term::constant(ConstId::kEq), Error);
  CHECK_THROWS_AS(Term::constant(ConstId::kEq, Type::fun(kSet, kProp)), Error);
}

TEST_CASE("negation rules and beta eta") {
  const Term x = Term::var(0);
  CHECK(normalize(make_not(make_not(x))) == x);
  CHECK(normalize(make_not(T())) == F());
  CHECK(normalize(make_not(F())) == T());
  CHECK(normalize(make_binary(ConstId::kImplies, x, F())) == make_not(x));
  const Term f = Term::var(0);
  CHECK(normalize(Term::lam(kSet, Term::app(Term::var(1), Term::var(0)))) == f);
  CHECK(normalize(Term::app(Term::lam(kSet, Term::var(0)), empty())) == empty());
  // not an eta redex: the binder occurs in the function part
  const Term loop = Term::lam(kSet, Term::app(Term::app(Term::var(1), Term::var(0)),
                                              Term::var(0)));
  CHECK(normalize(loop) == loop);
}

TEST_CASE("alpha_beta_eta_equal") {
  TypeListStack stack({Type::fun(kSet, kProp), kSet});
  const Term p = Term::var(0);
  CHECK(alpha_beta_eta_equal(Term::lam(kSet, Term::app(Term::var(1), Term::var(0))), p,
                             stack));
  CHECK(alpha_beta_eta_equal(make_not(T()), F()));
  TypeListStack two({kSet, kSet});
  CHECK_FALSE(alpha_beta_eta_equal(Term::var(0), Term::var(1), two));
  CHECK_THROWS_AS(alpha_beta_eta_equal(p, Term::var(1), stack), Error);
}

TEST_CASE("hints do not affect equality") {
  CHECK(Term::lam(kSet, Term::var(0), "a") == Term::lam(kSet, Term::var(0), "b"));
}

TEST_CASE("shift_constants") {
  CHECK(shift_constants(Term::var(0), 2) == Term::var(2));
  const Term id = Term::lam(kSet, Term::var(0));
  CHECK(shift_constants(id, 5) == id);
  CHECK_THROWS_AS(shift_constants(Term::var(0), -1), Error);
  try {
    shift_constants(Term::var(0), -1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDanglingConstant);
  }
  const Term t = Term::lam(kSet, Term::app(Term::var(3), Term::var(0)));
  CHECK(shift_constants(shift_constants(t, 4), -4) == t);
  CHECK(shift_constants(t, 0) == t);
}

TEST_CASE("substitute") {
  CHECK(substitute(Term::var(0), empty()) == empty());
  CHECK(substitute(Term::var(1), empty()) == Term::var(0));
  // the argument is shifted when passing under a binder
  CHECK(substitute(Term::lam(kSet, Term::var(1)), Term::var(4)) ==
        Term::lam(kSet, Term::var(5)));
}

TEST_CASE("normalize reports runaway reduction as internal error") {
  // untyped omega; only reachable through a kernel bug
  const Term w = Term::lam(kSet, Term::app(Term::var(0), Term::var(0)));
  try {
    normalize(Term::app(w, w));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInternalError);
  }
}

}  // namespace
}  // namespace peerhol
