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

#include <string>

#include "doctest.h"
#include "peerhol/syntax.hpp"

namespace peerhol {
namespace {

const Type kSet = Type::set();
const Type kProp = Type::prop();

ConstantList sample_env() {
  ConstantList env;
  env.add("X", kSet).add("P", Type::fun(kSet, kProp)).add("f", Type::fun(kSet, kSet));
  env.add("x", kSet).add("y", kSet).add("z", kSet).add("a", kProp).add("b", kProp);
  return env;
}

std::string round(const std::string& src, PrintMode mode = PrintMode::kUnicode) {
  ConstantList env = sample_env();
  return print_term(parse_term(src, env), env, mode);
}

ErrorKind kind_of(const std::string& src) {
  ConstantList env = sample_env();
  try {
    parse_term(src, env);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error for " << src);
  return ErrorKind::kInternalError;
}

TEST_CASE("parse_type") {
  CHECK(parse_type("set -> set -> prop") ==
        Type::fun(kSet, Type::fun(kSet, kProp)));
  CHECK(parse_type("set → (set → prop) → set") ==
        Type::fun(kSet, Type::fun(Type::fun(kSet, kProp), kSet)));
  CHECK(parse_type("(prop)") == kProp);
  CHECK_THROWS_AS(parse_type("set ->"), Error);
  CHECK(print_type(Type::fun(Type::fun(kSet, kProp), kProp)) == "(set → prop) → prop");
  CHECK(print_type(Type::fun(kSet, kProp), PrintMode::kAscii) == "set -> prop");
}

TEST_CASE("quantifier with explicit domain") {
  ConstantList env;
  const Term t = parse_term("∀ x : prop. x ⟶ x", env);
  const Type inst = Type::fun(Type::fun(kProp, kProp), kProp);
  const Term expected = Term::app(
      Term::constant(ConstId::kForall, inst),
      Term::lam(kProp, make_binary(ConstId::kImplies, Term::var(0), Term::var(0))));
  CHECK(t == expected);
  CHECK(print_term(t, env) == "∀ x : prop. x ⟶ x");
  CHECK(print_term(t, env, PrintMode::kAscii) == "_all x : prop. x --> x");
  // the arrow is accepted as implication between terms
  CHECK(parse_term("∀ x : prop. x → x", env) == expected);
}

TEST_CASE("lambda defaults to set") {
  ConstantList env;
  CHECK(parse_term("λ x. x", env) == Term::lam(kSet, Term::var(0)));
  CHECK(parse_term("\\x. x", env) == Term::lam(kSet, Term::var(0)));
  CHECK(print_term(Term::lam(kSet, Term::var(0)), env) == "λ x. x");
}

TEST_CASE("constant table rows parse and print") {
  struct Row {
    const char* unicode;
    const char* ascii;
  };
  const Row rows[] = {
      {"x = y", "x = y"},
      {"∀ x. P x", "_all x. P x"},
      {"∃ x. P x", "_exists x. P x"},
      {"ε x. P x", "_choose x. P x"},
      {"a ⟶ b", "a --> b"},
      {"a ∧ b", "a _and b"},
      {"a ∨ b", "a _or b"},
      {"¬a", "_not a"},
      {"true", "true"},
      {"false", "false"},
      {"x ∈ X", "x _elem X"},
      {"∅", "_emptyset"},
      {"𝒫 X", "_powerset X"},
      {"⋃ X", "_Union X"},
      {"⋂ X", "_Intersect X"},
      {"x ∪ y", "x _union y"},
      {"x ∩ y", "x _intersect y"},
      {"x ⊆ y", "x _subset y"},
      {"{x}", "{x}"},
      {"_Separation X P", "_Separation X P"},
      {"_Replacement X f", "_Replacement X f"},
  };
  ConstantList env = sample_env();
  for (const Row& row : rows) {
    CAPTURE(row.unicode);
    const Term u = parse_term(row.unicode, env);
    const Term a = parse_term(row.ascii, env);
    CHECK(u == a);
    CHECK(print_term(u, env) == row.unicode);
    CHECK(print_term(u, env, PrintMode::kAscii) == row.ascii);
  }
}

TEST_CASE("sugar table rows") {
  ConstantList env = sample_env();
  const Term sx = Term::app(Term::constant(ConstId::kSingleton), parse_term("x", env));
  const Term sy = Term::app(Term::constant(ConstId::kSingleton), parse_term("y", env));
  const Term sz = Term::app(Term::constant(ConstId::kSingleton), parse_term("z", env));
  CHECK(parse_term("{x}", env) == sx);
  CHECK(parse_term("{x, y, z}", env) ==
        make_binary(ConstId::kUnion, sx, make_binary(ConstId::kUnion, sy, sz)));
  CHECK(parse_term("{x, y, z}", env) == parse_term("{x} ∪ ({y} ∪ {z})", env));
  CHECK(round("{x} ∪ ({y} ∪ {z})") == "{x, y, z}");
  CHECK(parse_term("{x ∈ X | P x}", env) ==
        parse_term("_Separation X (λ x. P x)", env));
  CHECK(parse_term("{f x | x ∈ X}", env) ==
        parse_term("_Replacement X (λ x. f x)", env));
  CHECK(round("{x ∈ X | P x ∧ x = y}") == "{x ∈ X | P x ∧ x = y}");
  CHECK(round("{f x | x ∈ X}") == "{f x | x ∈ X}");
  CHECK(round("{y ∈ X | P y}", PrintMode::kAscii) == "{y _elem X | P y}");
}

TEST_CASE("shadowed names get an index") {
  ConstantList env;
  env.add("c", kSet).add("c", kProp);
  CHECK(parse_term("c", env) == Term::var(0));
  CHECK(parse_term("c#0", env) == Term::var(0));
  CHECK(parse_term("c#1", env) == Term::var(1));
  CHECK(print_term(Term::var(1), env) == "c#1");
  CHECK(print_term(Term::var(0), env) == "c");
  CHECK(parse_term("#1", env) == Term::var(1));
  ConstantList env2;
  env2.add("x", kSet);
  // binder reuses x only if the body does not mention the outer x
  CHECK(print_term(Term::lam(kSet, Term::var(0), "x"), env2) == "λ x. x");
  CHECK(print_term(Term::lam(kSet, make_eq(kSet, Term::var(0), Term::var(1)), "x"),
                   env2) == "λ x1. x1 = x");
}

TEST_CASE("precedence") {
  CHECK(round("a ⟶ b ⟶ a") == "a ⟶ b ⟶ a");
  CHECK(round("(a ⟶ b) ⟶ a") == "(a ⟶ b) ⟶ a");
  CHECK(round("¬(a ∧ b)") == "¬(a ∧ b)");
  CHECK(round("¬a ∧ b") == "¬a ∧ b");
  CHECK(round("a ∧ b ∨ a") == "a ∧ b ∨ a");
  CHECK(round("a ∧ (b ∨ a)") == "a ∧ (b ∨ a)");
  CHECK(round("x ∪ y ∩ z = x") == "x ∪ y ∩ z = x");
  CHECK(round("(x ∪ y) ∩ z = x") == "(x ∪ y) ∩ z = x");
  CHECK(round("a ∧ ∀ x. P x") == "a ∧ (∀ x. P x)");
  CHECK(round("(∀ x. P x) ∧ a") == "(∀ x. P x) ∧ a");
  CHECK(round("f (f x) = x") == "f (f x) = x");
  CHECK(round("(=) x") == "(=) x");
  CHECK(round("(∀) P") == "(∀) P");
  CHECK(round("(= : set → set → prop)") == "(= : set → set → prop)");
  CHECK(round("(∧) a") == "(∧) a");
}

TEST_CASE("errors carry kinds and positions") {
  CHECK(kind_of("x ∧") == ErrorKind::kParseError);
  CHECK(kind_of("nope") == ErrorKind::kNameError);
  CHECK(kind_of("x ∧ a") == ErrorKind::kTypeError);
  CHECK(kind_of("x = y = z") == ErrorKind::kParseError);
  CHECK(kind_of("{}") == ErrorKind::kParseError);
  CHECK(kind_of("(=)") == ErrorKind::kTypeError);
  CHECK(kind_of("x#3") == ErrorKind::kNameError);
  ConstantList env = sample_env();
  try {
    parse_term("a ∧\n  ?", env);
  } catch (const Error& e) {
    REQUIRE(e.position());
    CHECK(e.position()->line == 2);
    CHECK(e.position()->column == 3);
  }
}

TEST_CASE("fix and define specs") {
  ConstantList env = sample_env();
  FixSpec a = parse_fix_spec("n : set → prop", env);
  CHECK(a.name == "n");
  CHECK(*a.type == Type::fun(kSet, kProp));
  FixSpec b = parse_fix_spec("n ∈ X", env);
  CHECK(b.domain);
  CHECK_THROWS_AS(parse_fix_spec("n ∈ a", env), Error);
  DefineSpec d = parse_define_spec("s = {x, y}", env);
  CHECK(d.name == "s");
  CHECK(d.type == kSet);
  CHECK(parse_name_list("x, y z") == std::vector<std::string>{"x", "y", "z"});
}

}  // namespace
}  // namespace peerhol
