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

#include "peerhol/term.hpp"

#include <algorithm>
#include <array>
#include <cassert>

#include "peerhol/error.hpp"

namespace peerhol {
namespace {

constexpr std::array<ConstInfo, kNumConstants> kConstants = {{
    {ConstId::kEq, "=", "=", true},
    {ConstId::kForall, "∀", "_all", true},
    {ConstId::kExists, "∃", "_exists", true},
    {ConstId::kChoose, "ε", "_choose", true},
    {ConstId::kImplies, "⟶", "-->", false},
    {ConstId::kAnd, "∧", "_and", false},
    {ConstId::kOr, "∨", "_or", false},
    {ConstId::kNot, "¬", "_not", false},
    {ConstId::kTrue, "true", "true", false},
    {ConstId::kFalse, "false", "false", false},
    {ConstId::kElem, "∈", "_elem", false},
    {ConstId::kEmptySet, "∅", "_emptyset", false},
    {ConstId::kPowerSet, "𝒫", "_powerset", false},
    {ConstId::kBigUnion, "⋃", "_Union", false},
    {ConstId::kBigIntersect, "⋂", "_Intersect", false},
    {ConstId::kUnion, "∪", "_union", false},
    {ConstId::kIntersect, "∩", "_intersect", false},
    {ConstId::kSubset, "⊆", "_subset", false},
    {ConstId::kSingleton, "_Singleton", "_Singleton", false},
    {ConstId::kSeparation, "_Separation", "_Separation", false},
    {ConstId::kReplacement, "_Replacement", "_Replacement", false},
}};

Type arrow(Type a, Type b) { return Type::fun(std::move(a), std::move(b)); }

}  // namespace

const ConstInfo& const_info(ConstId id) {
  return kConstants[static_cast<std::size_t>(id)];
}

std::span<const ConstInfo> all_constants() { return kConstants; }

Type const_type(ConstId id) {
  const Type s = Type::set();
  const Type p = Type::prop();
  switch (id) {
    case ConstId::kImplies:
    case ConstId::kAnd:
    case ConstId::kOr:
      return arrow(p, arrow(p, p));
    case ConstId::kNot:
      return arrow(p, p);
    case ConstId::kTrue:
    case ConstId::kFalse:
      return p;
    case ConstId::kElem:
    case ConstId::kSubset:
      return arrow(s, arrow(s, p));
    case ConstId::kEmptySet:
      return s;
    case ConstId::kPowerSet:
    case ConstId::kBigUnion:
    case ConstId::kBigIntersect:
    case ConstId::kSingleton:
      return arrow(s, s);
    case ConstId::kUnion:
    case ConstId::kIntersect:
      return arrow(s, arrow(s, s));
    case ConstId::kSeparation:
      return arrow(s, arrow(arrow(s, p), s));
    case ConstId::kReplacement:
      return arrow(s, arrow(arrow(s, s), s));
    case ConstId::kEq:
    case ConstId::kForall:
    case ConstId::kExists:
    case ConstId::kChoose:
      break;
  }
  throw Error(ErrorKind::kInternalError,
              "const_type called on polymorphic constant " +
                  std::string(const_info(id).glyph));
}

Type instance_type(ConstId id, const Type& t) {
  switch (id) {
    case ConstId::kEq:
      return arrow(t, arrow(t, Type::prop()));
    case ConstId::kForall:
    case ConstId::kExists:
      return arrow(arrow(t, Type::prop()), Type::prop());
    case ConstId::kChoose:
      return arrow(arrow(t, Type::prop()), t);
    default:
      return const_type(id);
  }
}

bool is_valid_instance(ConstId id, const Type& ty) {
  if (!const_info(id).polymorphic || !ty.is_fun()) return false;
  const Type& d = ty.domain();
  switch (id) {
    case ConstId::kEq:
      return ty == instance_type(id, d);
    case ConstId::kForall:
    case ConstId::kExists:
    case ConstId::kChoose:
      return d.is_fun() && ty == instance_type(id, d.domain());
    default:
      return false;
  }
}

struct Term::Node {
  Kind kind;
  ConstId id = ConstId::kTrue;
  std::uint32_t index = 0;
  std::optional<Type> instance;
  Type domain = Type::set();
  std::optional<Term> left;   // lam body / app fun
  std::optional<Term> right;  // app arg
  std::string hint;
  std::uint32_t free_bound = 0;
  std::size_t size = 1;
  std::size_t hash = 0;
};

Term Term::constant(ConstId id) {
  if (const_info(id).polymorphic) {
    throw Error(ErrorKind::kTypeError,
                "constant " + std::string(const_info(id).glyph) +
                    " needs an instance type");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::kConst;
  n->id = id;
  n->hash = 0x51ed27u + static_cast<std::size_t>(id) * 7919u;
  return Term(std::move(n));
}

Term Term::constant(ConstId id, Type instance) {
  if (!const_info(id).polymorphic) {
    if (instance != const_type(id)) {
      throw Error(ErrorKind::kTypeError,
                  "constant " + std::string(const_info(id).glyph) +
                      " used at a wrong type");
    }
    return constant(id);
  }
  if (!is_valid_instance(id, instance)) {
    throw Error(ErrorKind::kTypeError,
                "malformed instance type on " + std::string(const_info(id).glyph));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::kConst;
  n->id = id;
  n->hash = (0x51ed27u + static_cast<std::size_t>(id) * 7919u) ^
            (instance.hash() << 1);
  n->instance = std::move(instance);
  return Term(std::move(n));
}

Term Term::var(std::uint32_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kVar;
  n->index = index;
  n->free_bound = index + 1;
  n->hash = 0xabcdefu + index * 2654435761u;
  return Term(std::move(n));
}

Term Term::lam(Type domain, Term body, std::string hint) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kLam;
  n->free_bound = body.free_bound() > 0 ? body.free_bound() - 1 : 0;
  n->size = body.size() + 1;
  n->hash = (body.hash() * 31u) ^ (domain.hash() * 131u) ^ 0x1a3u;
  n->domain = std::move(domain);
  n->left = std::move(body);
  n->hint = std::move(hint);
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kApp;
  n->free_bound = std::max(fun.free_bound(), arg.free_bound());
  n->size = fun.size() + arg.size() + 1;
  n->hash = fun.hash() * 1000003u + arg.hash() * 17u + 0x77u;
  n->left = std::move(fun);
  n->right = std::move(arg);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
bool Term::is_const(ConstId id) const {
  return node_->kind == Kind::kConst && node_->id == id;
}
ConstId Term::const_id() const {
  assert(is_const());
  return node_->id;
}
const std::optional<Type>& Term::instance() const { return node_->instance; }
std::uint32_t Term::index() const {
  assert(is_var());
  return node_->index;
}
const Type& Term::domain() const {
  assert(is_lam());
  return node_->domain;
}
const Term& Term::body() const {
  assert(is_lam());
  return *node_->left;
}
const std::string& Term::hint() const { return node_->hint; }
const Term& Term::fun() const {
  assert(is_app());
  return *node_->left;
}
const Term& Term::arg() const {
  assert(is_app());
  return *node_->right;
}
std::uint32_t Term::free_bound() const { return node_->free_bound; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::hash() const { return node_->hash; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const Term::Node& x = *a.node_;
  const Term::Node& y = *b.node_;
  if (x.kind != y.kind || x.hash != y.hash || x.size != y.size) return false;
  switch (x.kind) {
    case Term::Kind::kConst:
      return x.id == y.id && x.instance == y.instance;
    case Term::Kind::kVar:
      return x.index == y.index;
    case Term::Kind::kLam:
      return x.domain == y.domain && *x.left == *y.left;
    case Term::Kind::kApp:
      return *x.left == *y.left && *x.right == *y.right;
  }
  return false;
}

Term make_app(Term fun, std::initializer_list<Term> args) {
  for (const Term& a : args) fun = Term::app(std::move(fun), a);
  return fun;
}

Term make_not(Term a) {
  return Term::app(Term::constant(ConstId::kNot), std::move(a));
}

Term make_binary(ConstId op, Term a, Term b) {
  return make_app(Term::constant(op), {std::move(a), std::move(b)});
}

Term make_eq(const Type& type, Term a, Term b) {
  return make_app(Term::constant(ConstId::kEq, instance_type(ConstId::kEq, type)),
                  {std::move(a), std::move(b)});
}

Term make_binder(ConstId quantifier, Type domain, Term body, std::string hint) {
  Term q = Term::constant(quantifier, instance_type(quantifier, domain));
  return Term::app(std::move(q),
                   Term::lam(std::move(domain), std::move(body), std::move(hint)));
}

}  // namespace peerhol
