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

#ifndef PEERHOL_TERM_HPP_
#define PEERHOL_TERM_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "peerhol/logic_type.hpp"

namespace peerhol {

// The closed built-in signature. Nothing else can appear as a Const node;
// constants introduced by contexts are referenced through de Bruijn indices.
enum class ConstId : std::uint8_t {
  kEq,
  kForall,
  kExists,
  kChoose,
  kImplies,
  kAnd,
  kOr,
  kNot,
  kTrue,
  kFalse,
  kElem,
  kEmptySet,
  kPowerSet,
  kBigUnion,
  kBigIntersect,
  kUnion,
  kIntersect,
  kSubset,
  kSingleton,
  kSeparation,
  kReplacement,
};

inline constexpr std::size_t kNumConstants = 21;

struct ConstInfo {
  ConstId id;
  std::string_view glyph;  // unicode surface name
  std::string_view ascii;  // 7-bit surface name
  // True for =, forall, exists and choice: every occurrence carries its own
  // monomorphic instance type.
  bool polymorphic;
};

const ConstInfo& const_info(ConstId id);
std::span<const ConstInfo> all_constants();

// Type of a monomorphic constant. Must not be called for polymorphic ones.
Type const_type(ConstId id);

// True iff `instance` is a legal instance of the polymorphic constant `id`,
// e.g. t -> t -> prop for equality.
bool is_valid_instance(ConstId id, const Type& instance);

// Builds the instance type of a polymorphic constant from its parameter t.
Type instance_type(ConstId id, const Type& parameter);

// Immutable de Bruijn term. Lambda binders and context constants share one
// index space: an index at or beyond the lambda depth counts into the
// context's constant stack, newest first.
class Term {
 public:
  enum class Kind : std::uint8_t { kConst, kVar, kLam, kApp };

  static Term constant(ConstId id);
  static Term constant(ConstId id, Type instance);
  static Term var(std::uint32_t index);
  // `hint` is a printing aid only; it never takes part in equality.
  static Term lam(Type domain, Term body, std::string hint = {});
  static Term app(Term fun, Term arg);

  Kind kind() const;
  bool is_const() const { return kind() == Kind::kConst; }
  bool is_var() const { return kind() == Kind::kVar; }
  bool is_lam() const { return kind() == Kind::kLam; }
  bool is_app() const { return kind() == Kind::kApp; }
  bool is_const(ConstId id) const;

  ConstId const_id() const;
  const std::optional<Type>& instance() const;
  std::uint32_t index() const;
  const Type& domain() const;
  const Term& body() const;
  const std::string& hint() const;
  const Term& fun() const;
  const Term& arg() const;

  // One past the largest free index, 0 for closed terms.
  std::uint32_t free_bound() const;
  std::size_t size() const;
  std::size_t hash() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Convenience builders.
Term make_app(Term fun, std::initializer_list<Term> args);
Term make_not(Term a);
Term make_binary(ConstId op, Term a, Term b);
Term make_eq(const Type& type, Term a, Term b);
Term make_binder(ConstId quantifier, Type domain, Term body, std::string hint = {});

}  // namespace peerhol

#endif  // PEERHOL_TERM_HPP_
