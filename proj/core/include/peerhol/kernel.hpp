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

#ifndef PEERHOL_KERNEL_HPP_
#define PEERHOL_KERNEL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "peerhol/context_ref.hpp"
#include "peerhol/error.hpp"
#include "peerhol/logic_type.hpp"
#include "peerhol/term.hpp"

namespace peerhol {

// Newest-first view of the logical constants visible in some context.
class ConstantStack {
 public:
  virtual ~ConstantStack() = default;
  virtual std::size_t size() const = 0;
  virtual const Type& type_at(std::size_t newest_first) const = 0;
};

class TypeListStack final : public ConstantStack {
 public:
  TypeListStack() = default;
  explicit TypeListStack(std::vector<Type> newest_first)
      : types_(std::move(newest_first)) {}
  std::size_t size() const override { return types_.size(); }
  const Type& type_at(std::size_t i) const override { return types_.at(i); }

 private:
  std::vector<Type> types_;
};

// Throws Error(kTypeError) for ill-typed terms.
Type typecheck(const Term& term, const ConstantStack& constants);
Type typecheck(const Term& term, std::span<const Type> newest_first);

// Fixpoint of beta, eta and the negation rules
//   ~~x => x, ~true => false, ~false => true, (a --> false) => ~a.
// Throws kInternalError after kMaxReductions beta steps or when the
// reduction nests deeper than kMaxNormalizeDepth.
inline constexpr std::size_t kMaxReductions = 1'000'000;
inline constexpr std::size_t kMaxNormalizeDepth = 20'000;
Term normalize(const Term& term);

bool alpha_beta_eta_equal(const Term& a, const Term& b);
// Typed variant: throws kTypeError when the two types differ.
bool alpha_beta_eta_equal(const Term& a, const Term& b,
                          const ConstantStack& constants);

// Adds k to every index that points past the enclosing lambdas. A negative
// shift that would leave an index dangling throws kDanglingConstant.
Term shift_constants(const Term& term, int k);
Term shift_from(const Term& term, int k, std::uint32_t cutoff);

// Replaces index 0 of `body` by `arg` and lowers the remaining free indices.
Term substitute(const Term& body, const Term& arg);

// True iff index `index` (relative to the top of `term`) occurs free.
bool occurs_free(const Term& term, std::uint32_t index);

class ContextTree;
class ValueCodec;
class Theorem;

Theorem apply_theorem(const Theorem& f, const Theorem& g);
Theorem apply_theorem(const Theorem& f, const Term& arg,
                      const ConstantStack& constants);

// A proposition certified to hold in its home context. Instances originate
// only from the kernel rules below and from the context operations.
class Theorem {
 public:
  const Term& proposition() const { return proposition_; }
  const ContextRef& context() const { return context_; }

  friend bool operator==(const Theorem&, const Theorem&) = default;

 private:
  Theorem(Term proposition, ContextRef context)
      : proposition_(std::move(proposition)), context_(std::move(context)) {}

  Term proposition_;
  ContextRef context_;

  friend class ContextTree;
  friend class ValueCodec;
  friend Theorem apply_theorem(const Theorem&, const Theorem&);
  friend Theorem apply_theorem(const Theorem&, const Term&,
                               const ConstantStack&);
};

}  // namespace peerhol

#endif  // PEERHOL_KERNEL_HPP_
