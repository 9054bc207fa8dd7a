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

#ifndef PEERHOL_LOGIC_TYPE_HPP_
#define PEERHOL_LOGIC_TYPE_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>

namespace peerhol {

// A monomorphic logical type: set, prop, or a function type. There are no
// type variables and no user-defined type constructors.
class Type {
 public:
  enum class Kind : std::uint8_t { kSet, kProp, kFun };

  static Type set() { return Type(Kind::kSet); }
  static Type prop() { return Type(Kind::kProp); }
  static Type fun(Type domain, Type codomain);

  Kind kind() const { return kind_; }
  bool is_set() const { return kind_ == Kind::kSet; }
  bool is_prop() const { return kind_ == Kind::kProp; }
  bool is_fun() const { return kind_ == Kind::kFun; }

  // Only valid for function types.
  const Type& domain() const;
  const Type& codomain() const;

  friend bool operator==(const Type& a, const Type& b);
  friend std::strong_ordering operator<=>(const Type& a, const Type& b);

  std::size_t hash() const;

 private:
  struct Arrow;
  explicit Type(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::shared_ptr<const Arrow> arrow_;
};

}  // namespace peerhol

#endif  // PEERHOL_LOGIC_TYPE_HPP_
