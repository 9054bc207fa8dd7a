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

#include "peerhol/logic_type.hpp"

#include <cassert>

namespace peerhol {

struct Type::Arrow {
  Type domain;
  Type codomain;
  std::size_t hash;
};

Type Type::fun(Type domain, Type codomain) {
  Type t(Kind::kFun);
  const std::size_t h =
      (domain.hash() * 1000003u) ^ (codomain.hash() + 0x9e3779b97f4a7c15ull);
  t.arrow_ = std::make_shared<const Arrow>(
      Arrow{std::move(domain), std::move(codomain), h});
  return t;
}

const Type& Type::domain() const {
  assert(is_fun());
  return arrow_->domain;
}

const Type& Type::codomain() const {
  assert(is_fun());
  return arrow_->codomain;
}

std::size_t Type::hash() const {
  return is_fun() ? arrow_->hash : static_cast<std::size_t>(kind_) + 1;
}

bool operator==(const Type& a, const Type& b) {
  if (a.kind_ != b.kind_) return false;
  if (!a.is_fun() || a.arrow_ == b.arrow_) return true;
  return a.arrow_->hash == b.arrow_->hash && a.domain() == b.domain() &&
         a.codomain() == b.codomain();
}

std::strong_ordering operator<=>(const Type& a, const Type& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (!a.is_fun() || a.arrow_ == b.arrow_) return std::strong_ordering::equal;
  if (auto c = a.domain() <=> b.domain(); c != 0) return c;
  return a.codomain() <=> b.codomain();
}

}  // namespace peerhol
