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

#ifndef PEERHOL_CONTEXT_REF_HPP_
#define PEERHOL_CONTEXT_REF_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace peerhol {

// Stable address of a stored context: the key of the entity holding it plus
// its position in that entity's chain.
struct ContextRef {
  std::string entity;
  std::uint32_t index = 0;

  std::string to_string() const { return entity + ":" + std::to_string(index); }

  friend bool operator==(const ContextRef&, const ContextRef&) = default;
  friend auto operator<=>(const ContextRef&, const ContextRef&) = default;
};

struct ContextRefHash {
  std::size_t operator()(const ContextRef& ref) const {
    return std::hash<std::string>()(ref.entity) * 31u + ref.index;
  }
};

}  // namespace peerhol

#endif  // PEERHOL_CONTEXT_REF_HPP_
