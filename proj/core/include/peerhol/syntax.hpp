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

#ifndef PEERHOL_SYNTAX_HPP_
#define PEERHOL_SYNTAX_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peerhol/error.hpp"
#include "peerhol/kernel.hpp"

namespace peerhol {

// Constant names and types visible in a context, newest first.
class NameEnvironment : public ConstantStack {
 public:
  virtual const std::string& name_at(std::size_t newest_first) const = 0;
};

class ConstantList final : public NameEnvironment {
 public:
  ConstantList() = default;
  // Pushes a new, most recent constant.
  ConstantList& add(std::string name, Type type);

  std::size_t size() const override { return entries_.size(); }
  const Type& type_at(std::size_t i) const override;
  const std::string& name_at(std::size_t i) const override;

 private:
  std::vector<std::pair<std::string, Type>> entries_;  // oldest first
};

enum class PrintMode { kUnicode, kAscii };

// Named parse tree of a term; sugar is already desugared into applications
// of the built-in constants.
struct SurfaceTerm {
  enum class Kind { kName, kRawIndex, kConst, kLam, kApp, kAscribe };

  Kind kind = Kind::kName;
  std::string name;               // kName, kLam binder
  std::optional<std::uint32_t> index;  // name#k, or the raw index
  ConstId id = ConstId::kTrue;    // kConst
  std::optional<Type> type;       // kLam domain, kAscribe target
  std::shared_ptr<const SurfaceTerm> left;   // kLam body, kApp fun, kAscribe term
  std::shared_ptr<const SurfaceTerm> right;  // kApp arg
  SourcePos pos;
};
using SurfacePtr = std::shared_ptr<const SurfaceTerm>;

struct TypedTerm {
  Term term;
  Type type;
};

Type parse_type(std::string_view src);
SurfacePtr parse_surface_term(std::string_view src);
TypedTerm elaborate(const SurfaceTerm& surface, const NameEnvironment& env);
TypedTerm parse_typed_term(std::string_view src, const NameEnvironment& env);
Term parse_term(std::string_view src, const NameEnvironment& env);

std::string print_type(const Type& type, PrintMode mode = PrintMode::kUnicode);
std::string print_term(const Term& term, const NameEnvironment& env,
                       PrintMode mode = PrintMode::kUnicode);

// "x : ty" or "x ∈ D" as accepted by the fix statement.
struct FixSpec {
  std::string name;
  std::optional<Type> type;
  std::optional<Term> domain;  // D, of type set
};
FixSpec parse_fix_spec(std::string_view src, const NameEnvironment& env);

// "x = d"
struct DefineSpec {
  std::string name;
  Term body;
  Type type;
};
DefineSpec parse_define_spec(std::string_view src, const NameEnvironment& env);

// "x, y, z" or "x y z"
std::vector<std::string> parse_name_list(std::string_view src);

bool is_identifier(std::string_view text);

}  // namespace peerhol

#endif  // PEERHOL_SYNTAX_HPP_
