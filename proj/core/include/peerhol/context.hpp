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

#ifndef PEERHOL_CONTEXT_HPP_
#define PEERHOL_CONTEXT_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "peerhol/context_ref.hpp"
#include "peerhol/kernel.hpp"
#include "peerhol/syntax.hpp"
#include "peerhol/value.hpp"

namespace peerhol {

enum class ContextKind : std::uint8_t {
  kRoot,
  kFix,
  kAssume,
  kDefine,
  kObtain,
  kHave,
  kBind,
  kUnbind,
  kImport,
};

std::string_view context_kind_name(ContextKind kind);

// The stored quintuple (k, C, A, V, U).
struct ContextRecord {
  ContextKind kind = ContextKind::kRoot;
  std::vector<std::pair<std::string, Type>> constants;  // oldest first
  std::vector<Term> assumptions;
  std::vector<std::pair<std::string, Value>> bindings;
  std::vector<std::string> unbound;
};

class Context;
using ContextPtr = std::shared_ptr<const Context>;

// Immutable node of the context tree.
class Context {
 public:
  Context(ContextRef ref, ContextPtr parent, std::string owner,
          std::int64_t timestamp, ContextRecord record);
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  const ContextRef& ref() const { return ref_; }
  const ContextPtr& parent() const { return parent_; }
  const std::string& owner() const { return owner_; }
  std::int64_t timestamp() const { return timestamp_; }
  ContextKind kind() const { return record_.kind; }
  const ContextRecord& record() const { return record_; }
  std::size_t depth() const { return depth_; }
  // Number of logical constants visible here, including inherited ones.
  std::size_t constant_count() const { return constant_count_; }
  // Nearest ancestor-or-self with a non-empty C component.
  const Context* constant_scope() const { return constant_scope_; }

  const Value* find_binding(std::string_view name) const;
  bool masks(std::string_view name) const;

 private:
  ContextRef ref_;
  ContextPtr parent_;
  std::string owner_;
  std::int64_t timestamp_;
  ContextRecord record_;
  std::size_t depth_ = 0;
  std::size_t constant_count_ = 0;
  const Context* constant_scope_ = nullptr;
};

// Names and types of the constants visible in a context, newest first.
class ContextNames final : public NameEnvironment {
 public:
  explicit ContextNames(const ContextPtr& ctx);
  std::size_t size() const override { return entries_.size(); }
  const Type& type_at(std::size_t i) const override { return *entries_.at(i).second; }
  const std::string& name_at(std::size_t i) const override {
    return *entries_.at(i).first;
  }

 private:
  ContextPtr keep_alive_;
  std::vector<std::pair<const std::string*, const Type*>> entries_;
};

// Storage seam: the store implements it, tests may fake it.
class ContextRepository {
 public:
  virtual ~ContextRepository() = default;
  // Allocates a ref below `parent`, asks `build` for the record (which may
  // mention the new ref, e.g. in theorems), persists and returns it.
  virtual ContextPtr append(const ContextPtr& parent, const std::string& owner,
                            const std::function<ContextRecord(const ContextRef&)>& build) = 0;
  // Throws Error(kUnknownContext).
  virtual ContextPtr load(const ContextRef& ref) = 0;
  virtual bool contains(const ContextRef& ref) = 0;
};

// Per-creation callbacks supplied by whoever runs a script.
struct CreationHooks {
  std::string owner = "system";
  // Called with the parent before anything is written; may throw, e.g.
  // Error(kDependencyCycle).
  std::function<void(const ContextPtr& parent)> guard;
  std::function<void(const ContextPtr& created)> created;
};

enum class ClosureCase { kUniversal, kExistential };

// All context creation and all movement of terms and theorems.
class ContextTree {
 public:
  explicit ContextTree(ContextRepository& repo) : repo_(repo) {}

  ContextPtr load(const ContextRef& ref) const { return repo_.load(ref); }
  bool contains(const ContextRef& ref) const { return repo_.contains(ref); }

  ContextPtr create_root(const CreationHooks& hooks);
  ContextPtr fix(const ContextPtr& parent, std::string name, Type type,
                 const CreationHooks& hooks);
  // `h` is typed against the parent's constants.
  ContextPtr assume(const ContextPtr& parent, Term h, std::optional<std::string> label,
                    const CreationHooks& hooks);
  // `d` is typed against the parent's constants; fact is x = d.
  ContextPtr define(const ContextPtr& parent, std::string name, Term d,
                    std::optional<std::string> label, const CreationHooks& hooks);
  // Strips `names.size()` leading existentials from the theorem (all of
  // them when `names` is empty). The theorem is moved into `parent` first.
  ContextPtr obtain(const ContextPtr& parent, const Theorem& th,
                    std::vector<std::string> names, std::optional<std::string> label,
                    const CreationHooks& hooks);
  // Throws kGuardMismatch unless `guard` equals the proposition of `th`
  // (after moving it into `parent`) up to normalization.
  ContextPtr have(const ContextPtr& parent, Term guard, const Theorem& th,
                  std::optional<std::string> label, const CreationHooks& hooks);
  ContextPtr bind(const ContextPtr& parent, std::string name, Value value,
                  const CreationHooks& hooks);
  ContextPtr unbind(const ContextPtr& parent, std::string name,
                    const CreationHooks& hooks);
  // Empty child of `target`.
  ContextPtr import(const ContextPtr& target, const CreationHooks& hooks);

  // Walks ctx and its ancestors; U masks older bindings. Throws kNameError.
  Value resolve(const ContextPtr& ctx, std::string_view name) const;
  std::optional<Value> lookup(const ContextPtr& ctx, std::string_view name) const;

  static ContextPtr common_ancestor(const ContextPtr& a, const ContextPtr& b);
  // Throws kNotAncestor.
  static std::size_t constants_between(const ContextPtr& ancestor,
                                       const ContextPtr& descendant);
  static bool is_ancestor_or_self(const ContextPtr& ancestor, const ContextPtr& ctx);

  // Throws kDanglingConstant when the term mentions constants missing in `to`.
  static Term move_term(const Term& t, const ContextPtr& from, const ContextPtr& to);
  Theorem move_theorem(const Theorem& th, const ContextPtr& to) const;

  // Which closure applies when a theorem leaves `ctx` upwards. Throws
  // kInternalError if the context has both a non-empty V' and A.
  static ClosureCase closure_case(const Context& ctx);
  // One upward step: proposition valid in ctx -> proposition valid in its
  // parent.
  static Term close_over(const Context& ctx, const Term& proposition);

 private:
  ContextPtr create(const ContextPtr& parent, const CreationHooks& hooks,
                    const std::function<ContextRecord(const ContextRef&)>& build);

  ContextRepository& repo_;
};

}  // namespace peerhol

#endif  // PEERHOL_CONTEXT_HPP_
