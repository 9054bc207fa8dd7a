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

#ifndef PEERHOL_VALUE_HPP_
#define PEERHOL_VALUE_HPP_

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "peerhol/context_ref.hpp"
#include "peerhol/kernel.hpp"
#include "peerhol/script.hpp"

namespace peerhol {

using BigInt = boost::multiprecision::cpp_int;

class Value;

// A term together with the context it is well-typed in.
struct TermValue {
  Term term;
  ContextRef home;
};

// Persistent chain of script-local bindings. A node without a value masks
// every older binding of its name, including those stored in contexts.
struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;

// A contiguous group of mutually recursive defs.
struct DefGroup {
  std::shared_ptr<const script::Stmt> stmt;
  Env captured;
  ContextRef def_context;
};

class CallSite;

struct NativeFunction {
  std::string name;
  std::size_t arity = 1;
  std::function<Value(CallSite&, const std::vector<Value>&)> fn;
};

struct Function {
  std::shared_ptr<const DefGroup> group;  // user defined, or
  std::shared_ptr<const NativeFunction> native;
  std::size_t index = 0;                  // position in the def group
  std::vector<Value> bound;               // arguments supplied so far

  const std::string& name() const;
  std::size_t arity() const;
};

class Value {
 public:
  enum class Tag {
    kTheorem,
    kContext,
    kTerm,
    kType,
    kInt,
    kString,
    kBool,
    kList,
    kVector,
    kSet,
    kMap,
    kFunction,
  };

  using Items = std::vector<Value>;
  using Entries = std::vector<std::pair<Value, Value>>;

  Value(Theorem th) : data_(std::move(th)) {}
  Value(ContextRef ref) : data_(std::move(ref)) {}
  Value(TermValue t) : data_(std::move(t)) {}
  Value(Type t) : data_(std::move(t)) {}
  Value(BigInt i) : data_(std::move(i)) {}
  Value(int i) : data_(BigInt(i)) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(bool b) : data_(b) {}
  Value(Function f) : data_(std::make_shared<const Function>(std::move(f))) {}

  static Value list(Items items);
  static Value vector(Items items);
  // Sorts and removes duplicates; throws kScriptError for functions.
  static Value set(Items items);
  // Sorts by key; later duplicates win.
  static Value map(Entries entries);

  Tag tag() const;
  const Theorem& theorem() const { return std::get<Theorem>(data_); }
  const ContextRef& context() const { return std::get<ContextRef>(data_); }
  const TermValue& term() const { return std::get<TermValue>(data_); }
  const Type& type() const { return std::get<Type>(data_); }
  const BigInt& integer() const { return std::get<BigInt>(data_); }
  const std::string& string() const { return std::get<std::string>(data_); }
  bool boolean() const { return std::get<bool>(data_); }
  // List, vector and set elements.
  const Items& items() const;
  const Entries& entries() const;
  const Function& function() const { return *std::get<FunctionPtr>(data_); }

  bool is(Tag t) const { return tag() == t; }

 private:
  struct Seq {
    Tag tag;
    Items items;
  };
  using FunctionPtr = std::shared_ptr<const Function>;
  using SeqPtr = std::shared_ptr<const Seq>;
  using MapPtr = std::shared_ptr<const Entries>;

  explicit Value(SeqPtr s) : data_(std::move(s)) {}
  explicit Value(MapPtr m) : data_(std::move(m)) {}

  std::variant<Theorem, ContextRef, TermValue, Type, BigInt, std::string, bool,
               SeqPtr, MapPtr, FunctionPtr>
      data_;
};

struct EnvNode {
  std::string name;
  std::optional<Value> value;  // empty for a mask
  Env next;
};

Env env_bind(Env env, std::string name, Value value);
Env env_mask(Env env, std::string name);
// `found` is set when the nearest node for the name is a binding, `masked`
// when it is a mask.
struct EnvLookup {
  bool found = false;
  bool masked = false;
  const Value* value = nullptr;
};
EnvLookup env_lookup(const Env& env, std::string_view name);

std::string_view tag_name(Value::Tag tag);

// Total order used by sets and maps. Terms and theorems compare by raw
// structure. Throws Error(kScriptError) when a function is involved.
std::strong_ordering compare_values(const Value& a, const Value& b);
std::strong_ordering compare_terms(const Term& a, const Term& b);

// True if the value holds a theorem anywhere inside it, including the
// arguments and captured environment of a function.
bool contains_theorem(const Value& v);

// Builtin functions by name, used when decoding stored function values.
// Returns null for unknown names.
std::shared_ptr<const NativeFunction> find_builtin(std::string_view name);

}  // namespace peerhol

#endif  // PEERHOL_VALUE_HPP_
