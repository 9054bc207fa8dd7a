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

#include "peerhol/value.hpp"

#include <algorithm>

namespace peerhol {
namespace {

std::strong_ordering compare_types(const Type& a, const Type& b) { return a <=> b; }

template <typename T>
std::strong_ordering cmp(const T& a, const T& b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

const std::string& Function::name() const {
  if (native) return native->name;
  return group->stmt->defs.at(index).name;
}

std::size_t Function::arity() const {
  if (native) return native->arity;
  return group->stmt->defs.at(index).params.size();
}

Value Value::list(Items items) {
  return Value(std::make_shared<const Seq>(Seq{Tag::kList, std::move(items)}));
}

Value Value::vector(Items items) {
  return Value(std::make_shared<const Seq>(Seq{Tag::kVector, std::move(items)}));
}

Value Value::set(Items items) {
  std::sort(items.begin(), items.end(), [](const Value& a, const Value& b) {
    return compare_values(a, b) < 0;
  });
  items.erase(std::unique(items.begin(), items.end(),
                          [](const Value& a, const Value& b) {
                            return compare_values(a, b) == 0;
                          }),
              items.end());
  return Value(std::make_shared<const Seq>(Seq{Tag::kSet, std::move(items)}));
}

Value Value::map(Entries entries) {
  // stable sort keeps insertion order among equal keys; keep the last one
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return compare_values(a.first, b.first) < 0;
  });
  Entries out;
  for (auto& e : entries) {
    if (!out.empty() && compare_values(out.back().first, e.first) == 0) {
      out.back() = std::move(e);
    } else {
      out.push_back(std::move(e));
    }
  }
  return Value(std::make_shared<const Entries>(std::move(out)));
}

Value::Tag Value::tag() const {
  switch (data_.index()) {
    case 0: return Tag::kTheorem;
    case 1: return Tag::kContext;
    case 2: return Tag::kTerm;
    case 3: return Tag::kType;
    case 4: return Tag::kInt;
    case 5: return Tag::kString;
    case 6: return Tag::kBool;
    case 7: return std::get<SeqPtr>(data_)->tag;
    case 8: return Tag::kMap;
    default: return Tag::kFunction;
  }
}

const Value::Items& Value::items() const { return std::get<SeqPtr>(data_)->items; }

const Value::Entries& Value::entries() const { return *std::get<MapPtr>(data_); }

Env env_bind(Env env, std::string name, Value value) {
  return std::make_shared<const EnvNode>(
      EnvNode{std::move(name), std::move(value), std::move(env)});
}

Env env_mask(Env env, std::string name) {
  return std::make_shared<const EnvNode>(
      EnvNode{std::move(name), std::nullopt, std::move(env)});
}

EnvLookup env_lookup(const Env& env, std::string_view name) {
  for (const EnvNode* n = env.get(); n != nullptr; n = n->next.get()) {
    if (n->name != name) continue;
    if (!n->value) return EnvLookup{false, true, nullptr};
    return EnvLookup{true, false, &*n->value};
  }
  return {};
}

std::string_view tag_name(Value::Tag tag) {
  switch (tag) {
    case Value::Tag::kTheorem: return "theorem";
    case Value::Tag::kContext: return "context";
    case Value::Tag::kTerm: return "term";
    case Value::Tag::kType: return "type";
    case Value::Tag::kInt: return "integer";
    case Value::Tag::kString: return "string";
    case Value::Tag::kBool: return "bool";
    case Value::Tag::kList: return "list";
    case Value::Tag::kVector: return "vector";
    case Value::Tag::kSet: return "set";
    case Value::Tag::kMap: return "map";
    case Value::Tag::kFunction: return "function";
  }
  return "?";
}

std::strong_ordering compare_terms(const Term& a, const Term& b) {
  if (a.same_node(b)) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Term::Kind::kConst: {
      if (auto c = a.const_id() <=> b.const_id(); c != 0) return c;
      if (a.instance().has_value() != b.instance().has_value()) {
        return a.instance().has_value() ? std::strong_ordering::greater
                                        : std::strong_ordering::less;
      }
      if (a.instance()) return compare_types(*a.instance(), *b.instance());
      return std::strong_ordering::equal;
    }
    case Term::Kind::kVar:
      return a.index() <=> b.index();
    case Term::Kind::kLam:
      if (auto c = compare_types(a.domain(), b.domain()); c != 0) return c;
      return compare_terms(a.body(), b.body());
    case Term::Kind::kApp:
      if (auto c = compare_terms(a.fun(), b.fun()); c != 0) return c;
      return compare_terms(a.arg(), b.arg());
  }
  return std::strong_ordering::equal;
}

std::strong_ordering compare_values(const Value& a, const Value& b) {
  if (auto c = a.tag() <=> b.tag(); c != 0) return c;
  switch (a.tag()) {
    case Value::Tag::kTheorem:
      if (auto c = a.theorem().context() <=> b.theorem().context(); c != 0) return c;
      return compare_terms(a.theorem().proposition(), b.theorem().proposition());
    case Value::Tag::kContext:
      return a.context() <=> b.context();
    case Value::Tag::kTerm:
      if (auto c = a.term().home <=> b.term().home; c != 0) return c;
      return compare_terms(a.term().term, b.term().term);
    case Value::Tag::kType:
      return compare_types(a.type(), b.type());
    case Value::Tag::kInt:
      return cmp(a.integer(), b.integer());
    case Value::Tag::kString:
      return a.string() <=> b.string();
    case Value::Tag::kBool:
      return a.boolean() <=> b.boolean();
    case Value::Tag::kList:
    case Value::Tag::kVector:
    case Value::Tag::kSet: {
      const auto& x = a.items();
      const auto& y = b.items();
      for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (auto c = compare_values(x[i], y[i]); c != 0) return c;
      }
      return x.size() <=> y.size();
    }
    case Value::Tag::kMap: {
      const auto& x = a.entries();
      const auto& y = b.entries();
      for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (auto c = compare_values(x[i].first, y[i].first); c != 0) return c;
        if (auto c = compare_values(x[i].second, y[i].second); c != 0) return c;
      }
      return x.size() <=> y.size();
    }
    case Value::Tag::kFunction:
      break;
  }
  throw Error(ErrorKind::kScriptError, "functions cannot be compared");
}

bool contains_theorem(const Value& v) {
  switch (v.tag()) {
    case Value::Tag::kTheorem:
      return true;
    case Value::Tag::kList:
    case Value::Tag::kVector:
    case Value::Tag::kSet:
      return std::any_of(v.items().begin(), v.items().end(), contains_theorem);
    case Value::Tag::kMap:
      return std::any_of(v.entries().begin(), v.entries().end(), [](const auto& e) {
        return contains_theorem(e.first) || contains_theorem(e.second);
      });
    case Value::Tag::kFunction: {
      const Function& f = v.function();
      if (std::any_of(f.bound.begin(), f.bound.end(), contains_theorem)) return true;
      if (!f.group) return false;
      for (const EnvNode* n = f.group->captured.get(); n != nullptr; n = n->next.get()) {
        if (n->value && contains_theorem(*n->value)) return true;
      }
      return false;
    }
    default:
      return false;
  }
}

}  // namespace peerhol
