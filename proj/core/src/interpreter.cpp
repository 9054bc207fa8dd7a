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

#include "peerhol/interpreter.hpp"

#include <pthread.h>

#include <exception>
#include <map>
#include <mutex>

#include "utf8.hpp"

namespace peerhol {
namespace {

using script::Expr;
using script::Pattern;
using script::Stmt;

[[noreturn]] void script_error(const std::string& msg) { fail(ErrorKind::kScriptError, msg); }

std::string with_article(Value::Tag tag) {
  const std::string_view n = tag_name(tag);
  const bool vowel = n.find_first_of("aeiou") == 0;
  return std::string(vowel ? "an " : "a ") + std::string(n);
}

bool is_control(Expr::Kind k) {
  return k == Expr::Kind::kBlock || k == Expr::Kind::kIf || k == Expr::Kind::kFor ||
         k == Expr::Kind::kWhile || k == Expr::Kind::kMatch || k == Expr::Kind::kWith;
}

bool expect_bool(const Value& v, const std::string& what) {
  if (!v.is(Value::Tag::kBool)) {
    script_error(what + " must be a bool, got " + with_article(v.tag()));
  }
  return v.boolean();
}

const BigInt& expect_int(const Value& v) {
  if (!v.is(Value::Tag::kInt)) {
    script_error("expected an int, got " + with_article(v.tag()));
  }
  return v.integer();
}

bool is_seq(const Value& v) {
  return v.is(Value::Tag::kList) || v.is(Value::Tag::kVector) || v.is(Value::Tag::kSet);
}

SourcePos remap(SourcePos lit, SourcePos inner) {
  if (inner.line == 1) return {lit.line, lit.column + inner.column - 1};
  return {lit.line + inner.line - 1, inner.column};
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

// Decrements the call depth on scope exit.
struct DepthGuard {
  std::size_t& depth;
  ~DepthGuard() { --depth; }
};

ContextRef parse_key(const std::string& key) {
  const auto colon = key.rfind(':');
  if (colon == std::string::npos) return ContextRef{key, 0};
  const std::string idx = key.substr(colon + 1);
  if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos ||
      idx.size() > 9) {
    fail(ErrorKind::kUnknownContext, "malformed context key '" + key + "'");
  }
  return ContextRef{key.substr(0, colon), static_cast<std::uint32_t>(std::stoul(idx))};
}

using Builtins = std::map<std::string, std::shared_ptr<const NativeFunction>, std::less<>>;

const Builtins& builtins() {
  static const Builtins table = [] {
    Builtins t;
    auto add = [&](std::string name,
                   std::function<Value(CallSite&, const std::vector<Value>&)> fn) {
      auto nf = std::make_shared<NativeFunction>();
      nf->name = name;
      nf->arity = 1;
      nf->fn = std::move(fn);
      t.emplace(std::move(name), std::move(nf));
    };
    add("print", [](CallSite& cs, const std::vector<Value>& a) {
      const auto& print = cs.interpreter().options().print;
      if (print) print(a[0].is(Value::Tag::kString) ? a[0].string() : cs.interpreter().show(a[0]));
      return a[0];
    });
    add("size", [](CallSite&, const std::vector<Value>& a) -> Value {
      const Value& v = a[0];
      if (v.is(Value::Tag::kString)) return Value(BigInt(utf8::length(v.string())));
      if (is_seq(v)) return Value(BigInt(v.items().size()));
      if (v.is(Value::Tag::kMap)) return Value(BigInt(v.entries().size()));
      script_error("size of " + with_article(v.tag()));
    });
    add("str", [](CallSite& cs, const std::vector<Value>& a) {
      if (a[0].is(Value::Tag::kString)) return a[0];
      return Value(cs.interpreter().show(a[0]));
    });
    add("term", [](CallSite& cs, const std::vector<Value>& a) {
      const ContextPtr& ctx = cs.state().ctx;
      return Value(TermValue{cs.interpreter().as_term(a[0], ctx), ctx->ref()});
    });
    add("type", [](CallSite& cs, const std::vector<Value>& a) -> Value {
      if (a[0].is(Value::Tag::kType)) return a[0];
      if (a[0].is(Value::Tag::kString)) return Value(parse_type(a[0].string()));
      const ContextPtr& ctx = cs.state().ctx;
      return Value(typecheck(cs.interpreter().as_term(a[0], ctx), ContextNames(ctx)));
    });
    add("typeof", [](CallSite&, const std::vector<Value>& a) {
      return Value(std::string(tag_name(a[0].tag())));
    });
    add("proposition", [](CallSite& cs, const std::vector<Value>& a) {
      const ContextPtr& ctx = cs.state().ctx;
      return Value(TermValue{cs.interpreter().as_theorem(a[0], ctx).proposition(), ctx->ref()});
    });
    return t;
  }();
  return table;
}

}  // namespace

std::shared_ptr<const NativeFunction> find_builtin(std::string_view name) {
  const auto& t = builtins();
  auto it = t.find(name);
  return it == t.end() ? nullptr : it->second;
}

Interpreter::Interpreter(ContextTree& tree, Chronicles* chronicles, ContextPtr root,
                         RunOptions options)
    : tree_(tree), chronicles_(chronicles), root_(std::move(root)), options_(std::move(options)) {
  hooks_.owner = options_.user;
  hooks_.created = [this](const ContextPtr& c) {
    created_.push_back(c);
    created_refs_.insert(c->ref());
  };
  if (options_.publishing && chronicles_) {
    hooks_.guard = [this](const ContextPtr& parent) {
      chronicles_->guard(*options_.publishing, parent,
                         [this](const ContextRef& r) { return created_here(r); });
    };
  }
}

std::string Interpreter::show(const Value& v) { return print_value(v, tree_, options_.print_mode); }

State Interpreter::exec_block(const script::Block& block, State state,
                              std::optional<Value>* value) {
  std::optional<Value> last;
  for (const auto& stmt : block.stmts) state = exec_statement(stmt, std::move(state), &last);
  if (value) *value = last ? *last : Value(state.ctx->ref());
  return state;
}

State Interpreter::exec_statement(const script::StmtPtr& stmt, State state,
                                  std::optional<Value>* value) {
  try {
    return exec_inner(stmt, std::move(state), value);
  } catch (const Error& err) {
    if (err.position()) throw;
    throw Error(err.kind(), err.what(), stmt->pos);
  }
}

State Interpreter::push_bindings(State state, const ContextPtr& ctx) {
  for (const auto& [name, v] : ctx->record().bindings) state.env = env_bind(state.env, name, v);
  for (const auto& name : ctx->record().unbound) state.env = env_mask(state.env, name);
  state.ctx = ctx;
  return state;
}

State Interpreter::exec_inner(const script::StmtPtr& ptr, State state,
                              std::optional<Value>* value) {
  const Stmt& stmt = *ptr;
  if (value) value->reset();
  const ContextPtr ctx = state.ctx;  // copy: state is moved below
  switch (stmt.kind) {
    case Stmt::Kind::kFix: {
      const Value spec = eval(*stmt.expr, state);
      std::string name;
      std::optional<Type> type;
      std::optional<Term> domain;
      if (spec.is(Value::Tag::kString)) {
        FixSpec fs = parse_fix_spec(spec.string(), ContextNames(ctx));
        name = std::move(fs.name);
        type = std::move(fs.type);
        domain = std::move(fs.domain);
      } else if (spec.is(Value::Tag::kVector) && spec.items().size() == 2 &&
                 spec.items()[0].is(Value::Tag::kString)) {
        name = spec.items()[0].string();
        const Value& second = spec.items()[1];
        if (second.is(Value::Tag::kType)) {
          type = second.type();
        } else if (second.is(Value::Tag::kTerm) || second.is(Value::Tag::kString)) {
          Term d = as_term(second, ctx);
          if (!typecheck(d, ContextNames(ctx)).is_set()) {
            script_error("the domain of fix must be a set");
          }
          domain = std::move(d);
        } else {
          script_error("fix expects (name, type) or (name, set)");
        }
      } else {
        script_error("fix expects \"x : type\", \"x ∈ D\" or a pair, got " +
                     with_article(spec.tag()));
      }
      if (type) {
        if (stmt.label) script_error("only a membership fix can be labelled");
        state.ctx = tree_.fix(ctx, name, *type, hooks_);
        return state;
      }
      const ContextPtr fixed = tree_.fix(ctx, name, Type::set(), hooks_);
      const Term h = make_binary(ConstId::kElem, Term::var(0), shift_constants(*domain, 1));
      return push_bindings(std::move(state), tree_.assume(fixed, h, stmt.label, hooks_));
    }
    case Stmt::Kind::kAssume: {
      Term h = as_term(eval(*stmt.expr, state), ctx);
      return push_bindings(std::move(state), tree_.assume(ctx, std::move(h), stmt.label, hooks_));
    }
    case Stmt::Kind::kDefine: {
      const Value spec = eval(*stmt.expr, state);
      std::string name;
      Term body = Term::constant(ConstId::kTrue);
      if (spec.is(Value::Tag::kString)) {
        DefineSpec ds = parse_define_spec(spec.string(), ContextNames(ctx));
        name = std::move(ds.name);
        body = std::move(ds.body);
      } else if (spec.is(Value::Tag::kVector) && spec.items().size() == 2 &&
                 spec.items()[0].is(Value::Tag::kString)) {
        name = spec.items()[0].string();
        body = as_term(spec.items()[1], ctx);
      } else {
        script_error("define expects \"x = d\" or a pair (name, term)");
      }
      return push_bindings(std::move(state),
                           tree_.define(ctx, std::move(name), std::move(body), stmt.label, hooks_));
    }
    case Stmt::Kind::kObtain: {
      std::vector<std::string> names;
      if (stmt.expr) {
        const Value v = eval(*stmt.expr, state);
        if (v.is(Value::Tag::kString)) {
          names = parse_name_list(v.string());
        } else if (v.is(Value::Tag::kList) || v.is(Value::Tag::kVector)) {
          for (const Value& x : v.items()) {
            if (!x.is(Value::Tag::kString)) script_error("obtain expects names as strings");
            names.push_back(x.string());
          }
        } else {
          script_error("obtain expects a string or a list of names");
        }
      }
      const Theorem th = as_theorem(eval(*stmt.by, state), ctx);
      return push_bindings(std::move(state),
                           tree_.obtain(ctx, th, std::move(names), stmt.label, hooks_));
    }
    case Stmt::Kind::kHave: {
      Term guard = as_term(eval(*stmt.expr, state), ctx);
      const Theorem th = as_theorem(eval(*stmt.by, state), ctx);
      return push_bindings(std::move(state),
                           tree_.have(ctx, std::move(guard), th, stmt.label, hooks_));
    }
    case Stmt::Kind::kLet: {
      Value v = eval(*stmt.expr, state);
      return push_bindings(std::move(state), tree_.bind(ctx, *stmt.label, std::move(v), hooks_));
    }
    case Stmt::Kind::kUnbind:
      return push_bindings(std::move(state), tree_.unbind(ctx, *stmt.label, hooks_));
    case Stmt::Kind::kVal: {
      const Value v = eval(*stmt.expr, state);
      State next = state;
      if (!bind_pattern(*stmt.pattern, v, next)) {
        throw Error(ErrorKind::kScriptError, "the value does not match the pattern",
                    stmt.pattern->pos);
      }
      return next;
    }
    case Stmt::Kind::kDef: {
      auto group = std::make_shared<const DefGroup>(DefGroup{ptr, state.env, ctx->ref()});
      for (std::size_t i = 0; i < stmt.defs.size(); ++i) {
        state.env = env_bind(state.env, stmt.defs[i].name, Value(Function{group, nullptr, i, {}}));
      }
      return state;
    }
    case Stmt::Kind::kExpr: {
      const Expr& e = *stmt.expr;
      if (is_control(e.kind)) {
        Value v(false);
        try {
          state = exec_control(e, std::move(state), &v);
        } catch (const Error& err) {
          if (err.position()) throw;
          throw Error(err.kind(), err.what(), e.pos);
        }
        if (value) *value = std::move(v);
        return state;
      }
      Value v = eval(e, state);
      if (value) *value = std::move(v);
      return state;
    }
  }
  return state;
}

State Interpreter::exec_control(const Expr& e, State state, Value* value) {
  std::optional<Value> v;
  switch (e.kind) {
    case Expr::Kind::kBlock:
      state = exec_block(e.blocks[0], std::move(state), &v);
      *value = *v;
      return state;
    case Expr::Kind::kIf:
      if (expect_bool(eval(*e.items[0], state), "the condition of if")) {
        state = exec_block(e.blocks[0], std::move(state), &v);
      } else if (e.blocks.size() > 1) {
        state = exec_block(e.blocks[1], std::move(state), &v);
      } else {
        v = Value(state.ctx->ref());
      }
      *value = *v;
      return state;
    case Expr::Kind::kFor: {
      const Value seq = eval(*e.items[0], state);
      Value::Items items;
      if (is_seq(seq)) {
        items = seq.items();
      } else if (seq.is(Value::Tag::kMap)) {
        for (const auto& [k, x] : seq.entries()) items.push_back(Value::vector({k, x}));
      } else {
        script_error("cannot iterate over " + with_article(seq.tag()));
      }
      for (const Value& item : items) {
        if (!bind_pattern(*e.pattern, item, state)) {
          throw Error(ErrorKind::kScriptError, "the element does not match the pattern",
                      e.pattern->pos);
        }
        state = exec_block(e.blocks[0], std::move(state));
      }
      *value = Value(state.ctx->ref());
      return state;
    }
    case Expr::Kind::kWhile:
      while (expect_bool(eval(*e.items[0], state), "the condition of while")) {
        state = exec_block(e.blocks[0], std::move(state));
      }
      *value = Value(state.ctx->ref());
      return state;
    case Expr::Kind::kMatch: {
      const Value scrutinee = eval(*e.items[0], state);
      for (const auto& c : e.cases) {
        State trial = state;
        if (!bind_pattern(c.pattern, scrutinee, trial)) continue;
        state = exec_block(c.body, std::move(trial), &v);
        *value = *v;
        return state;
      }
      script_error("no case matches " + show(scrutinee));
    }
    case Expr::Kind::kWith: {
      const Value c = eval(*e.items[0], state);
      if (!c.is(Value::Tag::kContext)) {
        script_error("with expects a context, got " + with_article(c.tag()));
      }
      state.ctx = tree_.load(c.context());
      state = exec_block(e.blocks[0], std::move(state), &v);
      *value = *v;
      return state;
    }
    default:
      break;
  }
  fail(ErrorKind::kInternalError, "not a control form");
}

bool Interpreter::bind_pattern(const Pattern& p, const Value& v, State& state) {
  switch (p.kind) {
    case Pattern::Kind::kWildcard:
      return true;
    case Pattern::Kind::kName:
      state.env = env_bind(state.env, p.name, v);
      return true;
    case Pattern::Kind::kLiteral: {
      const Value lit = eval(*p.literal, state);
      return lit.tag() == v.tag() && equal(lit, v, state.ctx);
    }
    case Pattern::Kind::kTuple:
      if (!(v.is(Value::Tag::kVector) || v.is(Value::Tag::kList)) ||
          v.items().size() != p.elems.size()) {
        return false;
      }
      for (std::size_t i = 0; i < p.elems.size(); ++i) {
        if (!bind_pattern(p.elems[i], v.items()[i], state)) return false;
      }
      return true;
  }
  return false;
}

Value Interpreter::eval(const Expr& e, const State& state) {
  try {
    return eval_inner(e, state);
  } catch (const Error& err) {
    if (err.position()) throw;
    throw Error(err.kind(), err.what(), e.pos);
  }
}

Term Interpreter::literal(const Expr& e, const ContextPtr& ctx) {
  try {
    return parse_term(e.text, ContextNames(ctx));
  } catch (const Error& err) {
    if (!err.position()) throw;
    throw Error(err.kind(), err.what(), remap(e.pos, *err.position()));
  }
}

Value Interpreter::eval_inner(const Expr& e, const State& state) {
  switch (e.kind) {
    case Expr::Kind::kInt: return Value(BigInt(e.text));
    case Expr::Kind::kString: return Value(e.text);
    case Expr::Kind::kTermLit: return Value(TermValue{literal(e, state.ctx), state.ctx->ref()});
    case Expr::Kind::kBool: return Value(e.flag);
    case Expr::Kind::kName: return lookup(e.text, state);
    case Expr::Kind::kRoot: return Value(root_->ref());
    case Expr::Kind::kThis: return Value(state.ctx->ref());
    case Expr::Kind::kList:
    case Expr::Kind::kTuple:
    case Expr::Kind::kSet: {
      Value::Items items;
      for (const auto& x : e.items) items.push_back(eval(*x, state));
      if (e.kind == Expr::Kind::kList) return Value::list(std::move(items));
      if (e.kind == Expr::Kind::kTuple) return Value::vector(std::move(items));
      return Value::set(std::move(items));
    }
    case Expr::Kind::kMap: {
      Value::Entries entries;
      for (std::size_t i = 0; i + 1 < e.items.size(); i += 2) {
        Value k = eval(*e.items[i], state);
        entries.emplace_back(std::move(k), eval(*e.items[i + 1], state));
      }
      return Value::map(std::move(entries));
    }
    case Expr::Kind::kApp: {
      const Value f = eval(*e.items[0], state);
      return apply(f, eval(*e.items[1], state), state);
    }
    case Expr::Kind::kBinary: return binary(e, state);
    case Expr::Kind::kUnary: {
      const Value v = eval(*e.items[0], state);
      if (e.text == "not") return Value(!expect_bool(v, "the operand of not"));
      return Value(BigInt(-expect_int(v)));
    }
    case Expr::Kind::kField: {
      const Value obj = eval(*e.items[0], state);
      if (obj.is(Value::Tag::kContext)) return tree_.resolve(tree_.load(obj.context()), e.text);
      if (obj.is(Value::Tag::kMap)) {
        for (const auto& [k, v] : obj.entries()) {
          if (k.is(Value::Tag::kString) && k.string() == e.text) return v;
        }
        fail(ErrorKind::kNameError, "the map has no key \"" + e.text + "\"");
      }
      script_error("cannot access ." + e.text + " of " + with_article(obj.tag()));
    }
    case Expr::Kind::kRef: return Value(resolve_reference(e.ref));
    case Expr::Kind::kBlock:
    case Expr::Kind::kIf:
    case Expr::Kind::kFor:
    case Expr::Kind::kWhile:
    case Expr::Kind::kMatch:
    case Expr::Kind::kWith: {
      // In expression position the state changes are dropped.
      Value v(false);
      exec_control(e, state, &v);
      return v;
    }
  }
  fail(ErrorKind::kInternalError, "unknown expression");
}

Value Interpreter::binary(const Expr& e, const State& state) {
  const std::string& op = e.text;
  if (op == "and" || op == "or") {
    const bool a = expect_bool(eval(*e.items[0], state), "an operand of " + op);
    if (op == "and" && !a) return Value(false);
    if (op == "or" && a) return Value(true);
    return Value(expect_bool(eval(*e.items[1], state), "an operand of " + op));
  }
  const Value a = eval(*e.items[0], state);
  const Value b = eval(*e.items[1], state);
  if (op == "==") return Value(equal(a, b, state.ctx));
  if (op == "!=") return Value(!equal(a, b, state.ctx));
  if (op == "<" || op == "<=" || op == ">" || op == ">=") {
    std::strong_ordering c = std::strong_ordering::equal;
    if (a.is(Value::Tag::kInt) && b.is(Value::Tag::kInt)) {
      c = a.integer() < b.integer()   ? std::strong_ordering::less
          : b.integer() < a.integer() ? std::strong_ordering::greater
                                      : std::strong_ordering::equal;
    } else if (a.is(Value::Tag::kString) && b.is(Value::Tag::kString)) {
      c = a.string() <=> b.string();
    } else {
      script_error("cannot order " + with_article(a.tag()) + " and " +
                   with_article(b.tag()));
    }
    if (op == "<") return Value(c < 0);
    if (op == "<=") return Value(c <= 0);
    if (op == ">") return Value(c > 0);
    return Value(c >= 0);
  }
  if (op == "++") {
    if (a.tag() != b.tag()) script_error("++ needs operands of the same type");
    switch (a.tag()) {
      case Value::Tag::kString: return Value(a.string() + b.string());
      case Value::Tag::kList:
      case Value::Tag::kVector:
      case Value::Tag::kSet: {
        Value::Items items = a.items();
        items.insert(items.end(), b.items().begin(), b.items().end());
        if (a.is(Value::Tag::kList)) return Value::list(std::move(items));
        if (a.is(Value::Tag::kVector)) return Value::vector(std::move(items));
        return Value::set(std::move(items));
      }
      case Value::Tag::kMap: {
        Value::Entries entries = a.entries();
        entries.insert(entries.end(), b.entries().begin(), b.entries().end());
        return Value::map(std::move(entries));
      }
      default: script_error("cannot concatenate " + with_article(a.tag()));
    }
  }
  if (op == "+" && a.is(Value::Tag::kString) && b.is(Value::Tag::kString)) {
    return Value(a.string() + b.string());
  }
  const BigInt& x = expect_int(a);
  const BigInt& y = expect_int(b);
  if (op == "+") return Value(BigInt(x + y));
  if (op == "-") return Value(BigInt(x - y));
  if (op == "*") return Value(BigInt(x * y));
  if (y == 0) script_error("division by zero");
  if (op == "/") return Value(BigInt(x / y));
  return Value(BigInt(x % y));
}

Value Interpreter::apply(const Value& f, const Value& g, const State& state) {
  switch (f.tag()) {
    case Value::Tag::kFunction: {
      Function fn = f.function();
      fn.bound.push_back(g);
      if (fn.bound.size() < fn.arity()) return Value(std::move(fn));
      return call(fn, state);
    }
    case Value::Tag::kTheorem: {
      const Theorem tf = as_theorem(f, state.ctx);
      const Term p = normalize(tf.proposition());
      const bool implication = p.is_app() && p.fun().is_app() &&
                               p.fun().fun().is_const(ConstId::kImplies);
      const bool universal = p.is_app() && p.fun().is_const(ConstId::kForall);
      if (!implication && !universal) {
        fail(ErrorKind::kNotApplicable, "the theorem is neither an implication nor a ∀");
      }
      if (implication && (g.is(Value::Tag::kTheorem) || g.is(Value::Tag::kContext))) {
        return Value(apply_theorem(tf, as_theorem(g, state.ctx)));
      }
      if (universal && (g.is(Value::Tag::kTerm) || g.is(Value::Tag::kString))) {
        return Value(apply_theorem(tf, as_term(g, state.ctx), ContextNames(state.ctx)));
      }
      fail(ErrorKind::kNotApplicable, std::string(implication ? "an implication" : "a ∀") +
                                          " cannot be applied to " + with_article(g.tag()));
    }
    case Value::Tag::kMap:
      for (const auto& [k, v] : f.entries()) {
        if (compare_values(k, g) == 0) return v;
      }
      fail(ErrorKind::kNameError, "key " + show(g) + " not in map");
    case Value::Tag::kList:
    case Value::Tag::kVector: {
      const BigInt& i = expect_int(g);
      if (i < 0 || i >= f.items().size()) script_error("index " + i.str() + " out of range");
      return f.items()[static_cast<std::size_t>(i)];
    }
    default:
      fail(ErrorKind::kNotApplicable, with_article(f.tag()) + " cannot be applied");
  }
}

Value Interpreter::call(const Function& f, const State& state) {
  if (depth_ >= options_.max_call_depth) {
    script_error("recursion depth limit of " + std::to_string(options_.max_call_depth) +
                 " exceeded");
  }
  ++depth_;
  DepthGuard guard{depth_};
  if (f.native) {
    CallSite site(*this, state);
    return f.native->fn(site, f.bound);
  }
  const DefGroup& group = *f.group;
  const auto& defs = group.stmt->defs;
  Env env = group.captured;
  for (std::size_t i = 0; i < defs.size(); ++i) {
    env = env_bind(env, defs[i].name, Value(Function{f.group, nullptr, i, {}}));
  }
  const script::FunDef& d = defs.at(f.index);
  for (std::size_t i = 0; i < d.params.size(); ++i) env = env_bind(env, d.params[i], f.bound[i]);
  State inner{state.ctx, std::move(env), state.scope};
  // Restored functions lost their captured environment; fall back to the
  // bindings of the context they were defined in.
  if (!group.captured && tree_.contains(group.def_context)) inner.scope = tree_.load(group.def_context);
  return eval(*d.body, inner);
}

Value Interpreter::lookup(const std::string& name, const State& state) {
  const EnvLookup r = env_lookup(state.env, name);
  if (r.found) return *r.value;
  if (r.masked) fail(ErrorKind::kNameError, "'" + name + "' has been unbound");
  if (auto v = tree_.lookup(state.scope ? state.scope : state.ctx, name)) return *v;
  if (auto b = find_builtin(name)) return Value(Function{nullptr, b, 0, {}});
  fail(ErrorKind::kNameError, "unknown identifier '" + name + "'");
}

Term Interpreter::as_term(const Value& v, const ContextPtr& ctx) {
  if (v.is(Value::Tag::kTerm)) {
    const TermValue& t = v.term();
    if (t.home == ctx->ref()) return t.term;
    return ContextTree::move_term(t.term, tree_.load(t.home), ctx);
  }
  if (v.is(Value::Tag::kString)) {
    try {
      return parse_term(v.string(), ContextNames(ctx));
    } catch (const Error& err) {
      // positions inside a string are not positions in the script
      std::string msg = err.what();
      if (err.position()) {
        msg += " (column " + std::to_string(err.position()->column) + " of \"" + v.string() + "\")";
      }
      throw Error(err.kind(), msg);
    }
  }
  script_error("expected a term, got " + with_article(v.tag()));
}

Theorem Interpreter::as_theorem(const Value& v, const ContextPtr& ctx) {
  if (v.is(Value::Tag::kTheorem)) return tree_.move_theorem(v.theorem(), ctx);
  if (v.is(Value::Tag::kContext)) {
    const Value fact = tree_.resolve(tree_.load(v.context()), "fact");
    if (!fact.is(Value::Tag::kTheorem)) script_error("the fact of the context is not a theorem");
    return tree_.move_theorem(fact.theorem(), ctx);
  }
  script_error("expected a theorem, got " + with_article(v.tag()));
}

bool Interpreter::equal(const Value& a, const Value& b, const ContextPtr& ctx) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case Value::Tag::kTerm:
      try {
        return alpha_beta_eta_equal(as_term(a, ctx), as_term(b, ctx));
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::kDanglingConstant) throw;
        return a.term().home == b.term().home &&
               alpha_beta_eta_equal(a.term().term, b.term().term);
      }
    case Value::Tag::kTheorem:
      return alpha_beta_eta_equal(as_theorem(a, ctx).proposition(),
                                  as_theorem(b, ctx).proposition());
    case Value::Tag::kContext: return a.context() == b.context();
    case Value::Tag::kType: return a.type() == b.type();
    case Value::Tag::kInt: return a.integer() == b.integer();
    case Value::Tag::kString: return a.string() == b.string();
    case Value::Tag::kBool: return a.boolean() == b.boolean();
    case Value::Tag::kList:
    case Value::Tag::kVector:
    case Value::Tag::kSet:
      if (a.items().size() != b.items().size()) return false;
      for (std::size_t i = 0; i < a.items().size(); ++i) {
        if (!equal(a.items()[i], b.items()[i], ctx)) return false;
      }
      return true;
    case Value::Tag::kMap:
      if (a.entries().size() != b.entries().size()) return false;
      for (std::size_t i = 0; i < a.entries().size(); ++i) {
        if (compare_values(a.entries()[i].first, b.entries()[i].first) != 0 ||
            !equal(a.entries()[i].second, b.entries()[i].second, ctx)) {
          return false;
        }
      }
      return true;
    case Value::Tag::kFunction: script_error("functions cannot be compared");
  }
  return false;
}

std::uint64_t Interpreter::version_for(const ChronicleId& c) {
  if (auto it = options_.assignment.find(c); it != options_.assignment.end()) {
    if (!chronicles_->version({c.owner, c.name, it->second})) {
      fail(ErrorKind::kUnknownChronicle,
           "chronicle " + c.to_string() + " has no version " + std::to_string(it->second));
    }
    return it->second;
  }
  const auto n = chronicles_->newest(c);
  if (!n) fail(ErrorKind::kUnknownChronicle, "no chronicle " + c.to_string());
  return n->version;
}

ContextRef Interpreter::resolve_reference(const script::RefSpec& ref) {
  ContextPtr target;
  if (ref.by_key) {
    target = tree_.load(parse_key(ref.parts.at(0)));
  } else {
    if (!chronicles_) fail(ErrorKind::kUnknownChronicle, "no chronicles available");
    ChronicleId id;
    if (ref.parts.size() == 1) {
      const auto found = chronicles_->find_by_name(ref.parts[0]);
      std::vector<ChronicleId> own;
      for (const auto& c : found) {
        if (c.owner == options_.user) own.push_back(c);
      }
      if (!own.empty()) {
        id = own.front();
      } else if (found.size() == 1) {
        id = found.front();
      } else if (found.empty()) {
        fail(ErrorKind::kUnknownChronicle, "no chronicle named " + ref.parts[0]);
      } else {
        fail(ErrorKind::kAmbiguousChronicle,
             std::to_string(found.size()) + " users own a chronicle named " + ref.parts[0]);
      }
    } else {
      id = ChronicleId{ref.parts[0], ref.parts[1]};
      if (!chronicles_->newest(id)) fail(ErrorKind::kUnknownChronicle, "no chronicle " + id.to_string());
    }
    std::uint64_t v = 0;
    if (ref.parts.size() == 3) {
      const std::string& digits = ref.parts[2];
      v = digits.size() > 18 ? 0 : std::stoull(digits);
      if (!chronicles_->version({id.owner, id.name, v})) {
        fail(ErrorKind::kUnknownChronicle,
             "chronicle " + id.to_string() + " has no version " + digits);
      }
    } else {
      v = version_for(id);
    }
    used_[id] = v;
    target = tree_.load(chronicles_->version({id.owner, id.name, v})->final_context);
  }
  return tree_.import(target, hooks_)->ref();
}

std::string print_value(const Value& v, ContextTree& tree, PrintMode mode) {
  const bool ascii = mode == PrintMode::kAscii;
  auto join = [&](const Value::Items& items, const char* open, const char* close) {
    std::string out = open;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += print_value(items[i], tree, mode);
    }
    return out + close;
  };
  switch (v.tag()) {
    case Value::Tag::kTheorem: {
      const Theorem& th = v.theorem();
      return std::string(ascii ? "|- " : "⊢ ") +
             print_term(th.proposition(), ContextNames(tree.load(th.context())), mode);
    }
    case Value::Tag::kTerm:
      return "'" + print_term(v.term().term, ContextNames(tree.load(v.term().home)), mode) + "'";
    case Value::Tag::kContext: return "context " + v.context().to_string();
    case Value::Tag::kType: return print_type(v.type(), mode);
    case Value::Tag::kInt: return v.integer().str();
    case Value::Tag::kString: return quote(v.string());
    case Value::Tag::kBool: return v.boolean() ? "true" : "false";
    case Value::Tag::kList: return join(v.items(), "[", "]");
    case Value::Tag::kVector: return join(v.items(), "(", ")");
    case Value::Tag::kSet: return join(v.items(), "{", "}");
    case Value::Tag::kMap: {
      if (v.entries().empty()) return "{->}";
      std::string out = "{";
      for (std::size_t i = 0; i < v.entries().size(); ++i) {
        if (i) out += ", ";
        out += print_value(v.entries()[i].first, tree, mode) + " -> " +
               print_value(v.entries()[i].second, tree, mode);
      }
      return out + "}";
    }
    case Value::Tag::kFunction: {
      const Function& f = v.function();
      return "<function " + f.name() + "/" + std::to_string(f.arity() - f.bound.size()) + ">";
    }
  }
  return "?";
}

void run_with_large_stack(const std::function<void()>& fn, std::size_t bytes) {
  struct Job {
    const std::function<void()>* fn;
    std::exception_ptr error;
  } job{&fn, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, bytes);
  pthread_t thread;
  const int rc = pthread_create(
      &thread, &attr,
      [](void* p) -> void* {
        auto* j = static_cast<Job*>(p);
        try {
          (*j->fn)();
        } catch (...) {
          j->error = std::current_exception();
        }
        return nullptr;
      },
      &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    fn();  // could not get a big stack; run here
    return;
  }
  pthread_join(thread, nullptr);
  if (job.error) std::rethrow_exception(job.error);
}

}  // namespace peerhol
