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

#include <algorithm>
#include <array>
#include <cassert>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "peerhol/syntax.hpp"
#include "utf8.hpp"

namespace peerhol {
namespace {

enum class Tk {
  kIdent,
  kRaw,
  kLParen,
  kRParen,
  kLBrace,
  kRBrace,
  kComma,
  kBar,
  kDot,
  kColon,
  kLambda,
  kArrow,  // type arrow; also accepted for implication between terms
  kConst,
  kSet,
  kProp,
  kEnd,
};

struct Token {
  Tk kind;
  std::string text;
  ConstId id = ConstId::kTrue;
  std::optional<std::uint32_t> index;
  SourcePos pos;
};

[[noreturn]] void parse_error(const std::string& msg, SourcePos pos) {
  throw Error(ErrorKind::kParseError, msg, pos);
}

const std::unordered_map<std::string, ConstId>& ascii_constants() {
  static const auto* table = [] {
    auto* m = new std::unordered_map<std::string, ConstId>();
    for (const ConstInfo& c : all_constants()) {
      if (c.ascii.starts_with('_')) m->emplace(std::string(c.ascii), c.id);
    }
    return m;
  }();
  return *table;
}

std::optional<ConstId> glyph_constant(char32_t cp) {
  switch (cp) {
    case U'∀': return ConstId::kForall;
    case U'∃': return ConstId::kExists;
    case U'ε': return ConstId::kChoose;
    case U'⟶': return ConstId::kImplies;
    case U'∧': return ConstId::kAnd;
    case U'∨': return ConstId::kOr;
    case U'¬': return ConstId::kNot;
    case U'∈': return ConstId::kElem;
    case U'∅': return ConstId::kEmptySet;
    case U'𝒫': return ConstId::kPowerSet;
    case U'⋃': return ConstId::kBigUnion;
    case U'⋂': return ConstId::kBigIntersect;
    case U'∪': return ConstId::kUnion;
    case U'∩': return ConstId::kIntersect;
    case U'⊆': return ConstId::kSubset;
    default: return std::nullopt;
  }
}

bool is_infix(ConstId id) {
  switch (id) {
    case ConstId::kEq:
    case ConstId::kImplies:
    case ConstId::kAnd:
    case ConstId::kOr:
    case ConstId::kElem:
    case ConstId::kSubset:
    case ConstId::kUnion:
    case ConstId::kIntersect:
      return true;
    default:
      return false;
  }
}

bool is_quantifier(ConstId id) {
  return id == ConstId::kForall || id == ConstId::kExists ||
         id == ConstId::kChoose;
}

bool is_operator(ConstId id) {
  return is_infix(id) || is_quantifier(id) || id == ConstId::kNot;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      const SourcePos pos = pos_;
      if (at_ >= src_.size()) {
        out.push_back(Token{Tk::kEnd, "", ConstId::kTrue, std::nullopt, pos});
        return out;
      }
      out.push_back(next_token(pos));
    }
  }

 private:
  char32_t peek_cp(std::size_t ahead = 0) const {
    std::size_t p = at_;
    char32_t cp = 0;
    for (std::size_t i = 0; i <= ahead; ++i) {
      if (p >= src_.size()) return 0;
      cp = utf8::decode(src_, p);
    }
    return cp;
  }

  char32_t take() {
    const char32_t cp = utf8::decode(src_, at_);
    if (cp == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    return cp;
  }

  void skip_space() {
    while (at_ < src_.size() && utf8::is_space(peek_cp())) take();
  }

  std::uint32_t take_number(SourcePos pos) {
    std::uint64_t value = 0;
    bool any = false;
    while (at_ < src_.size() && peek_cp() >= '0' && peek_cp() <= '9') {
      value = value * 10 + (take() - '0');
      if (value > 0xFFFFFFFFull) parse_error("index too large", pos);
      any = true;
    }
    if (!any) parse_error("expected digits after '#'", pos);
    return static_cast<std::uint32_t>(value);
  }

  Token simple(Tk kind, SourcePos pos) {
    return Token{kind, "", ConstId::kTrue, std::nullopt, pos};
  }

  Token constant(ConstId id, SourcePos pos) {
    return Token{Tk::kConst, std::string(const_info(id).glyph), id,
                 std::nullopt, pos};
  }

  Token next_token(SourcePos pos) {
    const char32_t cp = peek_cp();
    switch (cp) {
      case '(': take(); return simple(Tk::kLParen, pos);
      case ')': take(); return simple(Tk::kRParen, pos);
      case '{': take(); return simple(Tk::kLBrace, pos);
      case '}': take(); return simple(Tk::kRBrace, pos);
      case ',': take(); return simple(Tk::kComma, pos);
      case '|': take(); return simple(Tk::kBar, pos);
      case '.': take(); return simple(Tk::kDot, pos);
      case ':': take(); return simple(Tk::kColon, pos);
      case '\\':
      case U'λ':
        take();
        return simple(Tk::kLambda, pos);
      case U'→':
        take();
        return simple(Tk::kArrow, pos);
      case '=':
        take();
        return constant(ConstId::kEq, pos);
      case '#': {
        take();
        Token t = simple(Tk::kRaw, pos);
        t.index = take_number(pos);
        return t;
      }
      case '-':
        if (peek_cp(1) == '-' && peek_cp(2) == '>') {
          take(); take(); take();
          return constant(ConstId::kImplies, pos);
        }
        if (peek_cp(1) == '>') {
          take(); take();
          return simple(Tk::kArrow, pos);
        }
        parse_error("unexpected '-'", pos);
      default:
        break;
    }
    if (cp == '_') {
      std::string word;
      while (at_ < src_.size() && utf8::is_ident_continue(peek_cp())) {
        utf8::append(word, take());
      }
      auto it = ascii_constants().find(word);
      if (it == ascii_constants().end()) {
        parse_error("unknown constant '" + word + "'", pos);
      }
      return constant(it->second, pos);
    }
    if (utf8::is_letter(cp)) {
      std::string word;
      while (at_ < src_.size() && utf8::is_ident_continue(peek_cp())) {
        utf8::append(word, take());
      }
      if (word == "set") return simple(Tk::kSet, pos);
      if (word == "prop") return simple(Tk::kProp, pos);
      if (word == "true") return constant(ConstId::kTrue, pos);
      if (word == "false") return constant(ConstId::kFalse, pos);
      Token t{Tk::kIdent, word, ConstId::kTrue, std::nullopt, pos};
      if (peek_cp() == '#') {
        take();
        t.index = take_number(pos);
      }
      return t;
    }
    if (auto id = glyph_constant(cp)) {
      take();
      return constant(*id, pos);
    }
    std::string shown;
    utf8::append(shown, cp);
    parse_error("unexpected character '" + shown + "'", pos);
  }

  std::string_view src_;
  std::size_t at_ = 0;
  SourcePos pos_;
};

SurfacePtr mk(SurfaceTerm s) { return std::make_shared<const SurfaceTerm>(std::move(s)); }

SurfacePtr mk_const(ConstId id, SourcePos pos) {
  SurfaceTerm s;
  s.kind = SurfaceTerm::Kind::kConst;
  s.id = id;
  s.pos = pos;
  return mk(std::move(s));
}

SurfacePtr mk_app(SurfacePtr f, SurfacePtr a) {
  SurfaceTerm s;
  s.kind = SurfaceTerm::Kind::kApp;
  s.pos = f->pos;
  s.left = std::move(f);
  s.right = std::move(a);
  return mk(std::move(s));
}

SurfacePtr mk_lam(std::string name, std::optional<Type> domain, SurfacePtr body,
                  SourcePos pos) {
  SurfaceTerm s;
  s.kind = SurfaceTerm::Kind::kLam;
  s.name = std::move(name);
  s.type = domain ? std::move(domain) : Type::set();
  s.left = std::move(body);
  s.pos = pos;
  return mk(std::move(s));
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks, std::size_t start = 0)
      : toks_(std::move(toks)), i_(start) {}

  SurfacePtr parse_whole_term() {
    SurfacePtr t = parse_ascribed();
    expect(Tk::kEnd, "end of term");
    return t;
  }

  Type parse_whole_type() {
    Type t = parse_type_expr();
    expect(Tk::kEnd, "end of type");
    return t;
  }

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(i_ + k, toks_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    if (i_ < toks_.size() - 1) ++i_;
    return t;
  }
  bool at(Tk kind) const { return peek().kind == kind; }
  bool at_const(ConstId id) const {
    return peek().kind == Tk::kConst && peek().id == id;
  }
  Token expect(Tk kind, const char* what) {
    if (!at(kind)) parse_error(std::string("expected ") + what, peek().pos);
    return next();
  }

  Type parse_type_expr() {
    Type lhs = parse_type_atom();
    if (at(Tk::kArrow)) {
      next();
      return Type::fun(std::move(lhs), parse_type_expr());
    }
    return lhs;
  }

  SurfacePtr parse_ascribed() {
    SurfacePtr t = operand(&Parser::parse_implies);
    if (at(Tk::kColon)) {
      const SourcePos pos = next().pos;
      SurfaceTerm s;
      s.kind = SurfaceTerm::Kind::kAscribe;
      s.type = parse_type_expr();
      s.left = std::move(t);
      s.pos = pos;
      return mk(std::move(s));
    }
    return t;
  }

 private:
  Type parse_type_atom() {
    const Token t = next();
    switch (t.kind) {
      case Tk::kSet: return Type::set();
      case Tk::kProp: return Type::prop();
      case Tk::kLParen: {
        Type inner = parse_type_expr();
        expect(Tk::kRParen, "')'");
        return inner;
      }
      default:
        parse_error("expected a type", t.pos);
    }
  }

  bool at_binder() const {
    if (at(Tk::kLambda)) return true;
    return peek().kind == Tk::kConst && is_quantifier(peek().id) &&
           peek(1).kind == Tk::kIdent;
  }

  SurfacePtr operand(SurfacePtr (Parser::*level)()) {
    if (at_binder()) return parse_binder();
    return (this->*level)();
  }

  SurfacePtr parse_binder() {
    const Token head = next();
    std::vector<Token> names;
    while (at(Tk::kIdent)) {
      if (peek().index) parse_error("binder names take no index", peek().pos);
      names.push_back(next());
    }
    if (names.empty()) parse_error("expected a bound variable", peek().pos);
    std::optional<Type> domain;
    if (at(Tk::kColon)) {
      next();
      domain = parse_type_expr();
    }
    expect(Tk::kDot, "'.' after binder");
    SurfacePtr body = operand(&Parser::parse_implies);
    for (auto it = names.rbegin(); it != names.rend(); ++it) {
      body = mk_lam(it->text, domain, std::move(body), it->pos);
      if (head.kind == Tk::kConst) body = mk_app(mk_const(head.id, head.pos), body);
    }
    return body;
  }

  static SurfacePtr binary(ConstId op, SourcePos pos, SurfacePtr a, SurfacePtr b) {
    return mk_app(mk_app(mk_const(op, pos), std::move(a)), std::move(b));
  }

  SurfacePtr parse_implies() {
    SurfacePtr lhs = operand(&Parser::parse_or);
    if (at_const(ConstId::kImplies) || at(Tk::kArrow)) {
      const SourcePos pos = next().pos;
      return binary(ConstId::kImplies, pos, lhs, operand(&Parser::parse_implies));
    }
    return lhs;
  }

  SurfacePtr parse_or() {
    SurfacePtr lhs = operand(&Parser::parse_and);
    if (at_const(ConstId::kOr)) {
      const SourcePos pos = next().pos;
      return binary(ConstId::kOr, pos, lhs, operand(&Parser::parse_or));
    }
    return lhs;
  }

  SurfacePtr parse_and() {
    SurfacePtr lhs = operand(&Parser::parse_not);
    if (at_const(ConstId::kAnd)) {
      const SourcePos pos = next().pos;
      return binary(ConstId::kAnd, pos, lhs, operand(&Parser::parse_and));
    }
    return lhs;
  }

  SurfacePtr parse_not() {
    if (at_const(ConstId::kNot)) {
      const SourcePos pos = next().pos;
      return mk_app(mk_const(ConstId::kNot, pos), operand(&Parser::parse_not));
    }
    return parse_cmp();
  }

  bool at_cmp() const {
    return at_const(ConstId::kEq) || at_const(ConstId::kElem) ||
           at_const(ConstId::kSubset);
  }

  SurfacePtr parse_cmp() {
    SurfacePtr lhs = parse_union();
    if (at_cmp()) {
      const Token op = next();
      SurfacePtr rhs = operand(&Parser::parse_union);
      if (at_cmp()) parse_error("comparison operators do not associate", peek().pos);
      return binary(op.id, op.pos, lhs, rhs);
    }
    return lhs;
  }

  SurfacePtr parse_union() {
    SurfacePtr lhs = parse_inter();
    while (at_const(ConstId::kUnion)) {
      const SourcePos pos = next().pos;
      lhs = binary(ConstId::kUnion, pos, lhs, operand(&Parser::parse_inter));
    }
    return lhs;
  }

  SurfacePtr parse_inter() {
    SurfacePtr lhs = parse_app();
    while (at_const(ConstId::kIntersect)) {
      const SourcePos pos = next().pos;
      lhs = binary(ConstId::kIntersect, pos, lhs, operand(&Parser::parse_app));
    }
    return lhs;
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case Tk::kIdent:
      case Tk::kRaw:
      case Tk::kLParen:
      case Tk::kLBrace:
        return true;
      case Tk::kConst:
        return !is_operator(peek().id);
      default:
        return false;
    }
  }

  SurfacePtr parse_app() {
    SurfacePtr f = parse_atom();
    while (starts_atom()) f = mk_app(f, parse_atom());
    return f;
  }

  SurfacePtr parse_atom() {
    if (at_binder()) return parse_binder();
    const Token t = next();
    switch (t.kind) {
      case Tk::kIdent: {
        SurfaceTerm s;
        s.kind = SurfaceTerm::Kind::kName;
        s.name = t.text;
        s.index = t.index;
        s.pos = t.pos;
        return mk(std::move(s));
      }
      case Tk::kRaw: {
        SurfaceTerm s;
        s.kind = SurfaceTerm::Kind::kRawIndex;
        s.index = t.index;
        s.pos = t.pos;
        return mk(std::move(s));
      }
      case Tk::kConst:
        if (is_infix(t.id) || t.id == ConstId::kNot) {
          parse_error("operator '" + t.text + "' is missing operands", t.pos);
        }
        return mk_const(t.id, t.pos);
      case Tk::kLParen: {
        if (peek().kind == Tk::kConst && is_operator(peek().id) &&
            (peek(1).kind == Tk::kRParen || peek(1).kind == Tk::kColon)) {
          const Token op = next();
          SurfacePtr c = mk_const(op.id, op.pos);
          if (at(Tk::kColon)) {
            next();
            SurfaceTerm s;
            s.kind = SurfaceTerm::Kind::kAscribe;
            s.type = parse_type_expr();
            s.left = c;
            s.pos = op.pos;
            c = mk(std::move(s));
          }
          expect(Tk::kRParen, "')'");
          return c;
        }
        SurfacePtr inner = parse_ascribed();
        expect(Tk::kRParen, "')'");
        return inner;
      }
      case Tk::kLBrace:
        return parse_set(t.pos);
      default:
        parse_error("unexpected token in term", t.pos);
    }
  }

  SurfacePtr parse_set(SourcePos pos) {
    if (at(Tk::kRBrace)) parse_error("empty braces; write ∅", pos);
    SurfacePtr first = parse_ascribed();
    if (at(Tk::kRBrace)) {
      next();
      return mk_app(mk_const(ConstId::kSingleton, pos), first);
    }
    if (at(Tk::kComma)) {
      std::vector<SurfacePtr> elems{first};
      while (at(Tk::kComma)) {
        next();
        elems.push_back(parse_ascribed());
      }
      expect(Tk::kRBrace, "'}'");
      SurfacePtr acc = mk_app(mk_const(ConstId::kSingleton, pos), elems.back());
      for (auto it = elems.rbegin() + 1; it != elems.rend(); ++it) {
        acc = binary(ConstId::kUnion, pos,
                     mk_app(mk_const(ConstId::kSingleton, pos), *it), acc);
      }
      return acc;
    }
    expect(Tk::kBar, "'}', ',' or '|' in set notation");
    // {x ∈ X | P}
    if (first->kind == SurfaceTerm::Kind::kApp &&
        first->left->kind == SurfaceTerm::Kind::kApp &&
        first->left->left->kind == SurfaceTerm::Kind::kConst &&
        first->left->left->id == ConstId::kElem &&
        first->left->right->kind == SurfaceTerm::Kind::kName &&
        !first->left->right->index) {
      const SurfaceTerm& var = *first->left->right;
      SurfacePtr pred = parse_ascribed();
      expect(Tk::kRBrace, "'}'");
      return binary(ConstId::kSeparation, pos, first->right,
                    mk_lam(var.name, Type::set(), pred, var.pos));
    }
    // {f x | x ∈ X}
    const Token var = expect(Tk::kIdent, "bound variable in set comprehension");
    if (var.index) parse_error("binder names take no index", var.pos);
    if (!at_const(ConstId::kElem)) parse_error("expected '∈'", peek().pos);
    next();
    SurfacePtr domain = parse_ascribed();
    expect(Tk::kRBrace, "'}'");
    return binary(ConstId::kReplacement, pos, domain,
                  mk_lam(var.text, Type::set(), first, var.pos));
  }

  std::vector<Token> toks_;
  std::size_t i_;
};

class Elaborator {
 public:
  explicit Elaborator(const NameEnvironment& env) : env_(env) {}

  TypedTerm run(const SurfaceTerm& s) {
    switch (s.kind) {
      case SurfaceTerm::Kind::kName:
        return resolve(s);
      case SurfaceTerm::Kind::kRawIndex: {
        const std::uint32_t i = *s.index;
        if (i < binders_.size()) {
          return {Term::var(i), binders_[binders_.size() - 1 - i].second};
        }
        if (i - binders_.size() < env_.size()) {
          return {Term::var(i), env_.type_at(i - binders_.size())};
        }
        throw Error(ErrorKind::kNameError,
                    "raw index #" + std::to_string(i) + " is out of scope", s.pos);
      }
      case SurfaceTerm::Kind::kConst:
        if (const_info(s.id).polymorphic) {
          throw Error(ErrorKind::kTypeError,
                      "cannot infer the type of " +
                          std::string(const_info(s.id).glyph) +
                          "; add a type ascription",
                      s.pos);
        }
        return {Term::constant(s.id), const_type(s.id)};
      case SurfaceTerm::Kind::kLam: {
        binders_.emplace_back(s.name, *s.type);
        TypedTerm body = run(*s.left);
        binders_.pop_back();
        return {Term::lam(*s.type, std::move(body.term), s.name),
                Type::fun(*s.type, std::move(body.type))};
      }
      case SurfaceTerm::Kind::kAscribe: {
        const SurfaceTerm& inner = *s.left;
        if (inner.kind == SurfaceTerm::Kind::kConst &&
            const_info(inner.id).polymorphic) {
          if (!is_valid_instance(inner.id, *s.type)) {
            throw Error(ErrorKind::kTypeError,
                        "not an instance type of " +
                            std::string(const_info(inner.id).glyph),
                        s.pos);
          }
          return {Term::constant(inner.id, *s.type), *s.type};
        }
        TypedTerm t = run(inner);
        if (t.type != *s.type) {
          throw Error(ErrorKind::kTypeError, "type ascription does not hold", s.pos);
        }
        return t;
      }
      case SurfaceTerm::Kind::kApp:
        return application(s);
    }
    throw Error(ErrorKind::kInternalError, "corrupt surface term");
  }

 private:
  TypedTerm resolve(const SurfaceTerm& s) {
    const std::uint32_t wanted = s.index.value_or(0);
    std::uint32_t seen = 0;
    for (std::size_t j = binders_.size(); j-- > 0;) {
      if (binders_[j].first == s.name && seen++ == wanted) {
        return {Term::var(static_cast<std::uint32_t>(binders_.size() - 1 - j)),
                binders_[j].second};
      }
    }
    for (std::size_t i = 0; i < env_.size(); ++i) {
      if (env_.name_at(i) == s.name && seen++ == wanted) {
        return {Term::var(static_cast<std::uint32_t>(binders_.size() + i)),
                env_.type_at(i)};
      }
    }
    throw Error(ErrorKind::kNameError, "unknown identifier '" + s.name + "'", s.pos);
  }

  TypedTerm application(const SurfaceTerm& s) {
    std::deque<const SurfaceTerm*> args;
    const SurfaceTerm* head = &s;
    while (head->kind == SurfaceTerm::Kind::kApp) {
      args.push_front(head->right.get());
      head = head->left.get();
    }
    TypedTerm f{Term::constant(ConstId::kTrue), Type::prop()};
    std::size_t next_arg = 0;
    if (head->kind == SurfaceTerm::Kind::kConst && const_info(head->id).polymorphic) {
      TypedTerm first = run(*args[0]);
      Type param = first.type;
      if (head->id != ConstId::kEq) {
        if (!first.type.is_fun() || !first.type.codomain().is_prop()) {
          throw Error(ErrorKind::kTypeError,
                      "binder body must be a predicate", args[0]->pos);
        }
        param = first.type.domain();
      }
      const Type inst = instance_type(head->id, param);
      f = {Term::app(Term::constant(head->id, inst), std::move(first.term)),
           inst.codomain()};
      next_arg = 1;
    } else {
      f = run(*head);
    }
    for (; next_arg < args.size(); ++next_arg) {
      TypedTerm a = run(*args[next_arg]);
      if (!f.type.is_fun()) {
        throw Error(ErrorKind::kTypeError, "application of a non-function",
                    args[next_arg]->pos);
      }
      if (f.type.domain() != a.type) {
        throw Error(ErrorKind::kTypeError,
                    "argument has type " + print_type(a.type) + " but " +
                        print_type(f.type.domain()) + " is expected",
                    args[next_arg]->pos);
      }
      Type result = f.type.codomain();
      f = {Term::app(std::move(f.term), std::move(a.term)), std::move(result)};
    }
    return f;
  }

  const NameEnvironment& env_;
  std::vector<std::pair<std::string, Type>> binders_;
};

// Precedence levels used by the printer; they mirror the parser above.
enum Level : int {
  kTop = 0,
  kBinder = 1,
  kImp = 2,
  kOr = 3,
  kAnd = 4,
  kNot = 5,
  kCmp = 6,
  kUnion = 7,
  kInter = 8,
  kApp = 9,
  kAtom = 10,
};

bool is_reserved_word(std::string_view w) {
  return w == "set" || w == "prop" || w == "true" || w == "false";
}

class Printer {
 public:
  Printer(const NameEnvironment& env, PrintMode mode) : env_(env), mode_(mode) {}

  std::string print(const Term& t, int ctx) {
    std::vector<Term> args;
    Term head = t;
    while (head.is_app()) {
      args.push_back(head.arg());
      head = head.fun();
    }
    std::reverse(args.begin(), args.end());

    if (head.is_const()) {
      if (auto special = print_special(head, args, ctx)) return *special;
    }
    if (args.empty()) {
      if (t.is_lam()) return wrap(binder(lambda_word(), t), kBinder, ctx);
      return print_head(t, 0);
    }
    std::string out = head.is_lam() ? "(" + binder(lambda_word(), head) + ")"
                                    : print_head(head, args.size());
    for (const Term& a : args) out += " " + print(a, kAtom);
    return wrap(out, kApp, ctx);
  }

 private:
  static std::string wrap(std::string s, int level, int ctx) {
    return level < ctx ? "(" + s + ")" : s;
  }

  bool ascii() const { return mode_ == PrintMode::kAscii; }

  std::string lambda_word() const { return ascii() ? "\\" : "λ"; }

  std::string glyph(ConstId id) const {
    const ConstInfo& info = const_info(id);
    return std::string(ascii() ? info.ascii : info.glyph);
  }

  std::string print_head(const Term& head, std::size_t nargs) {
    if (head.is_var()) return var_name(head.index());
    if (head.is_const()) {
      const ConstId id = head.const_id();
      if (!is_operator(id)) return glyph(id);
      if (const_info(id).polymorphic && nargs == 0) {
        return "(" + glyph(id) + " : " + print_type(*head.instance(), mode_) + ")";
      }
      return "(" + glyph(id) + ")";
    }
    return print(head, kAtom);
  }

  std::optional<std::string> print_special(const Term& head,
                                           const std::vector<Term>& args, int ctx) {
    const ConstId id = head.const_id();
    const std::size_t n = args.size();
    if (is_quantifier(id) && n == 1 && args[0].is_lam()) {
      return wrap(binder(glyph(id), args[0]), kBinder, ctx);
    }
    if (id == ConstId::kNot && n == 1) {
      const std::string op = ascii() ? "_not " : "¬";
      return wrap(op + print(args[0], kNot), kNot, ctx);
    }
    if (id == ConstId::kSingleton && n == 1) {
      return "{" + print(args[0], kTop) + "}";
    }
    if (id == ConstId::kUnion && n == 2 && is_enumeration(args[0], args[1])) {
      std::string out = "{";
      Term rest = Term::app(Term::app(head, args[0]), args[1]);
      bool first = true;
      while (true) {
        if (!first) out += ", ";
        first = false;
        if (rest.is_app() && rest.fun().is_const(ConstId::kSingleton)) {
          out += print(rest.arg(), kTop);
          break;
        }
        out += print(rest.fun().arg().arg(), kTop);
        rest = rest.arg();
      }
      return out + "}";
    }
    if ((id == ConstId::kSeparation || id == ConstId::kReplacement) && n == 2 &&
        args[1].is_lam() && args[1].domain().is_set()) {
      const Term& fn = args[1];
      const std::string domain = print(args[0], kTop);
      const std::string name = pick_name(fn);
      binders_.push_back(name);
      const std::string body = print(fn.body(), kTop);
      binders_.pop_back();
      const std::string elem = " " + glyph(ConstId::kElem) + " ";
      if (id == ConstId::kSeparation) {
        return "{" + name + elem + domain + " | " + body + "}";
      }
      return "{" + body + " | " + name + elem + domain + "}";
    }
    if (is_infix(id) && n == 2) {
      int level = kCmp, left = kUnion, right = kUnion;
      switch (id) {
        case ConstId::kImplies: level = kImp; left = kOr; right = kImp; break;
        case ConstId::kOr: level = kOr; left = kAnd; right = kOr; break;
        case ConstId::kAnd: level = kAnd; left = kNot; right = kAnd; break;
        case ConstId::kUnion: level = kUnion; left = kUnion; right = kInter; break;
        case ConstId::kIntersect: level = kInter; left = kInter; right = kApp; break;
        default: break;
      }
      return wrap(print(args[0], left) + " " + glyph(id) + " " + print(args[1], right),
                  level, ctx);
    }
    return std::nullopt;
  }

  static bool is_singleton(const Term& t) {
    return t.is_app() && t.fun().is_const(ConstId::kSingleton);
  }

  static bool is_enumeration(const Term& first, const Term& rest) {
    if (!is_singleton(first)) return false;
    if (is_singleton(rest)) return true;
    return rest.is_app() && rest.fun().is_app() &&
           rest.fun().fun().is_const(ConstId::kUnion) &&
           is_enumeration(rest.fun().arg(), rest.arg());
  }

  std::string binder(const std::string& word, const Term& lam) {
    const std::string name = pick_name(lam);
    std::string out = word + (word == "\\" ? "" : " ") + name;
    if (!lam.domain().is_set()) out += " : " + print_type(lam.domain(), mode_);
    binders_.push_back(name);
    out += ". " + print(lam.body(), kBinder);
    binders_.pop_back();
    return out;
  }

  // Base name of the binding that free index `i` (relative to the current
  // binder stack) refers to.
  std::string base_name(std::size_t i) const {
    if (i < binders_.size()) return binders_[binders_.size() - 1 - i];
    const std::size_t j = i - binders_.size();
    return j < env_.size() ? env_.name_at(j) : std::string();
  }

  void collect_free(const Term& t, std::uint32_t depth,
                    std::unordered_set<std::string>& out) const {
    if (t.free_bound() <= depth) return;
    switch (t.kind()) {
      case Term::Kind::kVar:
        out.insert(base_name(t.index() - depth));
        break;
      case Term::Kind::kLam:
        collect_free(t.body(), depth + 1, out);
        break;
      case Term::Kind::kApp:
        collect_free(t.fun(), depth, out);
        collect_free(t.arg(), depth, out);
        break;
      case Term::Kind::kConst:
        break;
    }
  }

  std::string pick_name(const Term& lam) const {
    std::string base = lam.hint();
    if (!is_identifier(base)) {
      base = lam.domain().is_set() ? "x" : lam.domain().is_prop() ? "p" : "f";
    }
    std::unordered_set<std::string> used;
    // Index 0 of the body is the binder itself.
    collect_free(lam.body(), 1, used);
    std::string candidate = base;
    for (int n = 1; used.count(candidate) || is_reserved_word(candidate); ++n) {
      candidate = base + std::to_string(n);
    }
    return candidate;
  }

  std::string var_name(std::uint32_t i) const {
    const std::string name = base_name(i);
    if (name.empty() || !is_identifier(name)) return "#" + std::to_string(i);
    std::uint32_t k = 0;
    const std::size_t limit = std::min<std::size_t>(i, binders_.size());
    for (std::size_t m = 0; m < limit; ++m) {
      if (binders_[binders_.size() - 1 - m] == name) ++k;
    }
    if (i >= binders_.size()) {
      const std::size_t j = i - binders_.size();
      for (std::size_t l = 0; l < j; ++l) {
        if (env_.name_at(l) == name) ++k;
      }
    }
    return k == 0 ? name : name + "#" + std::to_string(k);
  }

  const NameEnvironment& env_;
  PrintMode mode_;
  std::vector<std::string> binders_;
};

}  // namespace

ConstantList& ConstantList::add(std::string name, Type type) {
  entries_.emplace_back(std::move(name), std::move(type));
  return *this;
}

const Type& ConstantList::type_at(std::size_t i) const {
  return entries_.at(entries_.size() - 1 - i).second;
}

const std::string& ConstantList::name_at(std::size_t i) const {
  return entries_.at(entries_.size() - 1 - i).first;
}

Type parse_type(std::string_view src) {
  return Parser(Lexer(src).run()).parse_whole_type();
}

SurfacePtr parse_surface_term(std::string_view src) {
  return Parser(Lexer(src).run()).parse_whole_term();
}

TypedTerm elaborate(const SurfaceTerm& surface, const NameEnvironment& env) {
  return Elaborator(env).run(surface);
}

TypedTerm parse_typed_term(std::string_view src, const NameEnvironment& env) {
  return elaborate(*parse_surface_term(src), env);
}

Term parse_term(std::string_view src, const NameEnvironment& env) {
  return parse_typed_term(src, env).term;
}

std::string print_type(const Type& type, PrintMode mode) {
  switch (type.kind()) {
    case Type::Kind::kSet: return "set";
    case Type::Kind::kProp: return "prop";
    case Type::Kind::kFun: {
      std::string lhs = print_type(type.domain(), mode);
      if (type.domain().is_fun()) lhs = "(" + lhs + ")";
      return lhs + (mode == PrintMode::kAscii ? " -> " : " → ") +
             print_type(type.codomain(), mode);
    }
  }
  return "?";
}

std::string print_term(const Term& term, const NameEnvironment& env, PrintMode mode) {
  return Printer(env, mode).print(term, kTop);
}

FixSpec parse_fix_spec(std::string_view src, const NameEnvironment& env) {
  std::vector<Token> toks = Lexer(src).run();
  if (toks[0].kind != Tk::kIdent || toks[0].index) {
    parse_error("expected the name of the new constant", toks[0].pos);
  }
  FixSpec spec;
  spec.name = toks[0].text;
  if (toks[1].kind == Tk::kColon) {
    spec.type = Parser(std::move(toks), 2).parse_whole_type();
    return spec;
  }
  if (toks[1].kind == Tk::kConst && toks[1].id == ConstId::kElem) {
    const SourcePos pos = toks[1].pos;
    TypedTerm domain = elaborate(*Parser(std::move(toks), 2).parse_whole_term(), env);
    if (!domain.type.is_set()) {
      throw Error(ErrorKind::kTypeError, "the domain of a fix must be a set", pos);
    }
    spec.domain = std::move(domain.term);
    return spec;
  }
  parse_error("expected 'x : type' or 'x ∈ D'", toks[1].pos);
}

DefineSpec parse_define_spec(std::string_view src, const NameEnvironment& env) {
  std::vector<Token> toks = Lexer(src).run();
  if (toks[0].kind != Tk::kIdent || toks[0].index) {
    parse_error("expected the name of the defined constant", toks[0].pos);
  }
  if (toks[1].kind != Tk::kConst || toks[1].id != ConstId::kEq) {
    parse_error("expected 'x = d'", toks[1].pos);
  }
  std::string name = toks[0].text;
  TypedTerm body = elaborate(*Parser(std::move(toks), 2).parse_whole_term(), env);
  return DefineSpec{std::move(name), std::move(body.term), std::move(body.type)};
}

std::vector<std::string> parse_name_list(std::string_view src) {
  std::vector<std::string> names;
  for (const Token& t : Lexer(src).run()) {
    if (t.kind == Tk::kEnd) break;
    if (t.kind == Tk::kComma) continue;
    if (t.kind != Tk::kIdent || t.index) parse_error("expected a name", t.pos);
    names.push_back(t.text);
  }
  return names;
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  std::size_t pos = 0;
  if (!utf8::is_letter(utf8::decode(text, pos))) return false;
  while (pos < text.size()) {
    if (!utf8::is_ident_continue(utf8::decode(text, pos))) return false;
  }
  return !is_reserved_word(text);
}

}  // namespace peerhol
