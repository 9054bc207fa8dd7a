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

#include <array>
#include <string>
#include <vector>

#include "peerhol/script.hpp"
#include "utf8.hpp"

namespace peerhol::script {
namespace {

constexpr std::array<std::string_view, 29> kKeywords = {
    "fix",  "assume", "define", "obtain", "have",  "by",    "let",  "unbind",
    "val",  "def",    "if",     "then",   "else",  "end",   "for",  "in",
    "do",   "while",  "match",  "case",   "with",  "begin", "root", "this",
    "true", "false",  "and",    "or",     "not"};

enum class Tk { kIdent, kKeyword, kInt, kString, kTerm, kSym, kEof };

struct Token {
  Tk kind = Tk::kEof;
  std::string text;
  SourcePos pos;
  bool newline_before = false;
  std::size_t begin = 0;
  std::size_t end = 0;
};

[[noreturn]] void parse_error(const std::string& msg, SourcePos pos) {
  throw Error(ErrorKind::kParseError, msg, pos);
}

struct Unterminated {};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    bool newline = true;
    for (;;) {
      newline = skip_space_and_comments() || newline;
      Token t;
      t.pos = pos_;
      t.begin = at_;
      t.newline_before = newline;
      newline = false;
      if (at_ >= src_.size()) {
        t.kind = Tk::kEof;
        t.end = at_;
        out.push_back(std::move(t));
        return out;
      }
      lex_one(t);
      t.end = at_;
      out.push_back(std::move(t));
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

  // Returns true if a line break was skipped.
  bool skip_space_and_comments() {
    bool newline = false;
    while (at_ < src_.size()) {
      const char32_t cp = peek_cp();
      if (cp == '\n') {
        newline = true;
        take();
      } else if (utf8::is_space(cp)) {
        take();
      } else if (cp == '#') {
        while (at_ < src_.size() && peek_cp() != '\n') take();
      } else {
        break;
      }
    }
    return newline;
  }

  void lex_one(Token& t) {
    const char32_t cp = peek_cp();
    if (utf8::is_letter(cp)) {
      while (at_ < src_.size() && utf8::is_ident_continue(peek_cp())) {
        utf8::append(t.text, take());
      }
      t.kind = is_keyword(t.text) ? Tk::kKeyword : Tk::kIdent;
      return;
    }
    if (cp >= '0' && cp <= '9') {
      while (at_ < src_.size() && peek_cp() >= '0' && peek_cp() <= '9') {
        utf8::append(t.text, take());
      }
      if (utf8::is_letter(peek_cp())) parse_error("malformed number", t.pos);
      t.kind = Tk::kInt;
      return;
    }
    if (cp == '"') {
      take();
      t.kind = Tk::kString;
      for (;;) {
        if (at_ >= src_.size() || peek_cp() == '\n') throw Unterminated{};
        const char32_t c = take();
        if (c == '"') return;
        if (c == '\\') {
          if (at_ >= src_.size()) throw Unterminated{};
          const char32_t e = take();
          switch (e) {
            case 'n': t.text += '\n'; break;
            case 't': t.text += '\t'; break;
            case '"': t.text += '"'; break;
            case '\\': t.text += '\\'; break;
            default: parse_error("unknown escape in string", pos_);
          }
          continue;
        }
        utf8::append(t.text, c);
      }
    }
    if (cp == '\'') {
      take();
      t.kind = Tk::kTerm;
      for (;;) {
        if (at_ >= src_.size() || peek_cp() == '\n') throw Unterminated{};
        const char32_t c = take();
        if (c == '\'') return;
        utf8::append(t.text, c);
      }
    }
    t.kind = Tk::kSym;
    static constexpr std::array<std::string_view, 7> kTwo = {
        "==", "!=", "<=", ">=", "->", "=>", "++"};
    const std::string_view rest = src_.substr(at_);
    for (std::string_view two : kTwo) {
      if (rest.starts_with(two)) {
        take();
        take();
        t.text = std::string(two);
        return;
      }
    }
    static constexpr std::string_view kOne = "()[]{},;:.@=<>+-*/%_";
    if (cp < 0x80 && kOne.find(static_cast<char>(cp)) != std::string_view::npos) {
      take();
      t.text = std::string(1, static_cast<char>(cp));
      return;
    }
    std::string shown;
    utf8::append(shown, cp);
    parse_error("unexpected character '" + shown + "'", t.pos);
  }

  std::string_view src_;
  std::size_t at_ = 0;
  SourcePos pos_;
};

ExprPtr mk(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

class Parser {
 public:
  Parser(std::string_view src, std::vector<Token> toks)
      : src_(src), toks_(std::move(toks)) {}

  Block program() {
    Block b = block();
    if (!at(Tk::kEof)) parse_error("unexpected '" + peek().text + "'", peek().pos);
    return b;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(i_ + k, toks_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    last_end_ = t.end;
    if (i_ < toks_.size() - 1) ++i_;
    return t;
  }
  bool at(Tk kind) const { return peek().kind == kind; }
  bool at_kw(std::string_view kw, std::size_t k = 0) const {
    return peek(k).kind == Tk::kKeyword && peek(k).text == kw;
  }
  bool at_sym(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tk::kSym && peek(k).text == s;
  }
  void expect_kw(std::string_view kw) {
    if (!at_kw(kw)) parse_error("expected '" + std::string(kw) + "'", peek().pos);
    next();
  }
  void expect_sym(std::string_view s) {
    if (!at_sym(s)) parse_error("expected '" + std::string(s) + "'", peek().pos);
    next();
  }
  std::string expect_ident(const char* what) {
    if (!at(Tk::kIdent)) parse_error(std::string("expected ") + what, peek().pos);
    return next().text;
  }

  // Logins and chronicle names may coincide with keywords, e.g. @root.
  std::string expect_name(const char* what) {
    if (!at(Tk::kIdent) && !at(Tk::kKeyword)) parse_error(std::string("expected ") + what, peek().pos);
    return next().text;
  }

  // An expression continues onto the next token only if that token is on
  // the same line, or we are inside brackets.
  bool continues() const { return nest_ > 0 || !peek().newline_before; }

  bool at_block_end() const {
    return at(Tk::kEof) || at_kw("end") || at_kw("else") || at_kw("case");
  }

  Block block() {
    const int saved = nest_;
    nest_ = 0;
    Block b;
    b.pos = peek().pos;
    for (;;) {
      while (at_sym(";")) next();
      if (at_block_end()) break;
      b.stmts.push_back(statement());
      if (!at_block_end() && !at_sym(";") && !peek().newline_before) {
        parse_error("expected a new line or ';' between statements", peek().pos);
      }
    }
    nest_ = saved;
    return b;
  }

  std::optional<std::string> label() {
    if (at(Tk::kIdent) && at_sym("=", 1)) {
      std::string name = next().text;
      next();
      return name;
    }
    return std::nullopt;
  }

  StmtPtr statement() {
    Stmt s;
    s.pos = peek().pos;
    if (peek().kind == Tk::kKeyword) {
      const std::string kw = peek().text;
      if (kw == "fix" || kw == "assume" || kw == "define") {
        next();
        s.kind = kw == "fix"      ? Stmt::Kind::kFix
                 : kw == "assume" ? Stmt::Kind::kAssume
                                  : Stmt::Kind::kDefine;
        s.label = label();
        s.expr = expr();
        return std::make_shared<const Stmt>(std::move(s));
      }
      if (kw == "obtain" || kw == "have") {
        next();
        s.kind = kw == "obtain" ? Stmt::Kind::kObtain : Stmt::Kind::kHave;
        s.label = label();
        if (!(kw == "obtain" && at_kw("by"))) s.expr = expr();
        expect_kw("by");
        s.by = expr();
        return std::make_shared<const Stmt>(std::move(s));
      }
      if (kw == "let") {
        next();
        s.kind = Stmt::Kind::kLet;
        s.label = expect_ident("a name after 'let'");
        expect_sym("=");
        s.expr = expr();
        return std::make_shared<const Stmt>(std::move(s));
      }
      if (kw == "unbind") {
        next();
        s.kind = Stmt::Kind::kUnbind;
        s.label = expect_ident("a name after 'unbind'");
        return std::make_shared<const Stmt>(std::move(s));
      }
      if (kw == "val") {
        next();
        s.kind = Stmt::Kind::kVal;
        s.pattern = pattern();
        expect_sym("=");
        s.expr = expr();
        return std::make_shared<const Stmt>(std::move(s));
      }
      if (kw == "def") {
        s.kind = Stmt::Kind::kDef;
        const std::size_t begin = peek().begin;
        while (at_kw("def")) {
          FunDef d;
          d.pos = next().pos;
          d.name = expect_ident("a function name");
          while (at(Tk::kIdent)) d.params.push_back(next().text);
          if (d.params.empty()) parse_error("a def needs at least one parameter", d.pos);
          expect_sym("=");
          d.body = expr();
          s.defs.push_back(std::move(d));
          while (at_sym(";")) next();
        }
        s.source = std::string(src_.substr(begin, last_end_ - begin));
        return std::make_shared<const Stmt>(std::move(s));
      }
    }
    s.kind = Stmt::Kind::kExpr;
    s.expr = expr();
    return std::make_shared<const Stmt>(std::move(s));
  }

  Pattern pattern() {
    Pattern p;
    p.pos = peek().pos;
    if (at_sym("_")) {
      next();
      return p;
    }
    if (at(Tk::kIdent)) {
      p.kind = Pattern::Kind::kName;
      p.name = next().text;
      return p;
    }
    if (at(Tk::kInt) || at(Tk::kString) || at_kw("true") || at_kw("false") ||
        (at_sym("-") && peek(1).kind == Tk::kInt)) {
      p.kind = Pattern::Kind::kLiteral;
      p.literal = at_sym("-") ? unary() : atom();
      return p;
    }
    if (at_sym("(")) {
      next();
      std::vector<Pattern> elems{pattern()};
      while (at_sym(",")) {
        next();
        elems.push_back(pattern());
      }
      expect_sym(")");
      if (elems.size() == 1) return elems[0];
      p.kind = Pattern::Kind::kTuple;
      p.elems = std::move(elems);
      return p;
    }
    parse_error("expected a pattern", p.pos);
  }

  ExprPtr binary(std::string op, SourcePos pos, ExprPtr a, ExprPtr b) {
    Expr e;
    e.kind = Expr::Kind::kBinary;
    e.text = std::move(op);
    e.pos = pos;
    e.items = {std::move(a), std::move(b)};
    return mk(std::move(e));
  }

  ExprPtr expr() { return or_expr(); }

  ExprPtr or_expr() {
    ExprPtr lhs = and_expr();
    while (at_kw("or") && continues()) {
      const SourcePos pos = next().pos;
      lhs = binary("or", pos, lhs, and_expr());
    }
    return lhs;
  }

  ExprPtr and_expr() {
    ExprPtr lhs = not_expr();
    while (at_kw("and") && continues()) {
      const SourcePos pos = next().pos;
      lhs = binary("and", pos, lhs, not_expr());
    }
    return lhs;
  }

  ExprPtr not_expr() {
    if (at_kw("not")) {
      Expr e;
      e.kind = Expr::Kind::kUnary;
      e.pos = next().pos;
      e.text = "not";
      e.items = {not_expr()};
      return mk(std::move(e));
    }
    return cmp_expr();
  }

  bool at_cmp() const {
    if (peek().kind != Tk::kSym) return false;
    const std::string& t = peek().text;
    return t == "==" || t == "!=" || t == "<" || t == "<=" || t == ">" || t == ">=";
  }

  ExprPtr cmp_expr() {
    ExprPtr lhs = add_expr();
    if (at_cmp() && continues()) {
      const Token op = next();
      lhs = binary(op.text, op.pos, lhs, add_expr());
      if (at_cmp() && continues()) {
        parse_error("comparisons do not chain", peek().pos);
      }
    }
    return lhs;
  }

  ExprPtr add_expr() {
    ExprPtr lhs = mul_expr();
    while ((at_sym("+") || at_sym("-") || at_sym("++")) && continues()) {
      const Token op = next();
      lhs = binary(op.text, op.pos, lhs, mul_expr());
    }
    return lhs;
  }

  ExprPtr mul_expr() {
    ExprPtr lhs = unary();
    while ((at_sym("*") || at_sym("/") || at_sym("%")) && continues()) {
      const Token op = next();
      lhs = binary(op.text, op.pos, lhs, unary());
    }
    return lhs;
  }

  ExprPtr unary() {
    if (at_sym("-")) {
      Expr e;
      e.kind = Expr::Kind::kUnary;
      e.pos = next().pos;
      e.text = "-";
      e.items = {unary()};
      return mk(std::move(e));
    }
    return application();
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case Tk::kIdent:
      case Tk::kInt:
      case Tk::kString:
      case Tk::kTerm:
        return true;
      case Tk::kKeyword: {
        const std::string& k = peek().text;
        return k == "true" || k == "false" || k == "root" || k == "this" ||
               k == "begin" || k == "if" || k == "for" || k == "while" ||
               k == "match" || k == "with";
      }
      case Tk::kSym:
        return at_sym("(") || at_sym("[") || at_sym("{") || at_sym("@");
      default:
        return false;
    }
  }

  ExprPtr application() {
    ExprPtr f = postfix();
    while (starts_atom() && continues()) {
      Expr e;
      e.kind = Expr::Kind::kApp;
      e.pos = f->pos;
      e.items = {f, postfix()};
      f = mk(std::move(e));
    }
    return f;
  }

  ExprPtr postfix() {
    ExprPtr e = atom();
    while (at_sym(".") && continues()) {
      next();
      Expr f;
      f.kind = Expr::Kind::kField;
      f.pos = peek().pos;
      if (!at(Tk::kIdent) && !at(Tk::kKeyword)) {
        parse_error("expected a field name after '.'", peek().pos);
      }
      f.text = next().text;
      f.items = {std::move(e)};
      e = mk(std::move(f));
    }
    return e;
  }

  std::vector<ExprPtr> comma_list(std::string_view close) {
    std::vector<ExprPtr> items;
    if (at_sym(close)) return items;
    items.push_back(expr());
    while (at_sym(",")) {
      next();
      items.push_back(expr());
    }
    return items;
  }

  ExprPtr atom() {
    if (!starts_atom()) {
      const Token& t = peek();
      if (t.kind == Tk::kEof) parse_error("unexpected end of script", t.pos);
      parse_error("unexpected '" + t.text + "'", t.pos);
    }
    const Token t = next();
    Expr e;
    e.pos = t.pos;
    switch (t.kind) {
      case Tk::kIdent:
        e.kind = Expr::Kind::kName;
        e.text = t.text;
        return mk(std::move(e));
      case Tk::kInt:
        e.kind = Expr::Kind::kInt;
        e.text = t.text;
        return mk(std::move(e));
      case Tk::kString:
        e.kind = Expr::Kind::kString;
        e.text = t.text;
        return mk(std::move(e));
      case Tk::kTerm:
        e.kind = Expr::Kind::kTermLit;
        e.text = t.text;
        // position of the first character inside the quotes
        e.pos.column += 1;
        return mk(std::move(e));
      default:
        break;
    }
    if (t.kind == Tk::kKeyword) {
      const std::string& k = t.text;
      if (k == "true" || k == "false") {
        e.kind = Expr::Kind::kBool;
        e.flag = k == "true";
      } else if (k == "root") {
        e.kind = Expr::Kind::kRoot;
      } else if (k == "this") {
        e.kind = Expr::Kind::kThis;
      } else if (k == "begin") {
        e.kind = Expr::Kind::kBlock;
        e.blocks.push_back(block());
        expect_kw("end");
      } else if (k == "if") {
        e.kind = Expr::Kind::kIf;
        with_nest0([&] { e.items.push_back(expr()); });
        expect_kw("then");
        e.blocks.push_back(block());
        if (at_kw("else")) {
          next();
          e.blocks.push_back(block());
        }
        expect_kw("end");
      } else if (k == "for") {
        e.kind = Expr::Kind::kFor;
        e.pattern = pattern();
        expect_kw("in");
        with_nest0([&] { e.items.push_back(expr()); });
        expect_kw("do");
        e.blocks.push_back(block());
        expect_kw("end");
      } else if (k == "while" || k == "with") {
        e.kind = k == "while" ? Expr::Kind::kWhile : Expr::Kind::kWith;
        with_nest0([&] { e.items.push_back(expr()); });
        expect_kw("do");
        e.blocks.push_back(block());
        expect_kw("end");
      } else if (k == "match") {
        e.kind = Expr::Kind::kMatch;
        with_nest0([&] { e.items.push_back(expr()); });
        if (!at_kw("case")) parse_error("expected 'case'", peek().pos);
        while (at_kw("case")) {
          next();
          MatchCase c;
          c.pattern = pattern();
          expect_sym("=>");
          c.body = block();
          e.cases.push_back(std::move(c));
        }
        expect_kw("end");
      }
      return mk(std::move(e));
    }
    // symbols
    if (t.text == "(") {
      ++nest_;
      if (at_sym(")")) parse_error("empty parentheses", peek().pos);
      std::vector<ExprPtr> items = comma_list(")");
      expect_sym(")");
      --nest_;
      if (items.size() == 1) return items[0];
      e.kind = Expr::Kind::kTuple;
      e.items = std::move(items);
      return mk(std::move(e));
    }
    if (t.text == "[") {
      ++nest_;
      e.kind = Expr::Kind::kList;
      e.items = comma_list("]");
      expect_sym("]");
      --nest_;
      return mk(std::move(e));
    }
    if (t.text == "{") {
      ++nest_;
      e.kind = Expr::Kind::kSet;
      if (at_sym("->")) {
        next();
        e.kind = Expr::Kind::kMap;
      } else if (!at_sym("}")) {
        ExprPtr first = expr();
        if (at_sym("->")) {
          e.kind = Expr::Kind::kMap;
          next();
          e.items = {first, expr()};
          while (at_sym(",")) {
            next();
            e.items.push_back(expr());
            expect_sym("->");
            e.items.push_back(expr());
          }
        } else {
          e.items = {first};
          while (at_sym(",")) {
            next();
            e.items.push_back(expr());
          }
        }
      }
      expect_sym("}");
      --nest_;
      return mk(std::move(e));
    }
    // '@'
    e.kind = Expr::Kind::kRef;
    if (at(Tk::kString)) {
      e.ref.by_key = true;
      e.ref.parts.push_back(next().text);
      return mk(std::move(e));
    }
    e.ref.parts.push_back(expect_name("a chronicle name after '@'"));
    if (at_sym(":") && !peek().newline_before) {
      next();
      e.ref.parts.push_back(expect_name("a chronicle name"));
      if (at_sym(":") && !peek().newline_before) {
        next();
        if (!at(Tk::kInt)) parse_error("expected a version number", peek().pos);
        e.ref.parts.push_back(next().text);
      }
    }
    return mk(std::move(e));
  }

  template <typename F>
  void with_nest0(F f) {
    const int saved = nest_;
    nest_ = 0;
    f();
    nest_ = saved;
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
  std::size_t last_end_ = 0;
  int nest_ = 0;
};

}  // namespace

bool is_keyword(std::string_view word) {
  for (std::string_view k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

Block parse_script(std::string_view src) {
  std::vector<Token> toks;
  try {
    toks = Lexer(src).run();
  } catch (const Unterminated&) {
    // Re-scan to report the literal's position.
    SourcePos pos;
    SourcePos open;
    char quote = 0;
    std::size_t at = 0;
    while (at < src.size()) {
      const char32_t cp = utf8::decode(src, at);
      if (quote == 0 && cp == '#') {
        while (at < src.size() && src[at] != '\n') ++at;
        continue;
      }
      if (cp == '\n') {
        if (quote != 0) break;
        ++pos.line;
        pos.column = 1;
        continue;
      }
      if (quote != 0 && cp == '\\' && quote == '"' && at < src.size()) {
        utf8::decode(src, at);
        pos.column += 2;
        continue;
      }
      if (quote == 0 && (cp == '"' || cp == '\'')) {
        quote = static_cast<char>(cp);
        open = pos;
      } else if (quote != 0 && cp == static_cast<char32_t>(quote)) {
        quote = 0;
      }
      ++pos.column;
    }
    parse_error("unterminated literal", open);
  }
  return Parser(src, std::move(toks)).program();
}

bool needs_more_input(std::string_view src) {
  std::vector<Token> toks;
  try {
    toks = Lexer(src).run();
  } catch (const Unterminated&) {
    return true;
  } catch (const Error&) {
    return false;
  }
  int depth = 0;
  for (const Token& t : toks) {
    if (t.kind == Tk::kKeyword) {
      if (t.text == "begin" || t.text == "if" || t.text == "for" ||
          t.text == "while" || t.text == "match" || t.text == "with") {
        ++depth;
      } else if (t.text == "end") {
        --depth;
      }
    } else if (t.kind == Tk::kSym) {
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
    }
  }
  if (depth > 0) return true;
  if (toks.size() < 2) return false;
  const Token& last = toks[toks.size() - 2];
  if (last.kind == Tk::kKeyword) {
    return last.text == "by" || last.text == "then" || last.text == "else" ||
           last.text == "do" || last.text == "in" || last.text == "and" ||
           last.text == "or" || last.text == "not";
  }
  if (last.kind == Tk::kSym) {
    return last.text == "=" || last.text == "=>" || last.text == "+" ||
           last.text == "-" || last.text == "*" || last.text == "/" ||
           last.text == "," || last.text == "->" || last.text == "++";
  }
  return false;
}

}  // namespace peerhol::script
