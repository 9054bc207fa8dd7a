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

#ifndef PEERHOL_SCRIPT_HPP_
#define PEERHOL_SCRIPT_HPP_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peerhol/error.hpp"

namespace peerhol::script {

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Block {
  std::vector<StmtPtr> stmts;
  SourcePos pos;
};

struct Pattern {
  enum class Kind { kWildcard, kName, kLiteral, kTuple };

  Kind kind = Kind::kWildcard;
  std::string name;        // kName
  ExprPtr literal;         // kLiteral: an int, string or bool expression
  std::vector<Pattern> elems;  // kTuple
  SourcePos pos;
};

struct MatchCase {
  Pattern pattern;
  Block body;
};

// @n, @u:n, @u:n:v or @"key".
struct RefSpec {
  std::vector<std::string> parts;
  bool by_key = false;
};

struct Expr {
  enum class Kind {
    kInt,
    kString,
    kTermLit,
    kBool,
    kName,
    kRoot,
    kThis,
    kList,
    kTuple,
    kSet,
    kMap,     // items hold keys and values interleaved
    kApp,     // items = {fun, arg}
    kBinary,  // text = operator, items = {lhs, rhs}
    kUnary,   // text = operator, items = {operand}
    kField,   // text = field, items = {object}
    kRef,
    kBlock,
    kIf,      // items = {cond}, blocks = {then[, else]}
    kFor,     // pattern, items = {sequence}, blocks = {body}
    kWhile,   // items = {cond}, blocks = {body}
    kMatch,   // items = {scrutinee}, cases
    kWith,    // items = {context}, blocks = {body}
  };

  Kind kind = Kind::kInt;
  SourcePos pos;
  // Digits of an int, value of a string, source of a term literal, a name,
  // an operator or a field.
  std::string text;
  bool flag = false;  // kBool value
  std::vector<ExprPtr> items;
  std::vector<Block> blocks;
  std::optional<Pattern> pattern;
  std::vector<MatchCase> cases;
  RefSpec ref;
};

struct FunDef {
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;
  SourcePos pos;
};

struct Stmt {
  enum class Kind {
    kFix,
    kAssume,
    kDefine,
    kObtain,
    kHave,
    kLet,
    kUnbind,
    kVal,
    kDef,
    kExpr,
  };

  Kind kind = Kind::kExpr;
  SourcePos pos;
  // Label of fix/assume/define/obtain/have, the name of let and unbind.
  std::optional<std::string> label;
  ExprPtr expr;  // payload, guard, obtained names, bound value
  ExprPtr by;    // proof of obtain/have
  std::optional<Pattern> pattern;  // val
  std::vector<FunDef> defs;        // one mutually recursive group
  // Source text of a def group, kept so function values can be persisted.
  std::string source;
};

// Parses a whole program. Throws Error(kParseError) with a position.
Block parse_script(std::string_view src);

// True while `src` has unclosed begin/if/for/while/match/with forms,
// brackets, or string/term literals. Used by the REPL to decide when a
// statement is complete.
bool needs_more_input(std::string_view src);

bool is_keyword(std::string_view word);

}  // namespace peerhol::script

#endif  // PEERHOL_SCRIPT_HPP_
