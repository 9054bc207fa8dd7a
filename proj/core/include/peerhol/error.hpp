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

#ifndef PEERHOL_ERROR_HPP_
#define PEERHOL_ERROR_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace peerhol {

enum class ErrorKind {
  kTypeError,
  kParseError,
  kNameError,
  kDanglingConstant,
  kNotApplicable,
  kGuardMismatch,
  kNotExistential,
  kDependencyCycle,
  kAmbiguousChronicle,
  kUnknownChronicle,
  kUnknownContext,
  kUnknownParent,
  kNotAncestor,
  kCodecError,
  kStorageFailure,
  kAuthFailure,
  kScriptError,
  kInternalError,
};

std::string_view error_kind_name(ErrorKind kind);

// 1-based line and column into UTF-8 source; column counts code points.
struct SourcePos {
  std::uint32_t line = 1;
  std::uint32_t column = 1;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<SourcePos> pos = std::nullopt)
      : std::runtime_error(message), kind_(kind), pos_(pos) {}

  ErrorKind kind() const { return kind_; }
  const std::optional<SourcePos>& position() const { return pos_; }

 private:
  ErrorKind kind_;
  std::optional<SourcePos> pos_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace peerhol

#endif  // PEERHOL_ERROR_HPP_
