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

#include "peerhol/error.hpp"

namespace peerhol {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kTypeError: return "TypeError";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kNameError: return "NameError";
    case ErrorKind::kDanglingConstant: return "DanglingConstant";
    case ErrorKind::kNotApplicable: return "NotApplicable";
    case ErrorKind::kGuardMismatch: return "GuardMismatch";
    case ErrorKind::kNotExistential: return "NotExistential";
    case ErrorKind::kDependencyCycle: return "DependencyCycle";
    case ErrorKind::kAmbiguousChronicle: return "AmbiguousChronicle";
    case ErrorKind::kUnknownChronicle: return "UnknownChronicle";
    case ErrorKind::kUnknownContext: return "UnknownContext";
    case ErrorKind::kUnknownParent: return "UnknownParent";
    case ErrorKind::kNotAncestor: return "NotAncestor";
    case ErrorKind::kCodecError: return "CodecError";
    case ErrorKind::kStorageFailure: return "StorageFailure";
    case ErrorKind::kAuthFailure: return "AuthFailure";
    case ErrorKind::kScriptError: return "ScriptError";
    case ErrorKind::kInternalError: return "InternalError";
  }
  return "UnknownError";
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace peerhol
