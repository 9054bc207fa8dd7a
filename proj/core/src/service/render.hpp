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

#ifndef PEERHOL_SERVICE_RENDER_HPP_
#define PEERHOL_SERVICE_RENDER_HPP_

#include "json.hpp"
#include "peerhol/engine.hpp"

namespace peerhol {

nlohmann::json value_json(const Value& v, ContextTree& tree, PrintMode mode);
nlohmann::json version_json(const VersionKey& v);
nlohmann::json failure_json(const ScriptFailure& f);
nlohmann::json repair_json(const RepairReport& r);
nlohmann::json report_json(const ExecuteReport& r, ContextTree& tree, PrintMode mode);
std::string format_repair_text(const nlohmann::json& r);

}  // namespace peerhol

#endif  // PEERHOL_SERVICE_RENDER_HPP_
