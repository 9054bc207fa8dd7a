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

#include <sstream>

#include "json.hpp"
#include "peerhol/service.hpp"
#include "render.hpp"

namespace peerhol {

using nlohmann::json;

json value_json(const Value& v, ContextTree& tree, PrintMode mode) {
  return json{{"type", std::string(tag_name(v.tag()))}, {"value", print_value(v, tree, mode)}};
}

json version_json(const VersionKey& v) {
  return json{{"owner", v.owner}, {"name", v.name}, {"version", v.version}};
}

json failure_json(const ScriptFailure& f) {
  json e{{"kind", std::string(error_kind_name(f.kind))}, {"message", f.message}};
  if (f.pos) {
    e["line"] = f.pos->line;
    e["column"] = f.pos->column;
  }
  return e;
}

json repair_json(const RepairReport& r) {
  json out{{"regenerated", json::array()}, {"failed", json::array()},
           {"still_stale", json::array()}};
  for (const auto& v : r.regenerated) out["regenerated"].push_back(version_json(v));
  for (const auto& f : r.failed) {
    out["failed"].push_back(
        {{"owner", f.chronicle.owner}, {"name", f.chronicle.name}, {"message", f.message}});
  }
  for (const auto& c : r.still_stale) {
    out["still_stale"].push_back({{"owner", c.owner}, {"name", c.name}});
  }
  return out;
}

json report_json(const ExecuteReport& r, ContextTree& tree, PrintMode mode) {
  json out;
  out["ok"] = r.ok();
  out["error"] = r.error ? failure_json(*r.error) : json(nullptr);
  out["created"] = json::array();
  for (const auto& c : r.created) out["created"].push_back(c.to_string());
  out["final_context"] = r.final_context ? json(r.final_context->to_string()) : json(nullptr);
  out["bindings"] = json::array();
  for (const auto& [name, v] : r.bindings) {
    json b = value_json(v, tree, mode);
    b["name"] = name;
    out["bindings"].push_back(std::move(b));
  }
  out["result"] = r.result ? value_json(*r.result, tree, mode) : json(nullptr);
  out["output"] = r.output;
  out["published"] = r.published ? version_json(*r.published) : json(nullptr);
  out["repair"] = r.repair ? repair_json(*r.repair) : json(nullptr);
  return out;
}

std::string render_report_json(const ExecuteReport& report, ContextTree& tree, PrintMode mode) {
  return report_json(report, tree, mode).dump();
}

std::string render_repair_json(const RepairReport& report) { return repair_json(report).dump(); }

namespace {

std::string ref_or_dash(const json& j) { return j.is_string() ? j.get<std::string>() : "-"; }

std::string versions_text(const json& list) {
  std::string out;
  for (const auto& v : list) {
    if (!out.empty()) out += ", ";
    out += v.at("owner").get<std::string>() + ":" + v.at("name").get<std::string>() + ":" +
           std::to_string(v.at("version").get<std::uint64_t>());
  }
  return out;
}

}  // namespace

std::string format_repair_text(const json& r) {
  std::ostringstream out;
  if (r.at("regenerated").empty() && r.at("failed").empty()) {
    out << "repair: nothing to do\n";
  }
  if (!r.at("regenerated").empty()) {
    out << "regenerated " << versions_text(r.at("regenerated")) << "\n";
  }
  for (const auto& f : r.at("failed")) {
    out << "failed " << f.at("owner").get<std::string>() << ":"
        << f.at("name").get<std::string>() << ": " << f.at("message").get<std::string>()
        << "\n";
  }
  for (const auto& c : r.at("still_stale")) {
    out << "out of date " << c.at("owner").get<std::string>() << ":"
        << c.at("name").get<std::string>() << "\n";
  }
  return out.str();
}

std::string format_repair_report_text(const std::string& repair_json) {
  return format_repair_text(json::parse(repair_json));
}

std::string format_report_text(const std::string& report_json) {
  const json r = json::parse(report_json);
  std::ostringstream out;
  for (const auto& line : r.at("output")) out << line.get<std::string>() << "\n";
  for (const auto& b : r.at("bindings")) {
    out << b.at("name").get<std::string>() << " : " << b.at("type").get<std::string>()
        << " = " << b.at("value").get<std::string>() << "\n";
  }
  if (r.at("result").is_object()) {
    out << "result : " << r["result"].at("type").get<std::string>() << " = "
        << r["result"].at("value").get<std::string>() << "\n";
  }
  out << "created " << r.at("created").size() << " context(s), final "
      << ref_or_dash(r.at("final_context")) << "\n";
  if (r.at("published").is_object()) {
    out << "published " << versions_text(json::array({r["published"]})) << "\n";
  }
  if (r.at("repair").is_object()) out << format_repair_text(r["repair"]);
  if (r.at("error").is_object()) {
    const json& e = r["error"];
    out << "error " << e.at("kind").get<std::string>();
    if (e.contains("line")) {
      out << " at " << e["line"].get<int>() << ":" << e["column"].get<int>();
    }
    out << ": " << e.at("message").get<std::string>() << "\n";
  }
  return out.str();
}

}  // namespace peerhol
