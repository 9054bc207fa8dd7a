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

#ifndef PEERHOL_CHRONICLE_HPP_
#define PEERHOL_CHRONICLE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "peerhol/context.hpp"
#include "peerhol/store.hpp"

namespace peerhol {

struct ChronicleId {
  std::string owner;
  std::string name;

  std::string to_string() const { return owner + ":" + name; }
  friend bool operator==(const ChronicleId&, const ChronicleId&) = default;
  friend auto operator<=>(const ChronicleId&, const ChronicleId&) = default;
};

inline ChronicleId chronicle_of(const VersionKey& v) { return {v.owner, v.name}; }
std::string to_string(const VersionKey& v);

inline const ChronicleId kRootChronicle{"system", "root"};

// Explicit versions for some chronicles; the rest use their newest version.
using Assignment = std::map<ChronicleId, std::uint64_t>;

// Versions and their direct dependency edges. Edges only point from a new
// version to existing ones, so the graph stays acyclic.
class VersionGraph {
 public:
  // Throws kDependencyCycle if a dependency belongs to the version's own
  // chronicle or transitively depends on one of its versions, and
  // kInternalError for an unknown dependency or a non-increasing version.
  void add_version(const VersionKey& v, const std::set<VersionKey>& direct);
  // The checks of add_version without adding.
  void validate(const VersionKey& v, const std::set<VersionKey>& direct) const;

  bool contains(const VersionKey& v) const { return direct_.count(v) != 0; }
  const std::set<VersionKey>& direct_dependencies(const VersionKey& v) const;
  // Irreflexive transitive closure.
  std::set<VersionKey> dependencies(const VersionKey& v) const;
  bool depends_on(const VersionKey& v, const VersionKey& w) const;
  // True iff a version of `c` that directly depends on `w` would violate the
  // no-self-dependency rule.
  bool violates(const ChronicleId& c, const VersionKey& w) const;

  std::optional<VersionKey> newest(const ChronicleId& c) const;
  bool is_up_to_date(const ChronicleId& c) const;
  std::vector<ChronicleId> chronicles() const;
  // Newest first.
  std::vector<VersionKey> versions(const ChronicleId& c) const;

 private:
  std::map<VersionKey, std::set<VersionKey>> direct_;
  std::map<ChronicleId, std::vector<VersionKey>> by_chronicle_;  // oldest first
};

struct ChronicleStatus {
  bool up_to_date = true;
  bool regeneration_failed = false;
  std::string message;
};

struct RepairReport {
  struct Failure {
    ChronicleId chronicle;
    std::string message;
  };
  std::vector<VersionKey> regenerated;  // in the order they were produced
  std::vector<Failure> failed;
  std::vector<ChronicleId> still_stale;
};

// Chronicle metadata backed by the store.
class Chronicles {
 public:
  Chronicles(Store& store, ContextTree& tree);

  // Version owning ctx or its nearest owned ancestor.
  std::optional<VersionKey> owner_of(const ContextPtr& ctx) const;
  std::optional<VersionKey> owner_of_ref(const ContextRef& ref) const;

  std::optional<VersionKey> newest(const ChronicleId& c) const;
  std::optional<ChronicleVersionRecord> version(const VersionKey& v) const;
  std::vector<ChronicleId> list() const;
  std::vector<ChronicleId> find_by_name(const std::string& name) const;
  std::vector<VersionKey> versions(const ChronicleId& c) const;  // newest first
  std::set<VersionKey> direct_dependencies(const VersionKey& v) const;
  bool is_up_to_date(const ChronicleId& c) const;
  ChronicleStatus status(const ChronicleId& c) const;
  VersionGraph graph() const;

  // Rejects a context below `parent` for a run producing a version of
  // `creating`; `own` tells whether a ref was created by that run.
  // Throws kDependencyCycle.
  void guard(const ChronicleId& creating, const ContextPtr& parent,
             const std::function<bool(const ContextRef&)>& own) const;

  // Records a new version. `owned` must contain `final_context`.
  VersionKey publish(const ChronicleId& c, const std::vector<ContextRef>& owned,
                     const ContextRef& final_context, const std::string& script,
                     const Assignment& used);
  void set_status(const ChronicleId& c, bool failed, const std::string& message);

  // Regenerates every chronicle that is not up to date, dependencies first.
  // `regenerate` returns the new version or an error message.
  using Regenerate =
      std::function<std::variant<VersionKey, std::string>(const ChronicleVersionRecord&)>;
  RepairReport repair_sweep(const Regenerate& regenerate);

 private:
  void apply(const ChronicleVersionRecord& rec);
  std::set<VersionKey> compute_direct(const VersionKey& self,
                                      const std::vector<ContextRef>& owned) const;
  std::optional<VersionKey> owner_of_locked(const ContextPtr& ctx) const;

  Store& store_;
  ContextTree& tree_;
  mutable std::shared_mutex mu_;
  VersionGraph graph_;
  std::map<VersionKey, ChronicleVersionRecord> records_;
  std::unordered_map<ContextRef, VersionKey, ContextRefHash> owners_;
  std::map<ChronicleId, ChronicleStatusRecord> status_;
};

}  // namespace peerhol

#endif  // PEERHOL_CHRONICLE_HPP_
