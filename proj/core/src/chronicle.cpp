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

#include "peerhol/chronicle.hpp"

#include <algorithm>
#include <mutex>

namespace peerhol {

std::string to_string(const VersionKey& v) {
  return v.owner + ":" + v.name + ":" + std::to_string(v.version);
}

void VersionGraph::validate(const VersionKey& v, const std::set<VersionKey>& direct) const {
  if (contains(v)) fail(ErrorKind::kInternalError, "version " + to_string(v) + " exists");
  if (auto n = newest(chronicle_of(v)); n && n->version >= v.version) {
    fail(ErrorKind::kInternalError, "version numbers must increase");
  }
  for (const auto& w : direct) {
    if (!contains(w)) fail(ErrorKind::kInternalError, "unknown version " + to_string(w));
    if (violates(chronicle_of(v), w)) {
      fail(ErrorKind::kDependencyCycle,
           to_string(v) + " would depend on its own chronicle through " + to_string(w));
    }
  }
}

void VersionGraph::add_version(const VersionKey& v, const std::set<VersionKey>& direct) {
  validate(v, direct);
  direct_[v] = direct;
  by_chronicle_[chronicle_of(v)].push_back(v);
}

const std::set<VersionKey>& VersionGraph::direct_dependencies(const VersionKey& v) const {
  auto it = direct_.find(v);
  if (it == direct_.end()) fail(ErrorKind::kInternalError, "unknown version " + to_string(v));
  return it->second;
}

std::set<VersionKey> VersionGraph::dependencies(const VersionKey& v) const {
  std::set<VersionKey> seen;
  std::vector<VersionKey> todo(direct_dependencies(v).begin(), direct_dependencies(v).end());
  while (!todo.empty()) {
    VersionKey w = std::move(todo.back());
    todo.pop_back();
    if (!seen.insert(w).second) continue;
    for (const auto& x : direct_dependencies(w)) todo.push_back(x);
  }
  return seen;
}

bool VersionGraph::depends_on(const VersionKey& v, const VersionKey& w) const {
  return dependencies(v).count(w) != 0;
}

bool VersionGraph::violates(const ChronicleId& c, const VersionKey& w) const {
  if (chronicle_of(w) == c) return true;
  for (const auto& x : dependencies(w)) {
    if (chronicle_of(x) == c) return true;
  }
  return false;
}

std::optional<VersionKey> VersionGraph::newest(const ChronicleId& c) const {
  auto it = by_chronicle_.find(c);
  if (it == by_chronicle_.end() || it->second.empty()) return std::nullopt;
  return it->second.back();
}

bool VersionGraph::is_up_to_date(const ChronicleId& c) const {
  const auto n = newest(c);
  if (!n) return true;
  for (const auto& d : dependencies(*n)) {
    if (newest(chronicle_of(d)) != d) return false;
  }
  return true;
}

std::vector<ChronicleId> VersionGraph::chronicles() const {
  std::vector<ChronicleId> out;
  for (const auto& [c, _] : by_chronicle_) out.push_back(c);
  return out;
}

std::vector<VersionKey> VersionGraph::versions(const ChronicleId& c) const {
  auto it = by_chronicle_.find(c);
  if (it == by_chronicle_.end()) return {};
  return {it->second.rbegin(), it->second.rend()};
}

Chronicles::Chronicles(Store& store, ContextTree& tree) : store_(store), tree_(tree) {
  for (const auto& m : store_.meta()) {
    if (const auto* v = std::get_if<ChronicleVersionRecord>(&m)) {
      apply(*v);
    } else if (const auto* s = std::get_if<ChronicleStatusRecord>(&m)) {
      status_[{s->owner, s->name}] = *s;
    }
  }
}

std::set<VersionKey> Chronicles::compute_direct(const VersionKey& self,
                                                const std::vector<ContextRef>& owned) const {
  const std::set<ContextRef> mine(owned.begin(), owned.end());
  std::set<VersionKey> out;
  for (const auto& ref : owned) {
    const ContextPtr& parent = tree_.load(ref)->parent();
    if (!parent || mine.count(parent->ref())) continue;
    if (auto w = owner_of_locked(parent); w && *w != self) out.insert(*w);
  }
  return out;
}

void Chronicles::apply(const ChronicleVersionRecord& rec) {
  graph_.add_version(rec.key, compute_direct(rec.key, rec.owned));
  records_[rec.key] = rec;
  for (const auto& ref : rec.owned) owners_[ref] = rec.key;
}

std::optional<VersionKey> Chronicles::owner_of_locked(const ContextPtr& ctx) const {
  for (const Context* c = ctx.get(); c != nullptr; c = c->parent().get()) {
    if (auto it = owners_.find(c->ref()); it != owners_.end()) return it->second;
  }
  return std::nullopt;
}

std::optional<VersionKey> Chronicles::owner_of(const ContextPtr& ctx) const {
  std::shared_lock lock(mu_);
  return owner_of_locked(ctx);
}

std::optional<VersionKey> Chronicles::owner_of_ref(const ContextRef& ref) const {
  return owner_of(tree_.load(ref));
}

std::optional<VersionKey> Chronicles::newest(const ChronicleId& c) const {
  std::shared_lock lock(mu_);
  return graph_.newest(c);
}

std::optional<ChronicleVersionRecord> Chronicles::version(const VersionKey& v) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(v);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::vector<ChronicleId> Chronicles::list() const {
  std::shared_lock lock(mu_);
  return graph_.chronicles();
}

std::vector<ChronicleId> Chronicles::find_by_name(const std::string& name) const {
  std::shared_lock lock(mu_);
  std::vector<ChronicleId> out;
  for (auto& c : graph_.chronicles()) {
    if (c.name == name) out.push_back(c);
  }
  return out;
}

std::vector<VersionKey> Chronicles::versions(const ChronicleId& c) const {
  std::shared_lock lock(mu_);
  return graph_.versions(c);
}

std::set<VersionKey> Chronicles::direct_dependencies(const VersionKey& v) const {
  std::shared_lock lock(mu_);
  return graph_.direct_dependencies(v);
}

bool Chronicles::is_up_to_date(const ChronicleId& c) const {
  std::shared_lock lock(mu_);
  return graph_.is_up_to_date(c);
}

ChronicleStatus Chronicles::status(const ChronicleId& c) const {
  std::shared_lock lock(mu_);
  ChronicleStatus s;
  s.up_to_date = graph_.is_up_to_date(c);
  if (auto it = status_.find(c); it != status_.end()) {
    s.regeneration_failed = it->second.regeneration_failed;
    s.message = it->second.message;
  }
  return s;
}

VersionGraph Chronicles::graph() const {
  std::shared_lock lock(mu_);
  return graph_;
}

void Chronicles::guard(const ChronicleId& creating, const ContextPtr& parent,
                       const std::function<bool(const ContextRef&)>& own) const {
  if (!parent) return;
  std::shared_lock lock(mu_);
  for (const Context* c = parent.get(); c != nullptr; c = c->parent().get()) {
    if (own(c->ref())) return;
    auto it = owners_.find(c->ref());
    if (it == owners_.end()) continue;
    if (graph_.violates(creating, it->second)) {
      fail(ErrorKind::kDependencyCycle,
           "context " + parent->ref().to_string() + " belongs to " + to_string(it->second) +
               ", so " + creating.to_string() + " would depend on itself");
    }
    return;
  }
}

VersionKey Chronicles::publish(const ChronicleId& c, const std::vector<ContextRef>& owned,
                               const ContextRef& final_context, const std::string& script,
                               const Assignment& used) {
  std::unique_lock lock(mu_);
  if (std::find(owned.begin(), owned.end(), final_context) == owned.end()) {
    fail(ErrorKind::kInternalError, "the final context must be owned by the version");
  }
  for (const auto& ref : owned) {
    if (auto it = owners_.find(ref); it != owners_.end()) {
      fail(ErrorKind::kInternalError,
           "context " + ref.to_string() + " already belongs to " + to_string(it->second));
    }
  }
  ChronicleVersionRecord rec;
  const auto prev = graph_.newest(c);
  rec.key = VersionKey{c.owner, c.name, prev ? prev->version + 1 : 1};
  rec.owned = owned;
  rec.final_context = final_context;
  rec.script = script;
  for (const auto& [id, v] : used) rec.assignment.push_back({id.owner, id.name, v});
  rec.timestamp = store_.now();
  const auto direct = compute_direct(rec.key, owned);
  graph_.validate(rec.key, direct);
  store_.put(rec);
  graph_.add_version(rec.key, direct);
  for (const auto& ref : owned) owners_[ref] = rec.key;
  const VersionKey key = rec.key;
  records_[key] = std::move(rec);
  return key;
}

void Chronicles::set_status(const ChronicleId& c, bool failed, const std::string& message) {
  std::unique_lock lock(mu_);
  auto it = status_.find(c);
  const bool was_failed = it != status_.end() && it->second.regeneration_failed;
  if (!failed && !was_failed) return;
  ChronicleStatusRecord rec{c.owner, c.name, failed, message, store_.now()};
  store_.put(rec);
  status_[c] = std::move(rec);
}

RepairReport Chronicles::repair_sweep(const Regenerate& regenerate) {
  RepairReport report;
  std::vector<ChronicleId> stale;
  std::map<ChronicleId, std::set<ChronicleId>> needs;
  {
    std::shared_lock lock(mu_);
    for (const auto& c : graph_.chronicles()) {
      if (!graph_.is_up_to_date(c)) stale.push_back(c);
    }
    const std::set<ChronicleId> stale_set(stale.begin(), stale.end());
    for (const auto& c : stale) {
      for (const auto& d : graph_.dependencies(*graph_.newest(c))) {
        const ChronicleId dc = chronicle_of(d);
        if (dc != c && stale_set.count(dc)) needs[c].insert(dc);
      }
    }
  }
  // Kahn's algorithm, smallest (owner, name) first; a cycle between stale
  // chronicles is broken at its smallest member.
  std::set<ChronicleId> pending(stale.begin(), stale.end());
  std::vector<ChronicleId> order;
  while (!pending.empty()) {
    auto pick = std::find_if(pending.begin(), pending.end(), [&](const ChronicleId& c) {
      for (const auto& d : needs[c]) {
        if (pending.count(d)) return false;
      }
      return true;
    });
    if (pick == pending.end()) pick = pending.begin();
    order.push_back(*pick);
    pending.erase(pick);
  }
  for (const auto& c : order) {
    if (is_up_to_date(c)) continue;
    const auto rec = version(*newest(c));
    auto result = regenerate(*rec);
    if (auto* v = std::get_if<VersionKey>(&result)) {
      report.regenerated.push_back(*v);
      set_status(c, false, "");
    } else {
      const std::string& msg = std::get<std::string>(result);
      report.failed.push_back({c, msg});
      set_status(c, true, msg);
    }
  }
  for (const auto& c : list()) {
    if (!is_up_to_date(c)) report.still_stale.push_back(c);
  }
  return report;
}

}  // namespace peerhol
