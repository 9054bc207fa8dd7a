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
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "peerhol/chronicle.hpp"
#include "random_graph.hpp"

namespace peerhol {
namespace {

using testing::RandomGraph;
using testing::describe;
using testing::run;

TEST_CASE("up-to-date matches a brute-force closure on random graphs") {
  std::mt19937 rng(2024);
  int stale = 0;
  for (int round = 0; round < 200; ++round) {
    RandomGraph g(rng);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      for (std::size_t j = 0; j < g.nodes.size(); ++j) {
        CHECK(g.graph.depends_on(g.nodes[i], g.nodes[j]) == g.reach[i][j]);
      }
      CHECK_FALSE(g.graph.depends_on(g.nodes[i], g.nodes[i]));
    }
    for (const auto& c : g.graph.chronicles()) {
      const bool expected = g.oracle_up_to_date(c.name);
      CHECK(g.graph.is_up_to_date(c) == expected);
      if (!expected) ++stale;
    }
  }
  CHECK(stale > 20);
}

TEST_CASE("violating edges are always rejected") {
  std::mt19937 rng(99);
  int injected = 0;
  for (int round = 0; round < 200; ++round) {
    RandomGraph g(rng);
    // a new version of c depending on some w in c or on a w that reaches c
    const VersionKey& pick = g.nodes[rng() % g.nodes.size()];
    std::vector<VersionKey> targets;
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      if (g.nodes[j].name == pick.name) {
        targets.push_back(g.nodes[j]);
        continue;
      }
      for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        if (g.reach[j][k] && g.nodes[k].name == pick.name) {
          targets.push_back(g.nodes[j]);
          break;
        }
      }
    }
    const VersionKey fresh{"u", pick.name, g.graph.newest(chronicle_of(pick))->version + 1};
    for (const auto& w : targets) {
      ++injected;
      CHECK(g.graph.violates(chronicle_of(fresh), w));
      try {
        g.graph.add_version(fresh, {w});
        FAIL("accepted a self dependency");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::kDependencyCycle);
      }
    }
    CHECK_FALSE(g.graph.contains(fresh));
  }
  CHECK(injected >= 200);
}

TEST_CASE("direct dependencies come from the parent relation") {
  auto engine = testing::make_engine();
  auto& ch = engine->chronicles();
  const auto root_v = *ch.newest(kRootChronicle);
  auto a = run(*engine, "fix \"x : set\"", "alice", ChronicleId{"alice", "a"});
  REQUIRE_MESSAGE(a.ok(), describe(a));
  CHECK(ch.direct_dependencies(*a.published) == std::set<VersionKey>{root_v});
  auto b = run(*engine, "val a = @alice:a\nfix \"y : set\"", "bob", ChronicleId{"bob", "b"});
  REQUIRE_MESSAGE(b.ok(), describe(b));
  CHECK(ch.direct_dependencies(*b.published) == std::set<VersionKey>{root_v, *a.published});
  CHECK(ch.graph().depends_on(*b.published, root_v));
  CHECK_FALSE(ch.graph().depends_on(*a.published, *b.published));
  CHECK(ch.direct_dependencies(root_v).empty());
  CHECK(ch.owner_of_ref(*b.final_context) == b.published);
}

TEST_CASE("the guard rejects self dependencies before anything is written") {
  auto engine = testing::make_engine();
  REQUIRE(run(*engine, "let n = 1", "alice", ChronicleId{"alice", "a"}).ok());
  REQUIRE(run(*engine, "val a = @a\nlet m = 2", "bob", ChronicleId{"bob", "b"}).ok());
  const std::string before = engine->store().digest();

  SUBCASE("older version of the same chronicle") {
    auto r = run(*engine, "val old = @alice:a:1", "alice", ChronicleId{"alice", "a"});
    REQUIRE(r.error);
    CHECK(r.error->kind == ErrorKind::kDependencyCycle);
    CHECK(engine->store().digest() == before);
  }
  SUBCASE("through another chronicle") {
    auto r = run(*engine, "val b = @b", "alice", ChronicleId{"alice", "a"});
    REQUIRE(r.error);
    CHECK(r.error->kind == ErrorKind::kDependencyCycle);
  }
  SUBCASE("own contexts and unrelated chronicles are fine") {
    auto r = run(*engine, "fix \"x : set\"\nwith this do fix \"y : set\" end\nval b = @b",
                 "carol", ChronicleId{"carol", "c"});
    CHECK_MESSAGE(r.ok(), describe(r));
  }
  SUBCASE("without publishing there is no guard") {
    auto r = run(*engine, "val old = @alice:a:1", "alice");
    CHECK_MESSAGE(r.ok(), describe(r));
  }
}

TEST_CASE("up-to-date after a dependency republishes") {
  auto engine = testing::make_engine();
  auto& ch = engine->chronicles();
  REQUIRE(run(*engine, "let n = 1", "dave", ChronicleId{"dave", "d"}).ok());
  REQUIRE(run(*engine, "val d = @d\nlet m = d.n + 1", "bob", ChronicleId{"bob", "b"}).ok());
  CHECK(ch.is_up_to_date({"bob", "b"}));
  ExecuteRequest req;
  req.user = "dave";
  req.script = "let n = 10";
  req.publish = ChronicleId{"dave", "d"};
  req.repair = false;
  REQUIRE(engine->execute(req).ok());
  CHECK_FALSE(ch.is_up_to_date({"bob", "b"}));
  CHECK(ch.is_up_to_date({"dave", "d"}));
  const RepairReport rep = engine->repair();
  REQUIRE(rep.regenerated.size() == 1);
  CHECK(rep.regenerated[0] == VersionKey{"bob", "b", 2});
  CHECK(ch.is_up_to_date({"bob", "b"}));
  // the regenerated version sees the new value
  const auto v = ch.version({"bob", "b", 2});
  const Value m = engine->tree().resolve(engine->tree().load(v->final_context), "m");
  CHECK(m.integer() == 11);
  CHECK(engine->repair().regenerated.empty());
}

// D at the bottom, B and C on top of it, A on top of both.
struct Diamond {
  std::unique_ptr<Engine> engine = testing::make_engine();

  Diamond() {
    publish("dave", "D", "let base = 1", false);
    publish("bob", "B", "val d = @D\nlet b = d.base + 1", false);
    publish("carol", "C", "val d = @D\nlet c = d.base + 2", false);
    publish("alice", "A", "val b = @B\nval c = @C\nlet a = b.b + c.c", false);
  }

  ExecuteReport publish(const std::string& user, const std::string& name,
                        const std::string& script, bool repair) {
    ExecuteRequest req;
    req.user = user;
    req.script = script;
    req.publish = ChronicleId{user, name};
    req.repair = repair;
    auto r = engine->execute(req);
    REQUIRE_MESSAGE(r.ok(), describe(r));
    return r;
  }

  std::int64_t value(const std::string& user, const std::string& name, const char* binding) {
    auto& ch = engine->chronicles();
    const auto rec = ch.version(*ch.newest({user, name}));
    return static_cast<std::int64_t>(
        engine->tree().resolve(engine->tree().load(rec->final_context), binding).integer());
  }
};

TEST_CASE("diamond repair regenerates in dependency order and only appends") {
  Diamond d;
  auto& ch = d.engine->chronicles();
  d.publish("dave", "D", "let base = 100", false);
  for (const char* c : {"B", "C", "A"}) {
    CHECK_FALSE(ch.is_up_to_date(ch.find_by_name(c).front()));
  }
  const std::string image_before = d.engine->store().image();
  const auto versions_before = ch.graph();

  const RepairReport rep = d.engine->repair();
  REQUIRE(rep.regenerated.size() == 3);
  CHECK(rep.failed.empty());
  CHECK(rep.still_stale.empty());
  auto pos = [&](const std::string& name) {
    return std::find_if(rep.regenerated.begin(), rep.regenerated.end(),
                        [&](const VersionKey& v) { return v.name == name; }) -
           rep.regenerated.begin();
  };
  CHECK(pos("B") < pos("A"));
  CHECK(pos("C") < pos("A"));
  CHECK(d.value("alice", "A", "a") == 203);

  // existing bytes are untouched: the old image is a strict prefix
  const std::string image_after = d.engine->store().image();
  CHECK(image_after.size() > image_before.size());
  CHECK(image_after.compare(0, image_before.size(), image_before) == 0);
  for (const auto& c : versions_before.chronicles()) {
    for (const auto& v : versions_before.versions(c)) {
      CHECK(ch.direct_dependencies(v) == versions_before.direct_dependencies(v));
    }
  }
  for (const auto& c : ch.list()) CHECK(ch.is_up_to_date(c));
}

TEST_CASE("a failed regeneration flags the chronicle and keeps its old versions") {
  Diamond d;
  auto& ch = d.engine->chronicles();
  d.publish("dave", "D", "let basis = 1", false);
  const RepairReport rep = d.engine->repair();
  REQUIRE(rep.failed.size() == 2);
  std::set<std::string> failed;
  for (const auto& f : rep.failed) failed.insert(f.chronicle.name);
  CHECK(failed == std::set<std::string>{"B", "C"});
  CHECK(rep.failed[0].message.find("NameError") != std::string::npos);
  // A is rebuilt on the last good B and C, which still sit on the old D
  REQUIRE(rep.regenerated.size() == 1);
  CHECK(rep.regenerated[0].name == "A");
  std::set<std::string> stale;
  for (const auto& c : rep.still_stale) stale.insert(c.name);
  CHECK(stale == std::set<std::string>{"A", "B", "C"});
  const ChronicleStatus s = ch.status({"bob", "B"});
  CHECK(s.regeneration_failed);
  CHECK_FALSE(s.up_to_date);
  CHECK(ch.versions({"bob", "B"}).size() == 1);
  // old versions stay usable
  auto r = run(*d.engine, "val b = @B\nb.b");
  REQUIRE_MESSAGE(r.ok(), describe(r));
  CHECK(r.result->integer() == 2);

  // fixing D lets the next sweep clear the flags
  d.publish("dave", "D", "let base = 5\nlet basis = 5", true);
  CHECK_FALSE(ch.status({"bob", "B"}).regeneration_failed);
  for (const auto& c : ch.list()) CHECK(ch.is_up_to_date(c));
  CHECK(d.value("alice", "A", "a") == 13);
}

TEST_CASE("chronicle metadata survives a restart") {
  Diamond d;
  d.publish("dave", "D", "let basis = 1", true);
  const std::string image = d.engine->store().image();
  Engine again(std::make_unique<MemoryBackend>(image), testing::fixed_store_options());
  auto& ch = again.chronicles();
  CHECK(ch.list().size() == 5);
  CHECK(ch.status({"bob", "B"}).regeneration_failed);
  CHECK(ch.versions({"alice", "A"}).size() == 2);
  CHECK(again.store().image() == image);
}

}  // namespace
}  // namespace peerhol
