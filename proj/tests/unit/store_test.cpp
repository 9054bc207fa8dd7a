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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "doctest.h"
#include "fixtures.hpp"
#include "peerhol/store.hpp"

namespace peerhol {
namespace {

namespace fs = std::filesystem;
using testing::fixed_store_options;
using testing::term_in;

const fs::path kData = PEERHOL_TEST_DATA_DIR;

bool updating_goldens() { return std::getenv("PEERHOL_UPDATE_GOLDEN") != nullptr; }

std::string read_bytes(const fs::path& p) { return read_file(p.string()); }

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
}

ContextRecord bind_record(int i) {
  ContextRecord rec;
  rec.kind = ContextKind::kBind;
  rec.bindings.emplace_back("n", Value(i));
  return rec;
}

struct TempFile {
  fs::path path;
  TempFile() {
    path = fs::temp_directory_path() /
           ("peerhol-store-" + std::to_string(::getpid()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".log");
    fs::remove(path);
  }
  ~TempFile() { fs::remove(path); }
};

TEST_CASE("sequential children share an entity, branches open new ones") {
  Store store(std::make_unique<MemoryBackend>(), fixed_store_options());
  const ContextRef r = store.append_record(std::nullopt, "alice", [](auto&) {
    ContextRecord rec;
    return rec;
  });
  const ContextRef a = store.append_record(r, "alice", [](auto&) { return bind_record(1); });
  const ContextRef b = store.append_record(a, "alice", [](auto&) { return bind_record(2); });
  CHECK(r.index == 0);
  CHECK(a.entity == r.entity);
  CHECK(a.index == 1);
  CHECK(b.index == 2);
  // branch below the middle of the chain
  const ContextRef c = store.append_record(a, "alice", [](auto&) { return bind_record(3); });
  CHECK(c.entity != r.entity);
  CHECK(c.index == 0);
  CHECK(store.entity(c.entity)->parent == a);
  // another owner never extends the chain
  const ContextRef d = store.append_record(b, "bob", [](auto&) { return bind_record(4); });
  CHECK(d.entity != r.entity);
  CHECK(store.context_count() == 5);
}

TEST_CASE("chain packing respects the chunk size") {
  Store store(std::make_unique<MemoryBackend>(), fixed_store_options(4));
  std::optional<ContextRef> at;
  for (int i = 0; i < 10; ++i) {
    at = store.append_record(at, "alice", [&](auto&) { return bind_record(i); });
  }
  std::vector<std::size_t> sizes;
  for (const auto& k : store.entity_keys()) sizes.push_back(store.entity(k)->chain.size());
  CHECK(sizes == std::vector<std::size_t>{4, 4, 2});
}

TEST_CASE("unknown parents and indices") {
  Store store(std::make_unique<MemoryBackend>(), fixed_store_options());
  try {
    store.append_record(ContextRef{"nope", 0}, "alice", [](auto&) { return bind_record(1); });
    FAIL("expected UnknownParent");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnknownParent);
  }
  const ContextRef r = store.append_record(std::nullopt, "alice", [](auto&) {
    return ContextRecord{};
  });
  CHECK(store.contains(r));
  CHECK_FALSE(store.contains(ContextRef{r.entity, 5}));
  try {
    store.load(ContextRef{r.entity, 5});
    FAIL("expected UnknownContext");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnknownContext);
  }
  CHECK(store.context_count() == 1);
}

// One entity whose chain holds a context of every kind.
ContextEntity all_kinds_entity() {
  Store store(std::make_unique<MemoryBackend>(), fixed_store_options());
  ContextTree tree(store);
  CreationHooks hooks;
  hooks.owner = "alice";
  ContextPtr c = tree.create_root(hooks);
  c = tree.fix(c, "x", Type::prop(), hooks);
  c = tree.assume(c, term_in(c, "x"), "h", hooks);
  const Theorem h = tree.resolve(c, "h").theorem();
  c = tree.define(c, "e", term_in(c, "{∅, 𝒫 ∅}"), "e_def", hooks);
  c = tree.assume(c, term_in(c, "∃ y : set → prop. y = (λ z. z ∈ e)"), std::nullopt, hooks);
  c = tree.obtain(c, tree.resolve(c, "fact").theorem(), {"Y"}, std::nullopt, hooks);
  c = tree.have(c, term_in(c, "¬¬x"), h, "again", hooks);
  c = tree.bind(c, "data",
                Value::list({Value(BigInt("123456789012345678901234567890")), Value("str"),
                             Value(true), Value(Type::fun(Type::set(), Type::prop())),
                             Value(TermValue{term_in(c, "Y e"), c->ref()}),
                             Value::vector({Value(1), Value(c->ref())}),
                             Value::set({Value(3), Value(1)}),
                             Value::map({{Value("k"), Value(h)}})}),
                hooks);
  c = tree.unbind(c, "again", hooks);
  c = tree.import(c, hooks);
  REQUIRE(store.entity_keys().size() == 1);
  return *store.entity(store.entity_keys().front());
}

TEST_CASE("entity encoding is canonical and matches the golden file") {
  const ContextEntity e = all_kinds_entity();
  REQUIRE(e.chain.size() == 10);
  const std::string bytes = encode_entity(e);
  CHECK(encode_entity(decode_entity(bytes)) == bytes);
  const fs::path golden = kData / "entity_all_kinds.bin";
  if (updating_goldens()) write_bytes(golden, bytes);
  CHECK(read_bytes(golden) == bytes);

  const ContextEntity d = decode_entity(read_bytes(golden));
  CHECK(d.owner == "alice");
  CHECK(d.chain[6].kind == ContextKind::kHave);
  CHECK(d.chain[7].bindings[0].second.items()[0].integer() ==
        BigInt("123456789012345678901234567890"));
}

TEST_CASE("entity decoding rejects damage") {
  const std::string bytes = encode_entity(all_kinds_entity());
  auto expect_codec_error = [](const std::string& b) {
    try {
      decode_entity(b);
      FAIL("expected CodecError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kCodecError);
    }
  };
  SUBCASE("future format version") {
    std::string b = bytes;
    b[0] = 2;
    expect_codec_error(b);
  }
  SUBCASE("corrupted length prefix") {
    std::string b = bytes;
    // the key length follows the format byte
    b[1] = '\x7f';
    b[4] = '\x7f';
    expect_codec_error(b);
  }
  SUBCASE("truncated") { expect_codec_error(bytes.substr(0, bytes.size() - 3)); }
  SUBCASE("trailing bytes") { expect_codec_error(bytes + "x"); }
  SUBCASE("empty chain") {
    ContextEntity e;
    e.id = "k";
    e.owner = "alice";
    CHECK_THROWS_AS(encode_entity(e), Error);
  }
}

TEST_CASE("store images reject corruption") {
  MemoryBackend backend;
  backend.append("hello");
  const std::string image = backend.image();
  CHECK(parse_image(image) == std::vector<std::string>{"hello"});
  std::string flipped = image;
  flipped.back() ^= 1;
  CHECK_THROWS_AS(parse_image(flipped), Error);
  std::string bad_len = image;
  bad_len[16] = '\x50';
  CHECK_THROWS_AS(parse_image(bad_len), Error);
  CHECK_THROWS_AS(parse_image("NOTASTORE000000000"), Error);
  CHECK(image.substr(0, 16) == std::string("PEERHOLSTORE\x01\0\0\0", 16));
}

TEST_CASE("engine state survives a restart byte for byte") {
  TempFile tmp;
  std::string digest;
  std::string image;
  {
    auto engine = testing::make_engine(std::make_unique<FileBackend>(tmp.path.string()));
    const auto r = testing::run(*engine, testing::kGoldenFixtureScript, "alice", ChronicleId{"alice", "basics"});
    REQUIRE_MESSAGE(r.ok(), testing::describe(r));
    image = engine->store().image();
    digest = engine->store().digest();
  }
  CHECK(read_bytes(tmp.path) == image);
  const fs::path golden = kData / "golden_store.bin";
  if (updating_goldens()) write_bytes(golden, image);
  CHECK(read_bytes(golden) == image);

  auto engine = testing::make_engine(std::make_unique<FileBackend>(tmp.path.string()));
  CHECK(engine->store().digest() == digest);
  CHECK(engine->store().image() == image);
  const auto v = engine->chronicles().newest({"alice", "basics"});
  REQUIRE(v);
  const auto rec = engine->chronicles().version(*v);
  const ContextPtr final_ctx = engine->tree().load(rec->final_context);
  const Value impl = engine->tree().resolve(final_ctx, "impl");
  CHECK(testing::proposition_text(engine->tree(), impl.theorem()) == "∀ x : prop. x ⟶ x");
  // restored functions still run
  const auto r = testing::run(*engine, "val a = @basics\nwith a do double five end");
  REQUIRE_MESSAGE(r.ok(), testing::describe(r));
  CHECK(r.result->integer() == 20);
  CHECK(engine->store().digest() != digest);  // the run added contexts
}

TEST_CASE("the golden store loads without a bootstrap") {
  const std::string image = read_bytes(kData / "golden_store.bin");
  Engine engine(std::make_unique<MemoryBackend>(image), fixed_store_options());
  CHECK(engine.store().image() == image);
  CHECK(engine.chronicles().list().size() == 2);
}

TEST_CASE("reads never change the store") {
  auto engine = testing::make_engine();
  const std::string before = engine->store().digest();
  for (const auto& k : engine->store().entity_keys()) {
    const auto e = engine->store().entity(k);
    for (std::uint32_t i = 0; i < e->chain.size(); ++i) engine->store().load({k, i});
  }
  engine->chronicles().list();
  engine->chronicles().graph();
  CHECK(engine->store().digest() == before);
}

TEST_CASE("referential integrity across the whole store") {
  auto engine = testing::make_engine();
  REQUIRE(testing::run(*engine, testing::kGoldenFixtureScript, "alice", ChronicleId{"alice", "a"}).ok());
  REQUIRE(testing::run(*engine, "val a = @a\nfix \"y : set\"", "bob", ChronicleId{"bob", "b"})
              .ok());
  Store& s = engine->store();
  std::size_t roots = 0;
  for (const auto& k : s.entity_keys()) {
    const auto e = s.entity(k);
    if (!e->parent) {
      ++roots;
      continue;
    }
    CHECK(s.contains(*e->parent));
  }
  CHECK(roots == 1);
}

}  // namespace
}  // namespace peerhol
