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

#ifndef PEERHOL_STORE_HPP_
#define PEERHOL_STORE_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "peerhol/context.hpp"

namespace peerhol {

// A run of contexts stored together. chain[0] hangs below `parent` (absent
// only for a root), chain[i] below chain[i-1].
struct ContextEntity {
  std::string id;
  std::optional<ContextRef> parent;
  std::string owner;
  std::int64_t timestamp = 0;  // ms since epoch
  std::string software_version;
  std::vector<ContextRecord> chain;
};

// Deterministic binary encoding, format version byte first. Throws
// Error(kCodecError) on truncation, an empty chain, unknown tags or an
// unsupported version.
std::string encode_entity(const ContextEntity& entity);
ContextEntity decode_entity(std::string_view bytes);

struct VersionKey {
  std::string owner;
  std::string name;
  std::uint64_t version = 0;

  friend bool operator==(const VersionKey&, const VersionKey&) = default;
  friend auto operator<=>(const VersionKey&, const VersionKey&) = default;
};

struct ChronicleVersionRecord {
  VersionKey key;
  std::vector<ContextRef> owned;
  ContextRef final_context;
  std::string script;
  // Versions of the other chronicles the script ran against.
  std::vector<VersionKey> assignment;
  std::int64_t timestamp = 0;
};

struct ChronicleStatusRecord {
  std::string owner;
  std::string name;
  bool regeneration_failed = false;
  std::string message;
  std::int64_t timestamp = 0;
};

struct UserRecord {
  std::string login;
  std::string password_hash;  // argon2id string
  std::int64_t timestamp = 0;
};

struct SessionOpenRecord {
  std::string token;
  std::string login;
  std::int64_t timestamp = 0;
};

struct SessionCloseRecord {
  std::string token;
  std::int64_t timestamp = 0;
};

using MetaRecord = std::variant<ChronicleVersionRecord, ChronicleStatusRecord, UserRecord,
                                SessionOpenRecord, SessionCloseRecord>;

// Ordered list of opaque records. Appends are durable on return.
class StorageBackend {
 public:
  virtual ~StorageBackend() = default;
  virtual void append(std::string_view payload) = 0;
  virtual std::vector<std::string> read_all() const = 0;
  // The complete on-disk image (header plus framed records).
  virtual std::string image() const = 0;
};

// File image layout: "PEERHOLSTORE" + u32 format version, then per record
// u32 length, u32 crc32 of the payload, payload. Integers little-endian.
inline constexpr std::uint32_t kStoreFormatVersion = 1;
std::string frame_record(std::string_view payload);
// Throws Error(kCodecError).
std::vector<std::string> parse_image(std::string_view image);

class MemoryBackend final : public StorageBackend {
 public:
  MemoryBackend() = default;
  explicit MemoryBackend(std::string_view image);
  void append(std::string_view payload) override;
  std::vector<std::string> read_all() const override { return records_; }
  std::string image() const override;

 private:
  std::vector<std::string> records_;
};

class FileBackend final : public StorageBackend {
 public:
  // Creates the file if missing. Throws kStorageFailure or kCodecError.
  explicit FileBackend(std::string path, bool sync = false);
  ~FileBackend() override;
  FileBackend(const FileBackend&) = delete;
  FileBackend& operator=(const FileBackend&) = delete;

  void append(std::string_view payload) override;
  std::vector<std::string> read_all() const override;
  std::string image() const override;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  bool sync_;
  int fd_ = -1;
};

using KeySource = std::function<std::string()>;
using Clock = std::function<std::int64_t()>;

// 128 random bits, hex encoded.
KeySource random_keys();
// 32 hex digits counting up from `start`; for reproducible stores.
KeySource counter_keys(std::uint64_t start = 1);
Clock system_clock();
Clock fixed_clock(std::int64_t ms);

struct StoreOptions {
  std::size_t chunk = 64;
  KeySource keys;  // random_keys() if empty
  Clock clock;     // system_clock() if empty
  std::string software_version = "peerhol-0.1.0";
};

// Append-only store of context entities and metadata. Safe to call from
// several threads; writes are serialized.
class Store final : public ContextRepository {
 public:
  explicit Store(std::unique_ptr<StorageBackend> backend, StoreOptions options = {});

  ContextPtr append(const ContextPtr& parent, const std::string& owner,
                    const std::function<ContextRecord(const ContextRef&)>& build) override;
  ContextPtr load(const ContextRef& ref) override;
  bool contains(const ContextRef& ref) override;

  // Appends in place when the parent is the tail of an entity with the same
  // owner and fewer than `chunk` contexts, else opens a new entity.
  // Throws kUnknownParent, kStorageFailure.
  ContextRef append_record(const std::optional<ContextRef>& parent, const std::string& owner,
                           const std::function<ContextRecord(const ContextRef&)>& build);

  std::optional<ContextEntity> entity(const std::string& key) const;
  std::vector<std::string> entity_keys() const;  // creation order
  std::size_t context_count() const;

  void put(MetaRecord record);
  std::vector<MetaRecord> meta() const;

  std::int64_t now() const { return options_.clock(); }
  std::string image() const;
  // BLAKE2b-256 of the image, hex.
  std::string digest() const;
  const StoreOptions& options() const { return options_; }

 private:
  struct Entry {
    ContextEntity entity;
    std::vector<ContextPtr> cache;
  };

  void replay(const std::string& payload);
  ContextPtr load_locked(const ContextRef& ref);
  const Entry& entry_locked(const ContextRef& ref) const;

  std::unique_ptr<StorageBackend> backend_;
  StoreOptions options_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, Entry> entities_;
  std::vector<std::string> order_;
  std::vector<MetaRecord> meta_;
  std::size_t contexts_ = 0;
};

}  // namespace peerhol

#endif  // PEERHOL_STORE_HPP_
