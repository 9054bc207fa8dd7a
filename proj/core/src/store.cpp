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

#include "peerhol/store.hpp"

#include <fcntl.h>
#include <sodium.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "codec.hpp"

namespace peerhol {
namespace {

constexpr std::string_view kMagic = "PEERHOLSTORE";

std::uint32_t crc(std::string_view s) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

std::string header() {
  Writer w;
  w.raw(kMagic);
  w.u32(kStoreFormatVersion);
  return std::move(w.out());
}

std::string to_hex(const unsigned char* p, std::size_t n) {
  std::string out(2 * n + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), p, n);
  out.pop_back();
  return out;
}

void ensure_sodium() {
  if (sodium_init() < 0) fail(ErrorKind::kInternalError, "libsodium failed to initialize");
}

[[noreturn]] void io_failure(const std::string& what, const std::string& path) {
  fail(ErrorKind::kStorageFailure, what + " " + path + ": " + std::strerror(errno));
}

}  // namespace

std::string frame_record(std::string_view payload) {
  Writer w;
  w.u32(static_cast<std::uint32_t>(payload.size()));
  w.u32(crc(payload));
  w.raw(payload);
  return std::move(w.out());
}

std::vector<std::string> parse_image(std::string_view image) {
  if (image.size() < kMagic.size() + 4 || image.substr(0, kMagic.size()) != kMagic) {
    fail(ErrorKind::kCodecError, "not a store image (bad magic)");
  }
  Reader r(image.substr(kMagic.size()));
  const std::uint32_t version = r.u32();
  if (version != kStoreFormatVersion) {
    fail(ErrorKind::kCodecError, "unsupported store format version " + std::to_string(version));
  }
  std::vector<std::string> records;
  while (!r.done()) {
    const std::uint32_t n = r.count();
    const std::uint32_t sum = r.u32();
    std::string payload;
    payload.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) payload.push_back(static_cast<char>(r.u8()));
    if (crc(payload) != sum) fail(ErrorKind::kCodecError, "record checksum mismatch");
    records.push_back(std::move(payload));
  }
  return records;
}

MemoryBackend::MemoryBackend(std::string_view image) : records_(parse_image(image)) {}

void MemoryBackend::append(std::string_view payload) { records_.emplace_back(payload); }

std::string MemoryBackend::image() const {
  std::string out = header();
  for (const auto& p : records_) out += frame_record(p);
  return out;
}

FileBackend::FileBackend(std::string path, bool sync) : path_(std::move(path)), sync_(sync) {
  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) io_failure("cannot open", path_);
  struct stat st{};
  if (::fstat(fd_, &st) != 0) io_failure("cannot stat", path_);
  if (st.st_size == 0) {
    const std::string h = header();
    if (::write(fd_, h.data(), h.size()) != static_cast<ssize_t>(h.size())) {
      io_failure("cannot write", path_);
    }
  } else {
    parse_image(image());
  }
}

FileBackend::~FileBackend() {
  if (fd_ >= 0) ::close(fd_);
}

void FileBackend::append(std::string_view payload) {
  const std::string frame = frame_record(payload);
  std::size_t done = 0;
  while (done < frame.size()) {
    const ssize_t n = ::write(fd_, frame.data() + done, frame.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      io_failure("cannot write", path_);
    }
    done += static_cast<std::size_t>(n);
  }
  if (sync_ && ::fdatasync(fd_) != 0) io_failure("cannot sync", path_);
}

std::vector<std::string> FileBackend::read_all() const { return parse_image(image()); }

std::string FileBackend::image() const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) io_failure("cannot read", path_);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

KeySource random_keys() {
  ensure_sodium();
  return [] {
    unsigned char buf[16];
    randombytes_buf(buf, sizeof buf);
    return to_hex(buf, sizeof buf);
  };
}

KeySource counter_keys(std::uint64_t start) {
  auto next = std::make_shared<std::uint64_t>(start);
  return [next] {
    char buf[33];
    std::snprintf(buf, sizeof buf, "%032llx", static_cast<unsigned long long>((*next)++));
    return std::string(buf);
  };
}

Clock system_clock() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

Clock fixed_clock(std::int64_t ms) {
  return [ms] { return ms; };
}

Store::Store(std::unique_ptr<StorageBackend> backend, StoreOptions options)
    : backend_(std::move(backend)), options_(std::move(options)) {
  if (options_.chunk == 0) fail(ErrorKind::kInternalError, "chunk size must be positive");
  if (!options_.keys) options_.keys = random_keys();
  if (!options_.clock) options_.clock = system_clock();
  for (const auto& payload : backend_->read_all()) replay(payload);
}

void Store::replay(const std::string& payload) {
  if (payload.empty()) fail(ErrorKind::kCodecError, "empty record");
  const auto type = static_cast<std::uint8_t>(payload[0]);
  const std::string_view body = std::string_view(payload).substr(1);
  if (type == static_cast<std::uint8_t>(RecordType::kEntityOpen)) {
    ContextEntity e = decode_entity(body);
    if (e.chain.size() != 1) fail(ErrorKind::kCodecError, "entity must open with one context");
    if (entities_.count(e.id)) fail(ErrorKind::kCodecError, "duplicate entity " + e.id);
    if (e.parent) {
      auto pit = entities_.find(e.parent->entity);
      if (pit == entities_.end() || e.parent->index >= pit->second.entity.chain.size()) {
        fail(ErrorKind::kCodecError, "entity " + e.id + " has an unknown parent");
      }
    }
    const std::string id = e.id;
    order_.push_back(id);
    entities_.emplace(id, Entry{std::move(e), {}});
    ++contexts_;
    return;
  }
  Reader r(body);
  try {
    if (type == static_cast<std::uint8_t>(RecordType::kChainAppend)) {
      const ContextRef ref = ValueCodec::get_ref(r);
      ContextRecord rec = ValueCodec::get_record(r);
      r.expect_done();
      auto it = entities_.find(ref.entity);
      if (it == entities_.end() || it->second.entity.chain.size() != ref.index) {
        fail(ErrorKind::kCodecError, "chain append out of order at " + ref.to_string());
      }
      it->second.entity.chain.push_back(std::move(rec));
      ++contexts_;
      return;
    }
    MetaRecord m = ValueCodec::get_meta(type, r);
    r.expect_done();
    meta_.push_back(std::move(m));
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::kCodecError) throw;
    throw Error(ErrorKind::kCodecError, err.what());
  }
}

const Store::Entry& Store::entry_locked(const ContextRef& ref) const {
  auto it = entities_.find(ref.entity);
  if (it == entities_.end() || ref.index >= it->second.entity.chain.size()) {
    fail(ErrorKind::kUnknownContext, "no context " + ref.to_string());
  }
  return it->second;
}

ContextRef Store::append_record(const std::optional<ContextRef>& parent,
                                const std::string& owner,
                                const std::function<ContextRecord(const ContextRef&)>& build) {
  std::lock_guard lock(mu_);
  Entry* tail = nullptr;
  if (parent) {
    auto it = entities_.find(parent->entity);
    if (it == entities_.end() || parent->index >= it->second.entity.chain.size()) {
      fail(ErrorKind::kUnknownParent, "no parent context " + parent->to_string());
    }
    ContextEntity& pe = it->second.entity;
    if (parent->index + 1 == pe.chain.size() && pe.chain.size() < options_.chunk &&
        pe.owner == owner) {
      tail = &it->second;
    }
  }
  if (tail) {
    const ContextRef ref{tail->entity.id, static_cast<std::uint32_t>(tail->entity.chain.size())};
    ContextRecord rec = build(ref);
    Writer w;
    w.u8(static_cast<std::uint8_t>(RecordType::kChainAppend));
    ValueCodec::put_ref(w, ref);
    ValueCodec::put_record(w, rec);
    backend_->append(w.out());
    tail->entity.chain.push_back(std::move(rec));
    ++contexts_;
    return ref;
  }
  ContextEntity e;
  do {
    e.id = options_.keys();
  } while (entities_.count(e.id));
  e.parent = parent;
  e.owner = owner;
  e.timestamp = options_.clock();
  e.software_version = options_.software_version;
  const ContextRef ref{e.id, 0};
  e.chain.push_back(build(ref));
  std::string payload(1, static_cast<char>(RecordType::kEntityOpen));
  payload += encode_entity(e);
  backend_->append(payload);
  order_.push_back(e.id);
  const std::string id = e.id;
  entities_.emplace(id, Entry{std::move(e), {}});
  ++contexts_;
  return ref;
}

ContextPtr Store::append(const ContextPtr& parent, const std::string& owner,
                         const std::function<ContextRecord(const ContextRef&)>& build) {
  std::optional<ContextRef> pref;
  if (parent) pref = parent->ref();
  return load(append_record(pref, owner, build));
}

ContextPtr Store::load(const ContextRef& ref) {
  std::lock_guard lock(mu_);
  return load_locked(ref);
}

ContextPtr Store::load_locked(const ContextRef& ref) {
  // Walk up to the nearest cached ancestor, then build downwards.
  std::vector<ContextRef> path;
  ContextPtr base;
  std::optional<ContextRef> cur = ref;
  while (cur) {
    const Entry& e = entry_locked(*cur);
    if (cur->index < e.cache.size() && e.cache[cur->index]) {
      base = e.cache[cur->index];
      break;
    }
    path.push_back(*cur);
    if (cur->index > 0) {
      cur = ContextRef{cur->entity, cur->index - 1};
    } else {
      cur = e.entity.parent;
    }
  }
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    Entry& e = entities_.at(it->entity);
    auto ctx = std::make_shared<const Context>(*it, base, e.entity.owner, e.entity.timestamp,
                                               e.entity.chain[it->index]);
    if (e.cache.size() <= it->index) e.cache.resize(it->index + 1);
    e.cache[it->index] = ctx;
    base = std::move(ctx);
  }
  return base;
}

bool Store::contains(const ContextRef& ref) {
  std::lock_guard lock(mu_);
  auto it = entities_.find(ref.entity);
  return it != entities_.end() && ref.index < it->second.entity.chain.size();
}

std::optional<ContextEntity> Store::entity(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = entities_.find(key);
  if (it == entities_.end()) return std::nullopt;
  return it->second.entity;
}

std::vector<std::string> Store::entity_keys() const {
  std::lock_guard lock(mu_);
  return order_;
}

std::size_t Store::context_count() const {
  std::lock_guard lock(mu_);
  return contexts_;
}

void Store::put(MetaRecord record) {
  std::lock_guard lock(mu_);
  Writer w;
  ValueCodec::put_meta(w, record);
  backend_->append(w.out());
  meta_.push_back(std::move(record));
}

std::vector<MetaRecord> Store::meta() const {
  std::lock_guard lock(mu_);
  return meta_;
}

std::string Store::image() const {
  std::lock_guard lock(mu_);
  return backend_->image();
}

std::string Store::digest() const {
  ensure_sodium();
  const std::string img = image();
  unsigned char out[crypto_generichash_BYTES];
  crypto_generichash(out, sizeof out, reinterpret_cast<const unsigned char*>(img.data()),
                     img.size(), nullptr, 0);
  return to_hex(out, sizeof out);
}

}  // namespace peerhol
