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

#ifndef PEERHOL_SRC_CODEC_HPP_
#define PEERHOL_SRC_CODEC_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "peerhol/context.hpp"
#include "peerhol/error.hpp"
#include "peerhol/store.hpp"

namespace peerhol {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void raw(std::string_view s) { out_.append(s); }
  std::string& out() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= std::uint32_t{static_cast<std::uint8_t>(in_[pos_++])} << (8 * i);
    }
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= std::uint64_t{static_cast<std::uint8_t>(in_[pos_++])} << (8 * i);
    }
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  // Element count, sanity checked against the remaining bytes.
  std::uint32_t count() {
    const std::uint32_t n = u32();
    if (n > in_.size() - pos_) fail(ErrorKind::kCodecError, "corrupt element count");
    return n;
  }
  bool done() const { return pos_ == in_.size(); }
  void expect_done() const {
    if (!done()) fail(ErrorKind::kCodecError, "trailing bytes after record");
  }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) fail(ErrorKind::kCodecError, "truncated record");
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

class ValueCodec {
 public:
  static void put_type(Writer& w, const Type& t);
  static Type get_type(Reader& r, int depth = 0);
  static void put_term(Writer& w, const Term& t);
  static Term get_term(Reader& r, int depth = 0);
  static void put_ref(Writer& w, const ContextRef& ref);
  static ContextRef get_ref(Reader& r);
  static void put_value(Writer& w, const Value& v);
  static Value get_value(Reader& r, int depth = 0);
  static void put_record(Writer& w, const ContextRecord& rec);
  static ContextRecord get_record(Reader& r);
  static void put_meta(Writer& w, const MetaRecord& m);
  static MetaRecord get_meta(std::uint8_t type, Reader& r);
};

// Payload type bytes of the store log.
enum class RecordType : std::uint8_t {
  kEntityOpen = 1,
  kChainAppend = 2,
  kChronicleVersion = 3,
  kChronicleStatus = 4,
  kUser = 5,
  kSessionOpen = 6,
  kSessionClose = 7,
};

}  // namespace peerhol

#endif  // PEERHOL_SRC_CODEC_HPP_
