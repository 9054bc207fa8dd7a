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

#include <boost/multiprecision/cpp_int.hpp>

#include "codec.hpp"
#include "peerhol/script.hpp"

namespace peerhol {
namespace {

constexpr int kMaxDepth = 20'000;
constexpr std::uint8_t kEntityFormat = 1;

void check_depth(int depth) {
  if (depth > kMaxDepth) fail(ErrorKind::kCodecError, "record nests too deeply");
}

void put_key(Writer& w, const VersionKey& k) {
  w.str(k.owner);
  w.str(k.name);
  w.u64(k.version);
}

VersionKey get_key(Reader& r) {
  VersionKey k;
  k.owner = r.str();
  k.name = r.str();
  k.version = r.u64();
  return k;
}

}  // namespace

void ValueCodec::put_type(Writer& w, const Type& t) {
  switch (t.kind()) {
    case Type::Kind::kSet: w.u8(0); return;
    case Type::Kind::kProp: w.u8(1); return;
    case Type::Kind::kFun:
      w.u8(2);
      put_type(w, t.domain());
      put_type(w, t.codomain());
      return;
  }
}

Type ValueCodec::get_type(Reader& r, int depth) {
  check_depth(depth);
  switch (r.u8()) {
    case 0: return Type::set();
    case 1: return Type::prop();
    case 2: {
      Type d = get_type(r, depth + 1);
      return Type::fun(std::move(d), get_type(r, depth + 1));
    }
    default: fail(ErrorKind::kCodecError, "unknown type tag");
  }
}

void ValueCodec::put_term(Writer& w, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::kConst:
      w.u8(0);
      w.u8(static_cast<std::uint8_t>(t.const_id()));
      w.u8(t.instance() ? 1 : 0);
      if (t.instance()) put_type(w, *t.instance());
      return;
    case Term::Kind::kVar:
      w.u8(1);
      w.u32(t.index());
      return;
    case Term::Kind::kLam:
      w.u8(2);
      put_type(w, t.domain());
      w.str(t.hint());
      put_term(w, t.body());
      return;
    case Term::Kind::kApp:
      w.u8(3);
      put_term(w, t.fun());
      put_term(w, t.arg());
      return;
  }
}

Term ValueCodec::get_term(Reader& r, int depth) {
  check_depth(depth);
  switch (r.u8()) {
    case 0: {
      const std::uint8_t id = r.u8();
      if (id >= kNumConstants) fail(ErrorKind::kCodecError, "unknown constant");
      const auto cid = static_cast<ConstId>(id);
      if (r.u8() == 0) {
        if (const_info(cid).polymorphic) {
          fail(ErrorKind::kCodecError, "polymorphic constant without instance");
        }
        return Term::constant(cid);
      }
      Type inst = get_type(r, depth + 1);
      if (!is_valid_instance(cid, inst)) fail(ErrorKind::kCodecError, "bad instance type");
      return Term::constant(cid, std::move(inst));
    }
    case 1: return Term::var(r.u32());
    case 2: {
      Type d = get_type(r, depth + 1);
      std::string hint = r.str();
      return Term::lam(std::move(d), get_term(r, depth + 1), std::move(hint));
    }
    case 3: {
      Term f = get_term(r, depth + 1);
      return Term::app(std::move(f), get_term(r, depth + 1));
    }
    default: fail(ErrorKind::kCodecError, "unknown term tag");
  }
}

void ValueCodec::put_ref(Writer& w, const ContextRef& ref) {
  w.str(ref.entity);
  w.u32(ref.index);
}

ContextRef ValueCodec::get_ref(Reader& r) {
  ContextRef ref;
  ref.entity = r.str();
  ref.index = r.u32();
  if (ref.entity.empty()) fail(ErrorKind::kCodecError, "empty entity key");
  return ref;
}

// Tag bytes follow the order of Value::Tag.
void ValueCodec::put_value(Writer& w, const Value& v) {
  const Value::Tag tag = v.tag();
  w.u8(static_cast<std::uint8_t>(tag));
  switch (tag) {
    case Value::Tag::kTheorem:
      put_ref(w, v.theorem().context());
      put_term(w, v.theorem().proposition());
      return;
    case Value::Tag::kContext: put_ref(w, v.context()); return;
    case Value::Tag::kTerm:
      put_ref(w, v.term().home);
      put_term(w, v.term().term);
      return;
    case Value::Tag::kType: put_type(w, v.type()); return;
    case Value::Tag::kInt: w.str(v.integer().str()); return;
    case Value::Tag::kString: w.str(v.string()); return;
    case Value::Tag::kBool: w.u8(v.boolean() ? 1 : 0); return;
    case Value::Tag::kList:
    case Value::Tag::kVector:
    case Value::Tag::kSet:
      w.u32(static_cast<std::uint32_t>(v.items().size()));
      for (const Value& x : v.items()) put_value(w, x);
      return;
    case Value::Tag::kMap:
      w.u32(static_cast<std::uint32_t>(v.entries().size()));
      for (const auto& [k, x] : v.entries()) {
        put_value(w, k);
        put_value(w, x);
      }
      return;
    case Value::Tag::kFunction: {
      const Function& f = v.function();
      if (f.native) {
        w.u8(1);
        w.str(f.native->name);
      } else {
        w.u8(0);
        w.str(f.group->stmt->source);
        put_ref(w, f.group->def_context);
        w.u32(static_cast<std::uint32_t>(f.index));
      }
      w.u32(static_cast<std::uint32_t>(f.bound.size()));
      for (const Value& x : f.bound) put_value(w, x);
      return;
    }
  }
}

Value ValueCodec::get_value(Reader& r, int depth) {
  check_depth(depth);
  const std::uint8_t tag = r.u8();
  if (tag > static_cast<std::uint8_t>(Value::Tag::kFunction)) {
    fail(ErrorKind::kCodecError, "unknown value tag");
  }
  switch (static_cast<Value::Tag>(tag)) {
    case Value::Tag::kTheorem: {
      ContextRef ref = get_ref(r);
      return Value(Theorem(get_term(r, depth + 1), std::move(ref)));
    }
    case Value::Tag::kContext: return Value(get_ref(r));
    case Value::Tag::kTerm: {
      ContextRef ref = get_ref(r);
      return Value(TermValue{get_term(r, depth + 1), std::move(ref)});
    }
    case Value::Tag::kType: return Value(get_type(r, depth + 1));
    case Value::Tag::kInt: {
      const std::string digits = r.str();
      const std::size_t start = !digits.empty() && digits[0] == '-' ? 1 : 0;
      if (digits.size() == start ||
          digits.find_first_not_of("0123456789", start) != std::string::npos) {
        fail(ErrorKind::kCodecError, "malformed integer");
      }
      return Value(BigInt(digits));
    }
    case Value::Tag::kString: return Value(r.str());
    case Value::Tag::kBool: return Value(r.u8() != 0);
    case Value::Tag::kList:
    case Value::Tag::kVector:
    case Value::Tag::kSet: {
      const std::uint32_t n = r.count();
      Value::Items items;
      items.reserve(n);
      for (std::uint32_t i = 0; i < n; ++i) items.push_back(get_value(r, depth + 1));
      if (tag == static_cast<std::uint8_t>(Value::Tag::kList)) return Value::list(std::move(items));
      if (tag == static_cast<std::uint8_t>(Value::Tag::kVector)) {
        return Value::vector(std::move(items));
      }
      return Value::set(std::move(items));
    }
    case Value::Tag::kMap: {
      const std::uint32_t n = r.count();
      Value::Entries entries;
      for (std::uint32_t i = 0; i < n; ++i) {
        Value k = get_value(r, depth + 1);
        entries.emplace_back(std::move(k), get_value(r, depth + 1));
      }
      return Value::map(std::move(entries));
    }
    case Value::Tag::kFunction: {
      Function f;
      if (r.u8() == 1) {
        const std::string name = r.str();
        f.native = find_builtin(name);
        if (!f.native) fail(ErrorKind::kCodecError, "unknown builtin '" + name + "'");
      } else {
        const std::string source = r.str();
        ContextRef def_context = get_ref(r);
        f.index = r.u32();
        script::Block block;
        try {
          block = script::parse_script(source);
        } catch (const Error&) {
          fail(ErrorKind::kCodecError, "stored function source does not parse");
        }
        if (block.stmts.size() != 1 || block.stmts[0]->kind != script::Stmt::Kind::kDef ||
            f.index >= block.stmts[0]->defs.size()) {
          fail(ErrorKind::kCodecError, "stored function source is not a def group");
        }
        f.group = std::make_shared<const DefGroup>(
            DefGroup{block.stmts[0], nullptr, std::move(def_context)});
      }
      const std::uint32_t n = r.count();
      for (std::uint32_t i = 0; i < n; ++i) f.bound.push_back(get_value(r, depth + 1));
      return Value(std::move(f));
    }
  }
  fail(ErrorKind::kCodecError, "unknown value tag");
}

void ValueCodec::put_record(Writer& w, const ContextRecord& rec) {
  w.u8(static_cast<std::uint8_t>(rec.kind));
  w.u32(static_cast<std::uint32_t>(rec.constants.size()));
  for (const auto& [name, type] : rec.constants) {
    w.str(name);
    put_type(w, type);
  }
  w.u32(static_cast<std::uint32_t>(rec.assumptions.size()));
  for (const Term& a : rec.assumptions) put_term(w, a);
  w.u32(static_cast<std::uint32_t>(rec.bindings.size()));
  for (const auto& [name, v] : rec.bindings) {
    w.str(name);
    put_value(w, v);
  }
  w.u32(static_cast<std::uint32_t>(rec.unbound.size()));
  for (const auto& name : rec.unbound) w.str(name);
}

ContextRecord ValueCodec::get_record(Reader& r) {
  ContextRecord rec;
  const std::uint8_t kind = r.u8();
  if (kind > static_cast<std::uint8_t>(ContextKind::kImport)) {
    fail(ErrorKind::kCodecError, "unknown context kind");
  }
  rec.kind = static_cast<ContextKind>(kind);
  for (std::uint32_t n = r.count(); n > 0; --n) {
    std::string name = r.str();
    rec.constants.emplace_back(std::move(name), get_type(r));
  }
  for (std::uint32_t n = r.count(); n > 0; --n) rec.assumptions.push_back(get_term(r));
  for (std::uint32_t n = r.count(); n > 0; --n) {
    std::string name = r.str();
    rec.bindings.emplace_back(std::move(name), get_value(r));
  }
  for (std::uint32_t n = r.count(); n > 0; --n) rec.unbound.push_back(r.str());
  return rec;
}

void ValueCodec::put_meta(Writer& w, const MetaRecord& m) {
  std::visit(
      [&](const auto& rec) {
        using T = std::decay_t<decltype(rec)>;
        if constexpr (std::is_same_v<T, ChronicleVersionRecord>) {
          w.u8(static_cast<std::uint8_t>(RecordType::kChronicleVersion));
          put_key(w, rec.key);
          w.u32(static_cast<std::uint32_t>(rec.owned.size()));
          for (const auto& ref : rec.owned) put_ref(w, ref);
          put_ref(w, rec.final_context);
          w.str(rec.script);
          w.u32(static_cast<std::uint32_t>(rec.assignment.size()));
          for (const auto& k : rec.assignment) put_key(w, k);
          w.i64(rec.timestamp);
        } else if constexpr (std::is_same_v<T, ChronicleStatusRecord>) {
          w.u8(static_cast<std::uint8_t>(RecordType::kChronicleStatus));
          w.str(rec.owner);
          w.str(rec.name);
          w.u8(rec.regeneration_failed ? 1 : 0);
          w.str(rec.message);
          w.i64(rec.timestamp);
        } else if constexpr (std::is_same_v<T, UserRecord>) {
          w.u8(static_cast<std::uint8_t>(RecordType::kUser));
          w.str(rec.login);
          w.str(rec.password_hash);
          w.i64(rec.timestamp);
        } else if constexpr (std::is_same_v<T, SessionOpenRecord>) {
          w.u8(static_cast<std::uint8_t>(RecordType::kSessionOpen));
          w.str(rec.token);
          w.str(rec.login);
          w.i64(rec.timestamp);
        } else {
          w.u8(static_cast<std::uint8_t>(RecordType::kSessionClose));
          w.str(rec.token);
          w.i64(rec.timestamp);
        }
      },
      m);
}

MetaRecord ValueCodec::get_meta(std::uint8_t type, Reader& r) {
  switch (static_cast<RecordType>(type)) {
    case RecordType::kChronicleVersion: {
      ChronicleVersionRecord rec;
      rec.key = get_key(r);
      for (std::uint32_t n = r.count(); n > 0; --n) rec.owned.push_back(get_ref(r));
      rec.final_context = get_ref(r);
      rec.script = r.str();
      for (std::uint32_t n = r.count(); n > 0; --n) rec.assignment.push_back(get_key(r));
      rec.timestamp = r.i64();
      return rec;
    }
    case RecordType::kChronicleStatus: {
      ChronicleStatusRecord rec;
      rec.owner = r.str();
      rec.name = r.str();
      rec.regeneration_failed = r.u8() != 0;
      rec.message = r.str();
      rec.timestamp = r.i64();
      return rec;
    }
    case RecordType::kUser: {
      UserRecord rec;
      rec.login = r.str();
      rec.password_hash = r.str();
      rec.timestamp = r.i64();
      return rec;
    }
    case RecordType::kSessionOpen: {
      SessionOpenRecord rec;
      rec.token = r.str();
      rec.login = r.str();
      rec.timestamp = r.i64();
      return rec;
    }
    case RecordType::kSessionClose: {
      SessionCloseRecord rec;
      rec.token = r.str();
      rec.timestamp = r.i64();
      return rec;
    }
    default: break;
  }
  fail(ErrorKind::kCodecError, "unknown record type " + std::to_string(type));
}

std::string encode_entity(const ContextEntity& e) {
  if (e.chain.empty()) fail(ErrorKind::kCodecError, "entity with an empty chain");
  Writer w;
  w.u8(kEntityFormat);
  w.str(e.id);
  w.u8(e.parent ? 1 : 0);
  if (e.parent) ValueCodec::put_ref(w, *e.parent);
  w.str(e.owner);
  w.i64(e.timestamp);
  w.str(e.software_version);
  w.u32(static_cast<std::uint32_t>(e.chain.size()));
  for (const auto& rec : e.chain) ValueCodec::put_record(w, rec);
  return std::move(w.out());
}

ContextEntity decode_entity(std::string_view bytes) {
  try {
    Reader r(bytes);
    const std::uint8_t format = r.u8();
    if (format != kEntityFormat) {
      fail(ErrorKind::kCodecError, "unsupported entity format version " + std::to_string(format));
    }
    ContextEntity e;
    e.id = r.str();
    if (e.id.empty()) fail(ErrorKind::kCodecError, "empty entity key");
    if (r.u8() != 0) e.parent = ValueCodec::get_ref(r);
    e.owner = r.str();
    e.timestamp = r.i64();
    e.software_version = r.str();
    for (std::uint32_t n = r.count(); n > 0; --n) e.chain.push_back(ValueCodec::get_record(r));
    if (e.chain.empty()) fail(ErrorKind::kCodecError, "entity with an empty chain");
    r.expect_done();
    return e;
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::kCodecError) throw;
    throw Error(ErrorKind::kCodecError, err.what());
  }
}

}  // namespace peerhol
