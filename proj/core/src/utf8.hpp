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

#ifndef PEERHOL_SRC_UTF8_HPP_
#define PEERHOL_SRC_UTF8_HPP_

#include <cstddef>
#include <string>
#include <string_view>

namespace peerhol::utf8 {

inline constexpr char32_t kInvalid = 0xFFFD;

// Decodes the code point at `pos` and advances `pos` past it.
inline char32_t decode(std::string_view s, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  std::size_t len = 1;
  char32_t cp = b0;
  if (b0 >= 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else if (b0 >= 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if (b0 >= 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if (b0 >= 0x80) {
    ++pos;
    return kInvalid;
  }
  if (pos + len > s.size()) {
    pos = s.size();
    return kInvalid;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      pos += i;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += len;
  return cp;
}

inline std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < s.size(); ++n) decode(s, pos);
  return n;
}

inline char32_t peek(std::string_view s, std::size_t pos) {
  return pos < s.size() ? decode(s, pos) : 0;
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// λ, ε and 𝒫 are letters in Unicode but symbols in the logic.
inline bool is_reserved_symbol(char32_t cp) {
  return cp == 0x03BB || cp == 0x03B5 || cp == 0x1D4AB;
}

inline bool is_letter(char32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
  if (cp < 0x80 || is_reserved_symbol(cp)) return false;
  return (cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7) ||
         (cp >= 0x0370 && cp <= 0x03FF) ||  // Greek
         (cp >= 0x0400 && cp <= 0x04FF) ||  // Cyrillic
         (cp >= 0x1D400 && cp <= 0x1D7CB) ||  // math alphanumerics
         (cp >= 0x2100 && cp <= 0x214F && cp != 0x2118);  // letterlike
}

inline bool is_digit(char32_t cp) {
  return (cp >= '0' && cp <= '9') || (cp >= 0x2080 && cp <= 0x2089);
}

inline bool is_ident_continue(char32_t cp) {
  return is_letter(cp) || is_digit(cp) || cp == '_';
}

inline bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0x00A0;
}

}  // namespace peerhol::utf8

#endif  // PEERHOL_SRC_UTF8_HPP_
