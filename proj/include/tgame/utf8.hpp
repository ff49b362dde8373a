#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// Entity offsets count Unicode code points; text is stored as UTF-8.
namespace tgame::utf8 {

inline bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

inline std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += !is_continuation(c);
  return n;
}

// Byte offset of code point `cp`; cp == length(s) maps to s.size().
// Returns npos when cp is past the end.
inline std::size_t byte_offset(std::string_view s, std::size_t cp) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (is_continuation(static_cast<unsigned char>(s[i]))) continue;
    if (seen == cp) return i;
    ++seen;
  }
  return seen == cp ? s.size() : std::string_view::npos;
}

// Code points [start, end); empty when out of range.
inline std::string substr(std::string_view s, std::size_t start, std::size_t end) {
  const auto b = byte_offset(s, start);
  const auto e = byte_offset(s, end);
  if (b == std::string_view::npos || e == std::string_view::npos || e < b) return {};
  return std::string(s.substr(b, e - b));
}

}  // namespace tgame::utf8
