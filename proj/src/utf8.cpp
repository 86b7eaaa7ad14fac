#include "tokeval/utf8.hpp"

#include "tokeval/errors.hpp"

namespace tokeval::utf8 {

std::optional<uint32_t> next_codepoint(std::string_view s, size_t& pos) {
  if (pos >= s.size()) {
    return std::nullopt;
  }
  const auto b0 = static_cast<uint8_t>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  auto cont = [&](size_t i) {
    return pos + i < s.size() && (static_cast<uint8_t>(s[pos + i]) & 0xc0) == 0x80;
  };
  auto tail = [&](size_t i) { return static_cast<uint32_t>(s[pos + i]) & 0x3f; };
  if ((b0 & 0xe0) == 0xc0) {
    if (!cont(1)) {
      return std::nullopt;
    }
    const uint32_t cp = ((b0 & 0x1fu) << 6) | tail(1);
    if (cp < 0x80) {  // overlong
      return std::nullopt;
    }
    pos += 2;
    return cp;
  }
  if ((b0 & 0xf0) == 0xe0) {
    if (!cont(1) || !cont(2)) {
      return std::nullopt;
    }
    const uint32_t cp = ((b0 & 0x0fu) << 12) | (tail(1) << 6) | tail(2);
    if (cp < 0x800 || (cp >= 0xd800 && cp <= 0xdfff)) {
      return std::nullopt;
    }
    pos += 3;
    return cp;
  }
  if ((b0 & 0xf8) == 0xf0) {
    if (!cont(1) || !cont(2) || !cont(3)) {
      return std::nullopt;
    }
    const uint32_t cp = ((b0 & 0x07u) << 18) | (tail(1) << 12) | (tail(2) << 6) | tail(3);
    if (cp < 0x10000 || cp > 0x10ffff) {
      return std::nullopt;
    }
    pos += 4;
    return cp;
  }
  return std::nullopt;
}

std::optional<std::vector<size_t>> codepoint_offsets(std::string_view s,
                                                     size_t* error_offset) {
  std::vector<size_t> offsets;
  offsets.reserve(s.size() + 1);
  size_t pos = 0;
  while (pos < s.size()) {
    offsets.push_back(pos);
    if (!next_codepoint(s, pos)) {
      if (error_offset != nullptr) {
        *error_offset = pos;
      }
      return std::nullopt;
    }
  }
  offsets.push_back(s.size());
  return offsets;
}

bool is_valid(std::string_view s) {
  size_t pos = 0;
  while (pos < s.size()) {
    if (!next_codepoint(s, pos)) {
      return false;
    }
  }
  return true;
}

size_t count_codepoints(std::string_view s) {
  size_t n = 0;
  size_t pos = 0;
  while (pos < s.size()) {
    if (!next_codepoint(s, pos)) {
      throw DataError("count_codepoints: invalid UTF-8 at byte " + std::to_string(pos));
    }
    ++n;
  }
  return n;
}

void append_codepoint(std::string& out, uint32_t cp) {
  if (cp <= 0x7f) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7ff) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp <= 0xffff) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

std::string encode_codepoint(uint32_t cp) {
  std::string out;
  append_codepoint(out, cp);
  return out;
}

std::vector<uint32_t> to_codepoints(std::string_view s) {
  std::vector<uint32_t> cps;
  cps.reserve(s.size());
  size_t pos = 0;
  while (pos < s.size()) {
    auto cp = next_codepoint(s, pos);
    if (!cp) {
      throw DataError("to_codepoints: invalid UTF-8 at byte " + std::to_string(pos));
    }
    cps.push_back(*cp);
  }
  return cps;
}

std::string from_codepoints(const std::vector<uint32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (uint32_t cp : cps) {
    append_codepoint(out, cp);
  }
  return out;
}

bool is_whitespace(uint32_t cp) {
  switch (cp) {
    case 0x09:
    case 0x0a:
    case 0x0b:
    case 0x0c:
    case 0x0d:
    case 0x20:
    case 0x85:
    case 0xa0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202f:
    case 0x205f:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200a;
  }
}

}  // namespace tokeval::utf8
