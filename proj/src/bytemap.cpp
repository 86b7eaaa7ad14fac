#include "tokeval/bytemap.hpp"

#include <array>

#include "tokeval/errors.hpp"
#include "tokeval/utf8.hpp"

namespace tokeval::bytemap {
namespace {

struct Tables {
  std::array<uint32_t, 256> to_cp{};
  std::array<int16_t, 324> to_byte{};  // -1 = not in image

  Tables() {
    to_byte.fill(-1);
    uint32_t next_cp = 256;
    for (int b = 0; b < 256; ++b) {
      bool printable = (b >= 33 && b <= 126) || (b >= 161 && b <= 172) || (b >= 174 && b <= 255);
      uint32_t cp = printable ? static_cast<uint32_t>(b) : next_cp++;
      to_cp[static_cast<size_t>(b)] = cp;
      to_byte[cp] = static_cast<int16_t>(b);
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

uint32_t byte_to_cp(uint8_t b) { return tables().to_cp[b]; }

std::optional<uint8_t> cp_to_byte(uint32_t cp) {
  if (cp >= tables().to_byte.size()) return std::nullopt;
  int16_t b = tables().to_byte[cp];
  if (b < 0) return std::nullopt;
  return static_cast<uint8_t>(b);
}

std::string encode(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char b : bytes) utf8::append_codepoint(out, byte_to_cp(b));
  return out;
}

std::string decode(std::string_view symbols) {
  std::string out;
  out.reserve(symbols.size());
  size_t pos = 0;
  while (pos < symbols.size()) {
    auto cp = utf8::next_codepoint(symbols, pos);
    if (!cp) throw DataError("byte-image string is not valid UTF-8");
    auto b = cp_to_byte(*cp);
    if (!b) throw DataError("code point U+" + std::to_string(*cp) + " is not a byte image");
    out.push_back(static_cast<char>(*b));
  }
  return out;
}

}  // namespace tokeval::bytemap
