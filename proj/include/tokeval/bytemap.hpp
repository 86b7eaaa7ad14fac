#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tokeval::bytemap {

// Bijection between the 256 byte values and 256 printable code points.
// Printable single-byte ranges (33..126, 161..172, 174..255) map to
// themselves; the remaining 68 bytes map, in ascending byte order, to
// code points 256..323. The space byte (32) therefore maps to 288.

uint32_t byte_to_cp(uint8_t b);

// Inverse; empty when cp is not in the image.
std::optional<uint8_t> cp_to_byte(uint32_t cp);

// Raw bytes -> UTF-8 string of image code points.
std::string encode(std::string_view bytes);

// UTF-8 string of image code points -> raw bytes. Throws DataError on
// invalid UTF-8 or a code point outside the image.
std::string decode(std::string_view symbols);

}  // namespace tokeval::bytemap
