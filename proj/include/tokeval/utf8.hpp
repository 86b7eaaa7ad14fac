#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tokeval::utf8 {

// Decodes one code point starting at byte `pos`. Returns the code point and
// advances `pos` past it. Strict: overlong forms, surrogates, values above
// U+10FFFF, stray continuation bytes and truncated sequences all yield
// nullopt with `pos` unchanged.
std::optional<uint32_t> next_codepoint(std::string_view s, size_t& pos);

// Byte offsets of each code point boundary: offsets[i] is where code point i
// starts, offsets.back() == s.size(). Returns nullopt at the first invalid
// byte, reporting its offset through `error_offset` when non-null.
std::optional<std::vector<size_t>> codepoint_offsets(std::string_view s,
                                                     size_t* error_offset = nullptr);

bool is_valid(std::string_view s);

// Number of code points; input must be valid UTF-8.
size_t count_codepoints(std::string_view s);

void append_codepoint(std::string& out, uint32_t cp);
std::string encode_codepoint(uint32_t cp);

std::vector<uint32_t> to_codepoints(std::string_view s);
std::string from_codepoints(const std::vector<uint32_t>& cps);

// Unicode White_Space property.
bool is_whitespace(uint32_t cp);

}  // namespace tokeval::utf8
