#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tokeval/core.hpp"

namespace tokeval {

enum class PretokMode {
  kPlain,
  kMetaspace,  // whitespace split, marker prefix on word-initial pretokens
  kByteLevel,  // whitespace split, byte-image representation, space prefix
};

std::string_view pretok_mode_name(PretokMode mode);
PretokMode parse_pretok_mode(std::string_view name);

struct PretokenizerConfig {
  PretokMode mode = PretokMode::kPlain;
  uint32_t marker_cp = kMetaspaceCp;
  // Whether the first pretoken of a document is treated as following
  // whitespace (and so carries the marker / space prefix).
  bool mark_first = true;
};

// Splits `text` on Unicode whitespace runs and applies the configured
// representation. Ordinals are assigned in reading order starting at 0.
// Throws DataError on invalid UTF-8.
std::vector<Pretoken> pretokenize(std::string_view text, const PretokenizerConfig& cfg,
                                  uint64_t doc = 0);

// The marker convention a pretok mode imposes on segmentations.
Marker marker_for(PretokMode mode);

}  // namespace tokeval
