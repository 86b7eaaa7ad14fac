#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tokeval/core.hpp"

namespace tokeval {

// What segment() does when it cannot cover a character with any token.
enum class Fallback {
  kUnk,    // emit a fallback piece covering one character and continue
  kError,  // throw SegmentationError naming the character offset
};

std::string_view fallback_name(Fallback f);
Fallback parse_fallback(std::string_view name);

struct EngineConfig {
  Method method = Method::kLongestPrefix;
  double dropout_p = 0.1;  // dropout-merges only
  uint64_t seed = 0;
  Fallback fallback = Fallback::kUnk;
};

// Greedy left-to-right: repeatedly emit the longest vocabulary token that
// prefixes the remaining surface.
Segmentation segment_longest_prefix(const Vocabulary& v, const Pretoken& w,
                                    Fallback fb = Fallback::kUnk);

// Greedy right-to-left mirror; tokens are returned in left-to-right order.
Segmentation segment_longest_suffix(const Vocabulary& v, const Pretoken& w,
                                    Fallback fb = Fallback::kUnk);

// Emits the longest vocabulary token occurring anywhere in the surface
// (leftmost on ties), then recurses on the left and right remainders.
Segmentation segment_longest_token(const Vocabulary& v, const Pretoken& w,
                                   Fallback fb = Fallback::kUnk);

// Minimum-cardinality segmentation; among minimal solutions, scanning left
// to right, the longest token wins at each position.
Segmentation segment_least_tokens(const Vocabulary& v, const Pretoken& w,
                                  Fallback fb = Fallback::kUnk);

// Maximizes the sum of token log-scores; ties broken by fewer tokens, then
// longest-token-first from the left. Requires a fully scored vocabulary.
Segmentation segment_likelihood(const Vocabulary& v, const Pretoken& w,
                                Fallback fb = Fallback::kUnk);

// Ranked merge application from the base-symbol sequence. Each round
// enumerates adjacent-pair occurrences matching a rule; with p > 0 each
// occurrence is independently dropped with probability p (draws come from
// the pretoken's RNG substream, left to right); the surviving occurrence
// with the lowest rank (leftmost on ties) is applied; rounds repeat until
// no occurrence survives. p = 0 is deterministic; p = 1 yields base symbols.
Segmentation segment_merges(const Vocabulary& v, const MergeTable& m, const Pretoken& w,
                            double p = 0.0, uint64_t seed = 0, Fallback fb = Fallback::kUnk);

// Dispatch on cfg.method. Throws ConfigError when the method's resources
// are missing (merge table, full scores) or dropout_p is outside [0,1].
Segmentation segment(const EngineConfig& cfg, const Vocabulary& v, const MergeTable* m,
                     const Pretoken& w);

// Why `method` cannot run against these resources, or empty when it can.
std::optional<std::string> inapplicable_reason(Method method, const Vocabulary& v,
                                               bool has_merges);

}  // namespace tokeval
