#pragma once

#include <cstdint>

namespace tokeval {

// SplitMix64. Fixed output sequence on every platform, which is what makes
// dropout runs reproducible independent of thread count or corpus sharding.
class SplitMix64 {
public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1): 53 random mantissa bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  uint64_t state_;
};

// Substream key for one pretoken: mixes (seed, document ordinal, pretoken
// ordinal) so that every pretoken draws from its own independent stream.
inline uint64_t substream_key(uint64_t seed, uint64_t doc, uint64_t ordinal) {
  SplitMix64 h(seed);
  uint64_t k = h.next() ^ (doc * 0xd1342543de82ef95ull);
  SplitMix64 h2(k);
  return h2.next() ^ (ordinal * 0xaf251af3b0f025b5ull);
}

inline SplitMix64 pretoken_rng(uint64_t seed, uint64_t doc, uint64_t ordinal) {
  return SplitMix64(substream_key(seed, doc, ordinal));
}

}  // namespace tokeval
