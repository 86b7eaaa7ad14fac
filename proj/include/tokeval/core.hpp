#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tokeval {

// Word-boundary convention carried by a vocabulary's tokens.
enum class Marker {
  kNone,
  kMetaspace,  // word-initial tokens start with the metaspace character
  kByteLevel,  // tokens are byte-image symbols; word-initial ones start with
               // the image of the space byte
};

// The seven inference methods.
enum class Method {
  kLongestPrefix,
  kLongestSuffix,
  kLongestToken,
  kLeastTokens,
  kLikelihood,
  kMerges,
  kDropoutMerges,
};

inline constexpr Method kAllMethods[] = {
    Method::kLongestPrefix, Method::kLongestSuffix, Method::kLongestToken,
    Method::kLeastTokens,   Method::kLikelihood,    Method::kMerges,
    Method::kDropoutMerges,
};

// "longest-prefix", "least-tokens", ... as used on the command line and in
// reports.
std::string_view method_name(Method m);

// Throws ConfigError on an unknown name.
Method parse_method(std::string_view name);

// The metaspace marker (U+2581) and the byte-level image of the space byte
// (U+0120), as UTF-8.
inline constexpr uint32_t kMetaspaceCp = 0x2581;
inline constexpr uint32_t kByteLevelSpaceCp = 0x0120;

struct TransparentStringHash {
  using is_transparent = void;
  size_t operator()(std::string_view sv) const noexcept {
    return std::hash<std::string_view>{}(sv);
  }
  size_t operator()(const std::string& s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

// Token inventory with optional per-token log-likelihood scores. Immutable
// after construction; ids are assigned contiguously from 0 in entry order.
class Vocabulary {
public:
  struct Entry {
    uint32_t id;
    std::optional<double> score;  // log domain
  };

  Vocabulary() = default;

  // Validates: tokens non-empty, unique, valid UTF-8; scores finite.
  static Vocabulary build(std::vector<std::pair<std::string, std::optional<double>>> entries,
                          Marker marker = Marker::kNone, bool byte_level = false);

  bool contains(std::string_view token) const { return entries_.count(token) > 0; }
  const Entry* find(std::string_view token) const;
  std::optional<double> score(std::string_view token) const;

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // True when every token carries a score (the likelihood method's
  // precondition).
  bool fully_scored() const { return scored_count_ == entries_.size() && !entries_.empty(); }
  bool any_scored() const { return scored_count_ > 0; }

  // Longest token length, in code points.
  size_t max_token_cps() const { return max_token_cps_; }

  // Tokens in id order.
  const std::vector<std::string>& tokens_by_id() const { return by_id_; }

  Marker marker() const { return marker_; }
  bool byte_level() const { return byte_level_; }

private:
  std::unordered_map<std::string, Entry, TransparentStringHash, std::equal_to<>> entries_;
  std::vector<std::string> by_id_;
  size_t scored_count_ = 0;
  size_t max_token_cps_ = 0;
  Marker marker_ = Marker::kNone;
  bool byte_level_ = false;
};

// Ordered BPE merge rules; rank = list position, 0 learnt first.
class MergeTable {
public:
  struct Rule {
    std::string left;
    std::string right;
  };

  MergeTable() = default;

  // Validates against the companion vocabulary: left+right must be a token,
  // and (left, right) pairs must be unique.
  static MergeTable build(std::vector<Rule> rules, const Vocabulary& vocab);

  // Rank of (left, right), or -1 when the pair is not a rule.
  int rank(std::string_view left, std::string_view right) const;

  size_t size() const { return rules_.size(); }
  const std::vector<Rule>& rules() const { return rules_; }

private:
  std::vector<Rule> rules_;
  // left -> right -> rank
  std::unordered_map<std::string,
                     std::unordered_map<std::string, int, TransparentStringHash, std::equal_to<>>,
                     TransparentStringHash, std::equal_to<>>
      ranks_;
};

// One pretokenizer output unit. `doc` and `ordinal` key the RNG substream
// used by dropout and identify the pretoken in diagnostics.
struct Pretoken {
  std::string surface;
  uint64_t doc = 0;
  uint64_t ordinal = 0;
};

// An ordered covering of one pretoken. Joining `tokens` always reproduces
// the surface exactly; positions listed in `unknown` are fallback pieces
// that carry their covered characters but are not vocabulary tokens.
struct Segmentation {
  std::vector<std::string> tokens;
  std::vector<uint32_t> unknown;  // ascending indices into tokens
  Method method = Method::kLongestPrefix;

  size_t size() const { return tokens.size(); }
  bool has_unknown() const { return !unknown.empty(); }
};

std::string join(const Segmentation& seg);

// Tokens as rendered in output: fallback pieces replaced by `unk_literal`.
std::vector<std::string> display_tokens(const Segmentation& seg,
                                        std::string_view unk_literal = "<unk>");

bool same_tokens(const Segmentation& a, const Segmentation& b);

// Internal split positions of a word, counted in code points of the
// marker-stripped word. Empty for a single-token word.
struct BoundarySet {
  std::vector<uint32_t> positions;  // sorted ascending, 0 < p < word length

  bool operator==(const BoundarySet&) const = default;
};

// Cumulative token-end offsets, final offset excluded. The marker is
// stripped before offsets are counted; byte-level segmentations are decoded
// back to characters first. Throws SegmentationError when the marker appears
// anywhere but the start of the first token, or when a byte-level token
// boundary falls inside a multi-byte character.
BoundarySet boundaries(const Segmentation& seg, Marker marker,
                       uint32_t metaspace_cp = kMetaspaceCp);

// Boundary set of a gold analysis: cumulative morph lengths in code points.
BoundarySet gold_boundaries(const std::vector<std::string>& morphs);

}  // namespace tokeval
