#include "tokeval/core.hpp"

#include <algorithm>
#include <cmath>

#include "tokeval/bytemap.hpp"
#include "tokeval/errors.hpp"
#include "tokeval/utf8.hpp"

namespace tokeval {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kLongestPrefix: return "longest-prefix";
    case Method::kLongestSuffix: return "longest-suffix";
    case Method::kLongestToken: return "longest-token";
    case Method::kLeastTokens: return "least-tokens";
    case Method::kLikelihood: return "likelihood";
    case Method::kMerges: return "merges";
    case Method::kDropoutMerges: return "dropout-merges";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

Vocabulary Vocabulary::build(std::vector<std::pair<std::string, std::optional<double>>> entries,
                             Marker marker, bool byte_level) {
  if (entries.empty()) throw DataError("vocabulary must contain at least one token");
  Vocabulary v;
  v.marker_ = marker;
  v.byte_level_ = byte_level;
  v.by_id_.reserve(entries.size());
  v.entries_.reserve(entries.size());
  for (auto& [token, score] : entries) {
    if (token.empty()) throw DataError("vocabulary token must be non-empty");
    if (!utf8::is_valid(token)) throw DataError("vocabulary token is not valid UTF-8");
    if (score && !std::isfinite(*score)) {
      throw DataError("score for token '" + token + "' is not finite");
    }
    uint32_t id = static_cast<uint32_t>(v.by_id_.size());
    auto [it, inserted] = v.entries_.emplace(token, Entry{id, score});
    if (!inserted) throw DataError("duplicate vocabulary token '" + token + "'");
    v.max_token_cps_ = std::max(v.max_token_cps_, utf8::count_codepoints(token));
    if (score) ++v.scored_count_;
    v.by_id_.push_back(std::move(token));
  }
  return v;
}

const Vocabulary::Entry* Vocabulary::find(std::string_view token) const {
  auto it = entries_.find(token);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<double> Vocabulary::score(std::string_view token) const {
  const Entry* e = find(token);
  return e ? e->score : std::nullopt;
}

MergeTable MergeTable::build(std::vector<Rule> rules, const Vocabulary& vocab) {
  MergeTable t;
  t.rules_.reserve(rules.size());
  for (auto& rule : rules) {
    if (rule.left.empty() || rule.right.empty()) {
      throw DataError("merge rule sides must be non-empty");
    }
    std::string merged = rule.left + rule.right;
    if (!vocab.contains(merged)) {
      throw DataError("merge rule '" + rule.left + " " + rule.right + "' produces '" + merged +
                      "' which is not a vocabulary token");
    }
    int r = static_cast<int>(t.rules_.size());
    auto& by_right = t.ranks_[rule.left];
    auto [it, inserted] = by_right.emplace(rule.right, r);
    if (!inserted) {
      throw DataError("duplicate merge rule '" + rule.left + " " + rule.right + "'");
    }
    t.rules_.push_back(std::move(rule));
  }
  return t;
}

int MergeTable::rank(std::string_view left, std::string_view right) const {
  auto it = ranks_.find(left);
  if (it == ranks_.end()) return -1;
  auto jt = it->second.find(right);
  return jt == it->second.end() ? -1 : jt->second;
}

std::string join(const Segmentation& seg) {
  std::string out;
  for (const auto& t : seg.tokens) out += t;
  return out;
}

std::vector<std::string> display_tokens(const Segmentation& seg, std::string_view unk_literal) {
  std::vector<std::string> out = seg.tokens;
  for (uint32_t idx : seg.unknown) {
    if (idx < out.size()) out[idx] = std::string(unk_literal);
  }
  return out;
}

bool same_tokens(const Segmentation& a, const Segmentation& b) {
  return a.tokens == b.tokens && a.unknown == b.unknown;
}

namespace {

// Code-point lengths of each token after marker stripping, all markers
// validated to sit only at the start of the first token.
std::vector<size_t> stripped_lengths(const Segmentation& seg, Marker marker,
                                     uint32_t metaspace_cp) {
  std::vector<size_t> lengths;
  lengths.reserve(seg.tokens.size());

  if (marker == Marker::kByteLevel) {
    // Tokens are byte-image symbols; decode back to raw bytes, strip one
    // leading space byte from the first token, then count characters while
    // checking that every token boundary lands on a character boundary.
    std::string bytes;
    std::vector<size_t> ends;  // byte offsets of token ends within `bytes`
    for (size_t i = 0; i < seg.tokens.size(); ++i) {
      std::string piece;
      try {
        piece = bytemap::decode(seg.tokens[i]);
      } catch (const DataError& e) {
        throw SegmentationError(std::string("token is not a byte-image sequence: ") + e.what());
      }
      if (i == 0 && !piece.empty() && piece.front() == ' ') piece.erase(piece.begin());
      if (piece.find(' ') != std::string::npos) {
        throw SegmentationError("space marker inside a word");
      }
      bytes += piece;
      ends.push_back(bytes.size());
    }
    auto offsets = utf8::codepoint_offsets(bytes);
    if (!offsets) throw SegmentationError("decoded bytes are not valid UTF-8");
    // offsets->at(k) = byte offset of character k; back() == bytes.size().
    size_t prev_end = 0;
    for (size_t end : ends) {
      auto it = std::lower_bound(offsets->begin(), offsets->end(), end);
      if (it == offsets->end() || *it != end) {
        throw SegmentationError("token boundary splits a multi-byte character");
      }
      size_t char_end = static_cast<size_t>(it - offsets->begin());
      lengths.push_back(char_end - prev_end);
      prev_end = char_end;
    }
    return lengths;
  }

  for (size_t i = 0; i < seg.tokens.size(); ++i) {
    const std::string& tok = seg.tokens[i];
    size_t pos = 0;
    size_t n = 0;
    bool first_cp = true;
    while (pos < tok.size()) {
      auto cp = utf8::next_codepoint(tok, pos);
      if (!cp) throw SegmentationError("token is not valid UTF-8");
      if (marker == Marker::kMetaspace && *cp == metaspace_cp) {
        if (i != 0 || !first_cp) throw SegmentationError("marker inside a word");
      } else {
        ++n;
      }
      first_cp = false;
    }
    lengths.push_back(n);
  }
  return lengths;
}

}  // namespace

BoundarySet boundaries(const Segmentation& seg, Marker marker, uint32_t metaspace_cp) {
  BoundarySet out;
  std::vector<size_t> lengths = stripped_lengths(seg, marker, metaspace_cp);
  size_t total = 0;
  for (size_t len : lengths) total += len;
  size_t cum = 0;
  for (size_t i = 0; i + 1 < lengths.size(); ++i) {
    cum += lengths[i];
    if (cum == 0 || cum >= total) continue;  // a bare-marker edge token splits nothing
    if (!out.positions.empty() && out.positions.back() == cum) continue;
    out.positions.push_back(static_cast<uint32_t>(cum));
  }
  return out;
}

BoundarySet gold_boundaries(const std::vector<std::string>& morphs) {
  BoundarySet out;
  size_t cum = 0;
  for (size_t i = 0; i + 1 < morphs.size(); ++i) {
    cum += utf8::count_codepoints(morphs[i]);
    if (cum == 0) continue;
    if (!out.positions.empty() && out.positions.back() == cum) continue;
    out.positions.push_back(static_cast<uint32_t>(cum));
  }
  return out;
}

}  // namespace tokeval
