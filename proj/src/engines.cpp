#include "tokeval/engines.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "tokeval/errors.hpp"
#include "tokeval/rng.hpp"
#include "tokeval/utf8.hpp"

namespace tokeval {

std::string_view fallback_name(Fallback f) {
  return f == Fallback::kUnk ? "unk" : "error";
}

Fallback parse_fallback(std::string_view name) {
  if (name == "unk") return Fallback::kUnk;
  if (name == "error") return Fallback::kError;
  throw ConfigError("unknown fallback policy '" + std::string(name) + "'");
}

namespace {

constexpr uint32_t kInf = std::numeric_limits<uint32_t>::max();

// Code-point view of a pretoken surface.
struct Cps {
  std::string_view s;
  std::vector<size_t> off;  // off[i] = byte offset of code point i; off[n] = size

  size_t n() const { return off.size() - 1; }
  std::string_view slice(size_t i, size_t j) const { return s.substr(off[i], off[j] - off[i]); }
};

Cps decode(const Pretoken& w) {
  auto off = utf8::codepoint_offsets(w.surface);
  if (!off) throw DataError("pretoken surface is not valid UTF-8");
  return Cps{w.surface, std::move(*off)};
}

struct Builder {
  std::vector<std::string> tokens;
  std::vector<uint32_t> unknown;

  void add(std::string_view piece, bool unk) {
    if (unk) unknown.push_back(static_cast<uint32_t>(tokens.size()));
    tokens.emplace_back(piece);
  }
  Segmentation finish(Method m) {
    Segmentation s;
    s.tokens = std::move(tokens);
    s.unknown = std::move(unknown);
    s.method = m;
    return s;
  }
};

[[noreturn]] void no_token_error(size_t cp_offset) {
  throw SegmentationError("no vocabulary token matches at character offset " +
                          std::to_string(cp_offset));
}

}  // namespace

Segmentation segment_longest_prefix(const Vocabulary& v, const Pretoken& w, Fallback fb) {
  Cps cps = decode(w);
  Builder b;
  const size_t maxlen = v.max_token_cps();
  size_t i = 0;
  while (i < cps.n()) {
    size_t found = 0;
    for (size_t len = std::min(maxlen, cps.n() - i); len >= 1; --len) {
      if (v.contains(cps.slice(i, i + len))) {
        found = len;
        break;
      }
    }
    if (found > 0) {
      b.add(cps.slice(i, i + found), false);
      i += found;
    } else if (fb == Fallback::kUnk) {
      b.add(cps.slice(i, i + 1), true);
      i += 1;
    } else {
      no_token_error(i);
    }
  }
  return b.finish(Method::kLongestPrefix);
}

Segmentation segment_longest_suffix(const Vocabulary& v, const Pretoken& w, Fallback fb) {
  Cps cps = decode(w);
  const size_t maxlen = v.max_token_cps();
  std::vector<std::pair<std::string, bool>> rev;  // right-to-left pieces
  size_t j = cps.n();
  while (j > 0) {
    size_t found = 0;
    for (size_t len = std::min(maxlen, j); len >= 1; --len) {
      if (v.contains(cps.slice(j - len, j))) {
        found = len;
        break;
      }
    }
    if (found > 0) {
      rev.emplace_back(std::string(cps.slice(j - found, j)), false);
      j -= found;
    } else if (fb == Fallback::kUnk) {
      rev.emplace_back(std::string(cps.slice(j - 1, j)), true);
      j -= 1;
    } else {
      no_token_error(j - 1);
    }
  }
  Builder b;
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) b.add(it->first, it->second);
  return b.finish(Method::kLongestSuffix);
}

Segmentation segment_longest_token(const Vocabulary& v, const Pretoken& w, Fallback fb) {
  Cps cps = decode(w);
  Builder b;
  const size_t maxlen = v.max_token_cps();

  // Longest match in [lo, hi), leftmost on length ties; remainders recurse.
  std::function<void(size_t, size_t)> go = [&](size_t lo, size_t hi) {
    if (lo >= hi) return;
    for (size_t len = std::min(maxlen, hi - lo); len >= 1; --len) {
      for (size_t s = lo; s + len <= hi; ++s) {
        if (!v.contains(cps.slice(s, s + len))) continue;
        go(lo, s);
        b.add(cps.slice(s, s + len), false);
        go(s + len, hi);
        return;
      }
    }
    if (fb == Fallback::kError) no_token_error(lo);
    for (size_t i = lo; i < hi; ++i) b.add(cps.slice(i, i + 1), true);
  };
  go(0, cps.n());
  return b.finish(Method::kLongestToken);
}

namespace {

// Shared driver for the two dynamic programs. CostT orders candidate
// suffix solutions; reconstruction picks, left to right, the longest token
// whose cost chain is exactly optimal.
template <typename CostT>
Segmentation run_dp(const Vocabulary& v, const Pretoken& w, Fallback fb, Method method,
                    const CostT& terminal, const CostT& unreachable,
                    const std::function<std::optional<CostT>(std::string_view, const CostT&)>& via_token,
                    const std::function<CostT(const CostT&)>& via_unk,
                    const std::function<bool(const CostT&, const CostT&)>& better) {
  Cps cps = decode(w);
  const size_t n = cps.n();
  const size_t maxlen = v.max_token_cps();

  std::vector<CostT> best(n + 1, unreachable);
  std::vector<char> reachable(n + 1, 0);
  best[n] = terminal;
  reachable[n] = 1;

  for (size_t i = n; i-- > 0;) {
    CostT bi = unreachable;
    bool found = false;
    for (size_t len = std::min(maxlen, n - i); len >= 1; --len) {
      if (!reachable[i + len]) continue;
      auto c = via_token(cps.slice(i, i + len), best[i + len]);
      if (!c) continue;
      if (!found || better(*c, bi)) {
        bi = *c;
        found = true;
      }
    }
    if (fb == Fallback::kUnk && reachable[i + 1]) {
      CostT c = via_unk(best[i + 1]);
      if (!found || better(c, bi)) {
        bi = c;
        found = true;
      }
    }
    best[i] = bi;
    reachable[i] = found ? 1 : 0;
  }

  if (!reachable[0]) {
    // Walk forward to the first position every path gets stuck at.
    std::vector<char> fwd(n + 1, 0);
    fwd[0] = 1;
    size_t stuck = 0;
    for (size_t i = 0; i <= n; ++i) {
      if (!fwd[i]) continue;
      if (!reachable[i]) {
        stuck = i;
        break;
      }
      for (size_t len = 1; i + len <= n && len <= maxlen; ++len) {
        if (v.contains(cps.slice(i, i + len))) fwd[i + len] = 1;
      }
    }
    throw SegmentationError("no complete segmentation exists past character offset " +
                            std::to_string(stuck));
  }

  Builder b;
  size_t i = 0;
  while (i < n) {
    bool advanced = false;
    for (size_t len = std::min(maxlen, n - i); len >= 1; --len) {
      if (!reachable[i + len]) continue;
      auto c = via_token(cps.slice(i, i + len), best[i + len]);
      if (!c || !(*c == best[i])) continue;
      b.add(cps.slice(i, i + len), false);
      i += len;
      advanced = true;
      break;
    }
    if (!advanced) {
      b.add(cps.slice(i, i + 1), true);
      i += 1;
    }
  }
  return b.finish(method);
}

struct LeastCost {
  uint32_t pieces = kInf;
  uint32_t unks = kInf;
  bool operator==(const LeastCost&) const = default;
};

struct ScoreCost {
  uint32_t unks = kInf;
  double score = 0.0;
  uint32_t tokens = kInf;
  bool operator==(const ScoreCost&) const = default;
};

}  // namespace

Segmentation segment_least_tokens(const Vocabulary& v, const Pretoken& w, Fallback fb) {
  auto better = [](const LeastCost& a, const LeastCost& b) {
    return a.pieces != b.pieces ? a.pieces < b.pieces : a.unks < b.unks;
  };
  auto via_token = [&v](std::string_view tok, const LeastCost& nxt) -> std::optional<LeastCost> {
    if (!v.contains(tok)) return std::nullopt;
    return LeastCost{nxt.pieces + 1, nxt.unks};
  };
  auto via_unk = [](const LeastCost& nxt) { return LeastCost{nxt.pieces + 1, nxt.unks + 1}; };
  return run_dp<LeastCost>(v, w, fb, Method::kLeastTokens, LeastCost{0, 0}, LeastCost{},
                           via_token, via_unk, better);
}

Segmentation segment_likelihood(const Vocabulary& v, const Pretoken& w, Fallback fb) {
  if (!v.fully_scored()) {
    throw ConfigError("likelihood requires a score for every vocabulary token");
  }
  auto better = [](const ScoreCost& a, const ScoreCost& b) {
    if (a.unks != b.unks) return a.unks < b.unks;
    if (a.score != b.score) return a.score > b.score;
    return a.tokens < b.tokens;
  };
  auto via_token = [&v](std::string_view tok, const ScoreCost& nxt) -> std::optional<ScoreCost> {
    auto s = v.score(tok);
    if (!s) return std::nullopt;
    return ScoreCost{nxt.unks, nxt.score + *s, nxt.tokens + 1};
  };
  auto via_unk = [](const ScoreCost& nxt) {
    return ScoreCost{nxt.unks + 1, nxt.score, nxt.tokens + 1};
  };
  return run_dp<ScoreCost>(v, w, fb, Method::kLikelihood, ScoreCost{0, 0.0, 0}, ScoreCost{},
                           via_token, via_unk, better);
}

Segmentation segment_merges(const Vocabulary& v, const MergeTable& m, const Pretoken& w,
                            double p, uint64_t seed, Fallback fb) {
  if (p < 0.0 || p > 1.0) throw ConfigError("dropout probability must be in [0, 1]");
  Cps cps = decode(w);

  std::vector<std::pair<std::string, bool>> pieces;  // (text, is fallback piece)
  pieces.reserve(cps.n());
  for (size_t i = 0; i < cps.n(); ++i) {
    std::string sym(cps.slice(i, i + 1));
    bool unk = !v.contains(sym);
    if (unk && fb == Fallback::kError) {
      throw SegmentationError("base symbol '" + sym + "' at character offset " +
                              std::to_string(i) + " is not in the vocabulary");
    }
    pieces.emplace_back(std::move(sym), unk);
  }

  std::optional<SplitMix64> rng;
  if (p > 0.0) rng.emplace(pretoken_rng(seed, w.doc, w.ordinal));

  while (pieces.size() > 1) {
    int best_rank = -1;
    size_t best_pos = 0;
    for (size_t i = 0; i + 1 < pieces.size(); ++i) {
      if (pieces[i].second || pieces[i + 1].second) continue;
      int r = m.rank(pieces[i].first, pieces[i + 1].first);
      if (r < 0) continue;
      if (rng && rng->next_double() < p) continue;
      if (best_rank < 0 || r < best_rank) {
        best_rank = r;
        best_pos = i;
      }
    }
    if (best_rank < 0) break;
    pieces[best_pos].first += pieces[best_pos + 1].first;
    pieces.erase(pieces.begin() + static_cast<ptrdiff_t>(best_pos) + 1);
  }

  Builder b;
  for (auto& [text, unk] : pieces) b.add(text, unk);
  return b.finish(Method::kMerges);
}

Segmentation segment(const EngineConfig& cfg, const Vocabulary& v, const MergeTable* m,
                     const Pretoken& w) {
  if (cfg.dropout_p < 0.0 || cfg.dropout_p > 1.0) {
    throw ConfigError("dropout probability must be in [0, 1]");
  }
  switch (cfg.method) {
    case Method::kLongestPrefix:
      return segment_longest_prefix(v, w, cfg.fallback);
    case Method::kLongestSuffix:
      return segment_longest_suffix(v, w, cfg.fallback);
    case Method::kLongestToken:
      return segment_longest_token(v, w, cfg.fallback);
    case Method::kLeastTokens:
      return segment_least_tokens(v, w, cfg.fallback);
    case Method::kLikelihood:
      return segment_likelihood(v, w, cfg.fallback);
    case Method::kMerges:
    case Method::kDropoutMerges: {
      if (m == nullptr) {
        throw ConfigError(std::string(method_name(cfg.method)) + " requires a merge table");
      }
      double p = cfg.method == Method::kDropoutMerges ? cfg.dropout_p : 0.0;
      Segmentation s = segment_merges(v, *m, w, p, cfg.seed, cfg.fallback);
      s.method = cfg.method;
      return s;
    }
  }
  throw ConfigError("unknown method");
}

std::optional<std::string> inapplicable_reason(Method method, const Vocabulary& v,
                                               bool has_merges) {
  if ((method == Method::kMerges || method == Method::kDropoutMerges) && !has_merges) {
    return "requires a merge table";
  }
  if (method == Method::kLikelihood && !v.fully_scored()) {
    return "requires a fully scored vocabulary";
  }
  return std::nullopt;
}

}  // namespace tokeval
