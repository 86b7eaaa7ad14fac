#include "tokeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "tokeval/bytemap.hpp"
#include "tokeval/errors.hpp"
#include "tokeval/utf8.hpp"

namespace tokeval {

std::string_view statistic_name(Statistic s) {
  return s == Statistic::kTokenCount ? "token-count" : "tokens-per-character";
}

Statistic parse_statistic(std::string_view name) {
  if (name == "token-count") return Statistic::kTokenCount;
  if (name == "tokens-per-character") return Statistic::kTokensPerChar;
  throw ConfigError("unknown statistic '" + std::string(name) + "'");
}

std::string_view renyi_norm_name(RenyiNorm n) {
  return n == RenyiNorm::kObservedTypes ? "observed-types" : "vocab-size";
}

RenyiNorm parse_renyi_norm(std::string_view name) {
  if (name == "observed-types") return RenyiNorm::kObservedTypes;
  if (name == "vocab-size") return RenyiNorm::kVocabSize;
  throw ConfigError("unknown normalization '" + std::string(name) + "'");
}

void TokenHistogram::add(const Segmentation& seg, bool differs_from_default,
                         std::string_view unk_literal) {
  size_t unk_at = 0;
  for (size_t i = 0; i < seg.tokens.size(); ++i) {
    bool is_unk = unk_at < seg.unknown.size() && seg.unknown[unk_at] == i;
    if (is_unk) ++unk_at;
    auto& slot = is_unk ? counts[std::string(unk_literal)] : counts[seg.tokens[i]];
    ++slot;
    ++total;
  }
  ++pretoken_count;
  if (differs_from_default) ++diff_count;
}

void TokenHistogram::merge(const TokenHistogram& other) {
  for (const auto& [token, count] : other.counts) counts[token] += count;
  total += other.total;
  pretoken_count += other.pretoken_count;
  diff_count += other.diff_count;
}

void BoundaryTally::merge(const BoundaryTally& other) {
  intersect += other.intersect;
  pred += other.pred;
  gold += other.gold;
}

namespace {

Prf prf_from(uint64_t intersect, uint64_t pred, uint64_t gold) {
  Prf out;
  out.precision = pred > 0 ? static_cast<double>(intersect) / static_cast<double>(pred) : 1.0;
  out.recall = gold > 0 ? static_cast<double>(intersect) / static_cast<double>(gold) : 1.0;
  double denom = out.precision + out.recall;
  out.f1 = denom > 0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

uint64_t intersection_size(const BoundarySet& a, const BoundarySet& b) {
  uint64_t n = 0;
  auto it = b.positions.begin();
  for (uint32_t p : a.positions) {
    it = std::lower_bound(it, b.positions.end(), p);
    if (it != b.positions.end() && *it == p) {
      ++n;
      ++it;
    }
  }
  return n;
}

}  // namespace

Prf BoundaryTally::prf() const { return prf_from(intersect, pred, gold); }

BoundaryTally tally_word(const BoundarySet& pred, const std::vector<BoundarySet>& analyses) {
  BoundaryTally best;
  double best_f1 = -1.0;
  for (const auto& gold : analyses) {
    uint64_t i = intersection_size(pred, gold);
    double f1 = prf_from(i, pred.positions.size(), gold.positions.size()).f1;
    if (f1 > best_f1) {
      best_f1 = f1;
      best = BoundaryTally{i, pred.positions.size(), gold.positions.size()};
    }
  }
  return best;
}

namespace {

// Characters of the word a segmentation covers, marker stripped.
std::string covered_word(const Segmentation& seg, Marker marker) {
  std::string joined = join(seg);
  switch (marker) {
    case Marker::kNone:
      return joined;
    case Marker::kMetaspace: {
      std::string prefix;
      utf8::append_codepoint(prefix, kMetaspaceCp);
      if (joined.rfind(prefix, 0) == 0) return joined.substr(prefix.size());
      return joined;
    }
    case Marker::kByteLevel: {
      std::string bytes = bytemap::decode(joined);
      if (!bytes.empty() && bytes.front() == ' ') return bytes.substr(1);
      return bytes;
    }
  }
  return joined;
}

}  // namespace

Prf boundary_f1(const std::vector<Segmentation>& preds, const std::vector<GoldEntry>& golds,
                Marker marker) {
  if (preds.size() != golds.size()) {
    throw DataError("prediction and gold lists are not aligned");
  }
  // Group alternative analyses of the same word; the prediction for a word
  // is the same wherever it appears.
  struct WordCase {
    BoundarySet pred;
    std::vector<BoundarySet> analyses;
  };
  std::vector<WordCase> cases;
  std::unordered_map<std::string, size_t> index;
  for (size_t i = 0; i < preds.size(); ++i) {
    if (covered_word(preds[i], marker) != golds[i].word) {
      throw DataError("prediction does not cover the gold word '" + golds[i].word + "'");
    }
    auto [it, inserted] = index.emplace(golds[i].word, cases.size());
    if (inserted) {
      cases.push_back(WordCase{boundaries(preds[i], marker), {}});
    }
    cases[it->second].analyses.push_back(gold_boundaries(golds[i].morphs));
  }
  BoundaryTally tally;
  for (const auto& c : cases) tally.merge(tally_word(c.pred, c.analyses));
  return tally.prf();
}

double macro_f1(const std::map<std::string, double>& per_resource) {
  if (per_resource.empty()) throw ConfigError("no morphological resources to average");
  double sum = 0.0;
  for (const auto& [name, f1] : per_resource) sum += f1;
  return sum / static_cast<double>(per_resource.size());
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw CorrelationError("series lengths differ");
  size_t n = xs.size();
  if (n < 2) throw CorrelationError("correlation needs at least two points");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx;
    double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw CorrelationError("correlation undefined for constant input");
  return sxy / std::sqrt(sxx * syy);
}

CognitiveResult cognitive_score(const std::vector<CognitiveStimulus>& stimuli,
                                const std::vector<Segmentation>& segs, Statistic statistic) {
  if (stimuli.size() != segs.size()) {
    throw DataError("stimulus and segmentation lists are not aligned");
  }
  std::vector<double> stat[2], rt[2], acc[2];  // indexed by lexicality
  for (size_t i = 0; i < stimuli.size(); ++i) {
    size_t cls = stimuli[i].lexicality == Lexicality::kWord ? 0 : 1;
    double value = static_cast<double>(segs[i].tokens.size());
    if (statistic == Statistic::kTokensPerChar) {
      value /= static_cast<double>(utf8::count_codepoints(stimuli[i].surface));
    }
    stat[cls].push_back(value);
    rt[cls].push_back(stimuli[i].rt_ms);
    acc[cls].push_back(stimuli[i].accuracy);
  }
  if (stat[0].empty()) throw DataError("no word stimuli in the cognitive data");
  if (stat[1].empty()) throw DataError("no nonword stimuli in the cognitive data");

  auto setup_r = [&](size_t cls, const std::vector<double>& ys, std::string_view setup) {
    try {
      return pearson(stat[cls], ys);
    } catch (const CorrelationError& e) {
      throw CorrelationError(std::string(setup) + ": " + e.what());
    }
  };
  CognitiveResult out;
  out.setups.word_rt = setup_r(0, rt[0], "word/rt");
  out.setups.word_accuracy = setup_r(0, acc[0], "word/accuracy");
  out.setups.nonword_rt = setup_r(1, rt[1], "nonword/rt");
  out.setups.nonword_accuracy = setup_r(1, acc[1], "nonword/accuracy");
  out.score = (std::abs(out.setups.word_rt) + std::abs(out.setups.word_accuracy) +
               std::abs(out.setups.nonword_rt) + std::abs(out.setups.nonword_accuracy)) /
              4.0;
  return out;
}

double renyi_entropy(const TokenHistogram& h, double alpha) {
  if (alpha <= 0.0) throw ConfigError("alpha must be positive");
  if (alpha == 1.0) throw ConfigError("alpha = 1 is the Shannon limit; use a nearby value");
  if (h.total == 0) throw DataError("empty token histogram");
  double sum = 0.0;
  for (const auto& [token, count] : h.counts) {
    double p = static_cast<double>(count) / static_cast<double>(h.total);
    sum += std::pow(p, alpha);
  }
  return std::log(sum) / (1.0 - alpha);
}

double renyi_efficiency(const TokenHistogram& h, double alpha, RenyiNorm norm,
                        size_t vocab_size) {
  double entropy = renyi_entropy(h, alpha);
  size_t support = norm == RenyiNorm::kObservedTypes ? h.counts.size() : vocab_size;
  if (norm == RenyiNorm::kVocabSize && vocab_size == 0) {
    throw ConfigError("vocabulary-size normalization needs a nonzero vocabulary size");
  }
  if (support <= 1) return 0.0;
  return entropy / std::log(static_cast<double>(support));
}

double tokens_per_word(const TokenHistogram& h) {
  if (h.pretoken_count == 0) throw DataError("no pretokens observed");
  return static_cast<double>(h.total) / static_cast<double>(h.pretoken_count);
}

double decoding_diff(const std::vector<Segmentation>& method_segs,
                     const std::vector<Segmentation>& default_segs) {
  if (method_segs.size() != default_segs.size()) {
    throw DataError("segmentation streams are not aligned");
  }
  if (method_segs.empty()) return 0.0;
  uint64_t diff = 0;
  for (size_t i = 0; i < method_segs.size(); ++i) {
    if (method_segs[i].tokens != default_segs[i].tokens) ++diff;
  }
  return static_cast<double>(diff) / static_cast<double>(method_segs.size());
}

std::array<std::array<double, 4>, 4> metric_correlations(const std::vector<EvalReport>& reports) {
  if (reports.size() < 2) throw DataError("metric correlations need at least two reports");
  std::array<std::vector<double>, 4> columns;
  for (const auto& r : reports) {
    const std::optional<double> values[4] = {r.morphological_alignment, r.cognitive_plausibility,
                                             r.renyi_efficiency, r.tokens_per_word};
    for (size_t m = 0; m < 4; ++m) {
      if (!values[m]) {
        throw DataError("report for '" + r.method + "' lacks " +
                        std::string(kCorrelationMetrics[m]));
      }
      columns[m].push_back(*values[m]);
    }
  }
  for (size_t m = 0; m < 4; ++m) {
    if (std::all_of(columns[m].begin(), columns[m].end(),
                    [&](double v) { return v == columns[m][0]; })) {
      throw CorrelationError(std::string(kCorrelationMetrics[m]) + " is constant across reports");
    }
  }
  std::array<std::array<double, 4>, 4> out{};
  for (size_t a = 0; a < 4; ++a) {
    out[a][a] = 1.0;
    for (size_t b = a + 1; b < 4; ++b) {
      double r = pearson(columns[a], columns[b]);
      out[a][b] = r;
      out[b][a] = r;
    }
  }
  return out;
}

}  // namespace tokeval
