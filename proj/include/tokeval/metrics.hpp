#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tokeval/core.hpp"

namespace tokeval {

// One gold analysis line: `word` split into `morphs`. A word may carry
// several analyses (one entry per line); scoring takes the best-matching
// one.
struct GoldEntry {
  std::string word;
  std::vector<std::string> morphs;
  std::string resource;
};

enum class Lexicality { kWord, kNonword };

struct CognitiveStimulus {
  std::string surface;
  Lexicality lexicality = Lexicality::kWord;
  double rt_ms = 0.0;
  double accuracy = 0.0;
};

// Per-stimulus statistic correlated against the behavioral measures.
enum class Statistic {
  kTokenCount,
  kTokensPerChar,
};

std::string_view statistic_name(Statistic s);
Statistic parse_statistic(std::string_view name);

enum class RenyiNorm {
  kObservedTypes,  // normalize by log(number of distinct observed types)
  kVocabSize,      // normalize by log(vocabulary size)
};

std::string_view renyi_norm_name(RenyiNorm n);
RenyiNorm parse_renyi_norm(std::string_view name);

// Token-frequency accumulator over a corpus slice. Mergeable: summing
// shard histograms equals the single-pass histogram, exactly.
struct TokenHistogram {
  std::map<std::string, uint64_t> counts;  // ordered for deterministic iteration
  uint64_t total = 0;
  uint64_t pretoken_count = 0;
  uint64_t diff_count = 0;  // pretokens segmented differently from the default method

  void add(const Segmentation& seg, bool differs_from_default,
           std::string_view unk_literal = "<unk>");
  void merge(const TokenHistogram& other);
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Micro counts over one resource's words.
struct BoundaryTally {
  uint64_t intersect = 0;
  uint64_t pred = 0;
  uint64_t gold = 0;

  void merge(const BoundaryTally& other);
  Prf prf() const;
};

// Compares one word's predicted boundaries against its analyses (lenient:
// the analysis with the highest word-level F1 wins) and returns the counts
// to accumulate.
BoundaryTally tally_word(const BoundarySet& pred, const std::vector<BoundarySet>& analyses);

// Micro-aggregated P/R/F1 over one resource. `preds` aligns with `golds`
// by index; duplicate words in `golds` are treated as alternative analyses.
// `marker` says how predictions encode the word (byte-level predictions are
// decoded back to characters). Zero denominators count as ratio 1; F1 is 0
// when P + R = 0. Throws DataError when a prediction does not cover its
// gold word.
Prf boundary_f1(const std::vector<Segmentation>& preds, const std::vector<GoldEntry>& golds,
                Marker marker = Marker::kNone);

// Unweighted mean F1 across resources. Throws ConfigError on an empty map.
double macro_f1(const std::map<std::string, double>& per_resource);

// Sample Pearson correlation. Throws CorrelationError when lengths differ,
// n < 2, or either input is constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct CognitiveSetups {
  double word_rt = 0.0;
  double word_accuracy = 0.0;
  double nonword_rt = 0.0;
  double nonword_accuracy = 0.0;

  bool operator==(const CognitiveSetups&) const = default;
};

struct CognitiveResult {
  CognitiveSetups setups;
  double score = 0.0;  // mean of the four |r|
};

// Correlates the per-stimulus statistic with rt and accuracy inside each
// lexicality class. Throws DataError on an empty class, CorrelationError
// (naming the setup) when a correlation is undefined.
CognitiveResult cognitive_score(const std::vector<CognitiveStimulus>& stimuli,
                                const std::vector<Segmentation>& segs, Statistic statistic);

// Order-alpha Rényi entropy of the histogram's frequency distribution,
// natural log. Throws ConfigError for alpha <= 0 or alpha = 1, DataError
// on an empty histogram.
double renyi_entropy(const TokenHistogram& h, double alpha);

// Entropy normalized by log of the support size: observed distinct types,
// or the vocabulary size when norm = kVocabSize. Support of one → 0.
double renyi_efficiency(const TokenHistogram& h, double alpha,
                        RenyiNorm norm = RenyiNorm::kObservedTypes, size_t vocab_size = 0);

// Mean tokens per pretoken. Throws DataError when no pretokens were seen.
double tokens_per_word(const TokenHistogram& h);

// Fraction of aligned pretoken occurrences whose token sequences differ.
// Throws DataError on length mismatch; empty streams → 0.
double decoding_diff(const std::vector<Segmentation>& method_segs,
                     const std::vector<Segmentation>& default_segs);

// One benchmark row. Metrics whose inputs were absent stay unset.
struct EvalReport {
  std::string method;
  bool is_default = false;

  // Configuration provenance.
  uint64_t seed = 0;
  double dropout_p = 0.0;
  double alpha = 2.5;
  std::string statistic;
  std::string renyi_norm;
  std::string pretokenizer;
  std::string fallback;
  std::string default_method;

  std::optional<double> morphological_alignment;
  std::map<std::string, double> per_resource_f1;
  std::optional<double> cognitive_plausibility;
  std::optional<CognitiveSetups> per_setup_r;
  std::optional<double> renyi_efficiency;
  std::optional<double> tokens_per_word;
  std::optional<double> decoding_diff;

  bool operator==(const EvalReport&) const = default;
};

inline constexpr std::array<std::string_view, 4> kCorrelationMetrics = {
    "morphological_alignment", "cognitive_plausibility", "renyi_efficiency", "tokens_per_word"};

// Pairwise Pearson correlations between the four headline metrics across
// reports. Symmetric, unit diagonal. Throws DataError when a report lacks
// a metric, CorrelationError (naming the column) when one is constant.
std::array<std::array<double, 4>, 4> metric_correlations(const std::vector<EvalReport>& reports);

}  // namespace tokeval
