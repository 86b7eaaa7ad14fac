#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tokeval/engines.hpp"
#include "tokeval/ingest.hpp"
#include "tokeval/metrics.hpp"
#include "tokeval/pretok.hpp"

namespace tokeval {

struct RunConfig {
  std::string vocab_path;
  std::string merges_path;                                         // empty = none
  std::vector<std::pair<std::string, std::string>> morph_resources;  // (name, path)
  std::string cognitive_path;  // empty = none
  std::string corpus_path;     // empty = none
  std::string output_path;     // empty = standard output
  ReportFormat format = ReportFormat::kJson;

  PretokMode pretok_mode = PretokMode::kPlain;
  Fallback fallback = Fallback::kUnk;
  double dropout_p = 0.1;
  uint64_t seed = 0;
  double alpha = 2.5;
  Statistic statistic = Statistic::kTokenCount;
  RenyiNorm renyi_norm = RenyiNorm::kObservedTypes;
  std::optional<Method> default_method;  // decoding-diff baseline
  int threads = 1;
};

struct LoadedResources {
  Vocabulary vocab;
  std::optional<MergeTable> merges;
  std::vector<std::pair<std::string, std::vector<GoldEntry>>> morph;
  std::vector<CognitiveStimulus> cognitive;

  const MergeTable* merges_ptr() const { return merges ? &*merges : nullptr; }
};

// Sorted (stem, path) pairs for every .tsv file in the directory.
std::vector<std::pair<std::string, std::string>> list_morph_resources(const std::string& dir);

// Loads everything the config names; the vocabulary takes its marker
// convention from the pretokenizer mode.
LoadedResources load_resources(const RunConfig& cfg);

// One benchmark row. Word lists are segmented bare (byte-encoded for
// byte-level vocabularies); corpus statistics use the configured
// pretokenizer and threads. Metrics without inputs stay absent.
EvalReport evaluate_method(const RunConfig& cfg, const LoadedResources& res, Method method);

// One report per applicable method, skip reasons for the rest. `requested`
// empty means every method.
CompareResult compare_methods(const RunConfig& cfg, const LoadedResources& res,
                              const std::vector<Method>& requested);

// Writes `pretoken<TAB>token1 token2 ...` per corpus pretoken.
void run_segment(const RunConfig& cfg, const LoadedResources& res, Method method,
                 std::ostream& out);

}  // namespace tokeval
