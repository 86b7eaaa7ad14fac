#include "tokeval/evaluate.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <thread>
#include <unordered_map>

#include "tokeval/bytemap.hpp"
#include "tokeval/errors.hpp"

namespace tokeval {
namespace {

constexpr size_t kBatchLines = 1024;

struct BatchInput {
  uint64_t first_doc = 0;
  std::vector<std::string> lines;
};

// Runs `work` over line batches (up to `threads` in flight) and feeds the
// results to `consume` in corpus order. Results must merge associatively
// for the outcome to be thread-count independent; integer accumulators and
// preformatted text chunks both qualify.
template <typename R, typename WorkFn, typename ConsumeFn>
void map_corpus_batches(const std::string& path, int threads, WorkFn&& work,
                        ConsumeFn&& consume) {
  LineReader reader(path);
  int lanes = std::max(threads, 1);
  bool eof = false;
  uint64_t doc = 0;
  while (!eof) {
    std::vector<BatchInput> window;
    for (int b = 0; b < lanes && !eof; ++b) {
      BatchInput batch;
      batch.first_doc = doc;
      while (batch.lines.size() < kBatchLines) {
        std::optional<std::string> line = reader.next();
        if (!line) {
          eof = true;
          break;
        }
        batch.lines.push_back(std::move(*line));
        ++doc;
      }
      if (!batch.lines.empty()) window.push_back(std::move(batch));
    }
    if (window.empty()) break;

    std::vector<R> results(window.size());
    std::vector<std::exception_ptr> errors(window.size());
    auto run_one = [&](size_t i) {
      try {
        results[i] = work(window[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    };
    if (window.size() == 1) {
      run_one(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(window.size());
      for (size_t i = 0; i < window.size(); ++i) pool.emplace_back(run_one, i);
      for (auto& t : pool) t.join();
    }
    for (size_t i = 0; i < window.size(); ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      consume(std::move(results[i]));
    }
  }
}

void require_applicable(Method method, const LoadedResources& res, std::string_view role) {
  if (auto reason = inapplicable_reason(method, res.vocab, res.merges.has_value())) {
    throw ConfigError(std::string(role) + " " + std::string(method_name(method)) + " " + *reason);
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> list_morph_resources(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("'" + dir + "' is not a readable directory");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".tsv") continue;
    out.emplace_back(entry.path().stem().string(), entry.path().string());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw DataError("no .tsv resources in '" + dir + "'");
  return out;
}

LoadedResources load_resources(const RunConfig& cfg) {
  LoadedResources res;
  res.vocab = load_vocab(cfg.vocab_path, marker_for(cfg.pretok_mode),
                         cfg.pretok_mode == PretokMode::kByteLevel);
  if (!cfg.merges_path.empty()) res.merges = load_merges(cfg.merges_path, res.vocab);
  for (const auto& [name, path] : cfg.morph_resources) {
    res.morph.emplace_back(name, load_gold(path, name));
  }
  if (!cfg.cognitive_path.empty()) res.cognitive = load_cognitive(cfg.cognitive_path);
  return res;
}

EvalReport evaluate_method(const RunConfig& cfg, const LoadedResources& res, Method method) {
  require_applicable(method, res, "method");
  EngineConfig ecfg{method, cfg.dropout_p, cfg.seed, cfg.fallback};

  EvalReport r;
  r.method = method_name(method);
  r.is_default = cfg.default_method && *cfg.default_method == method;
  r.seed = cfg.seed;
  r.dropout_p = cfg.dropout_p;
  r.alpha = cfg.alpha;
  r.statistic = statistic_name(cfg.statistic);
  r.renyi_norm = renyi_norm_name(cfg.renyi_norm);
  r.pretokenizer = pretok_mode_name(cfg.pretok_mode);
  r.fallback = fallback_name(cfg.fallback);
  if (cfg.default_method) r.default_method = method_name(*cfg.default_method);

  // Benchmark words are bare types: no whitespace context, no marker; a
  // byte-level vocabulary still needs them in byte-image form.
  const bool byte_level = res.vocab.byte_level();
  const Marker word_marker = byte_level ? Marker::kByteLevel : Marker::kNone;
  auto segment_word = [&](const std::string& word) {
    Pretoken pt{byte_level ? bytemap::encode(word) : word, 0, 0};
    return segment(ecfg, res.vocab, res.merges_ptr(), pt);
  };

  if (!res.morph.empty()) {
    for (const auto& [name, entries] : res.morph) {
      std::unordered_map<std::string, size_t> memo;
      std::vector<Segmentation> segs;
      std::vector<Segmentation> preds;
      preds.reserve(entries.size());
      for (const auto& e : entries) {
        auto [it, inserted] = memo.emplace(e.word, segs.size());
        if (inserted) segs.push_back(segment_word(e.word));
        preds.push_back(segs[it->second]);
      }
      r.per_resource_f1[name] = boundary_f1(preds, entries, word_marker).f1;
    }
    r.morphological_alignment = macro_f1(r.per_resource_f1);
  }

  if (!res.cognitive.empty()) {
    std::vector<Segmentation> segs;
    segs.reserve(res.cognitive.size());
    for (const auto& s : res.cognitive) segs.push_back(segment_word(s.surface));
    CognitiveResult c = cognitive_score(res.cognitive, segs, cfg.statistic);
    r.per_setup_r = c.setups;
    r.cognitive_plausibility = c.score;
  }

  if (!cfg.corpus_path.empty()) {
    std::optional<EngineConfig> dcfg;
    if (cfg.default_method) {
      require_applicable(*cfg.default_method, res, "default method");
      dcfg = EngineConfig{*cfg.default_method, cfg.dropout_p, cfg.seed, cfg.fallback};
    }
    PretokenizerConfig pcfg;
    pcfg.mode = cfg.pretok_mode;

    TokenHistogram hist;
    map_corpus_batches<TokenHistogram>(
        cfg.corpus_path, cfg.threads,
        [&](const BatchInput& batch) {
          TokenHistogram h;
          for (size_t li = 0; li < batch.lines.size(); ++li) {
            for (const Pretoken& pt : pretokenize(batch.lines[li], pcfg, batch.first_doc + li)) {
              Segmentation s = segment(ecfg, res.vocab, res.merges_ptr(), pt);
              bool differs = false;
              if (dcfg) {
                Segmentation d = segment(*dcfg, res.vocab, res.merges_ptr(), pt);
                differs = s.tokens != d.tokens;
              }
              h.add(s, differs);
            }
          }
          return h;
        },
        [&](TokenHistogram&& h) { hist.merge(h); });

    r.renyi_efficiency = renyi_efficiency(hist, cfg.alpha, cfg.renyi_norm, res.vocab.size());
    r.tokens_per_word = tokens_per_word(hist);
    if (dcfg) {
      r.decoding_diff = static_cast<double>(hist.diff_count) /
                        static_cast<double>(hist.pretoken_count);
    }
  }
  return r;
}

CompareResult compare_methods(const RunConfig& cfg, const LoadedResources& res,
                              const std::vector<Method>& requested) {
  if (!cfg.default_method) throw ConfigError("compare requires --default-method");
  require_applicable(*cfg.default_method, res, "default method");

  std::vector<Method> candidates;
  if (requested.empty()) {
    candidates.assign(std::begin(kAllMethods), std::end(kAllMethods));
  } else {
    for (Method m : requested) {
      if (std::find(candidates.begin(), candidates.end(), m) == candidates.end()) {
        candidates.push_back(m);
      }
    }
  }

  CompareResult out;
  for (Method m : candidates) {
    if (auto reason = inapplicable_reason(m, res.vocab, res.merges.has_value())) {
      out.skipped.push_back(SkippedMethod{std::string(method_name(m)), *reason});
      continue;
    }
    out.reports.push_back(evaluate_method(cfg, res, m));
  }
  if (out.reports.empty()) throw ConfigError("no applicable methods to compare");
  return out;
}

void run_segment(const RunConfig& cfg, const LoadedResources& res, Method method,
                 std::ostream& out) {
  require_applicable(method, res, "method");
  if (cfg.corpus_path.empty()) throw ConfigError("segment requires --input");
  EngineConfig ecfg{method, cfg.dropout_p, cfg.seed, cfg.fallback};
  PretokenizerConfig pcfg;
  pcfg.mode = cfg.pretok_mode;

  map_corpus_batches<std::string>(
      cfg.corpus_path, cfg.threads,
      [&](const BatchInput& batch) {
        std::string chunk;
        for (size_t li = 0; li < batch.lines.size(); ++li) {
          for (const Pretoken& pt : pretokenize(batch.lines[li], pcfg, batch.first_doc + li)) {
            Segmentation s = segment(ecfg, res.vocab, res.merges_ptr(), pt);
            chunk += pt.surface;
            chunk += '\t';
            std::vector<std::string> shown = display_tokens(s);
            for (size_t t = 0; t < shown.size(); ++t) {
              if (t > 0) chunk += ' ';
              chunk += shown[t];
            }
            chunk += '\n';
          }
        }
        return chunk;
      },
      [&](std::string&& chunk) { out << chunk; });
  out.flush();
}

}  // namespace tokeval
