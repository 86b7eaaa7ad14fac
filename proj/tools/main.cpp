#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tokeval/errors.hpp"
#include "tokeval/evaluate.hpp"

namespace {

using namespace tokeval;

struct CliOpts {
  RunConfig cfg;
  std::string method;
  std::vector<std::string> methods;
  std::string pretokenizer = "plain";
  std::string fallback = "unk";
  std::string statistic = "token-count";
  std::string renyi_norm = "observed-types";
  std::string default_method;
  std::string format = "json";
  std::string morph_dir;
};

void add_common(CLI::App* cmd, CliOpts& o, bool eval_flags) {
  cmd->add_option("--vocab", o.cfg.vocab_path, "vocabulary TSV, one token<TAB>score? per line")
      ->required();
  cmd->add_option("--merges", o.cfg.merges_path, "ranked merge rules, one 'left right' per line");
  cmd->add_option("--dropout-p", o.cfg.dropout_p, "merge dropout probability in [0,1]");
  cmd->add_option("--seed", o.cfg.seed, "RNG seed for dropout-merges");
  cmd->add_option("--pretokenizer", o.pretokenizer, "plain | metaspace | byte-level");
  cmd->add_option("--fallback", o.fallback, "unk | error");
  cmd->add_option("--threads", o.cfg.threads, "worker threads for corpus passes")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--input", o.cfg.corpus_path, "corpus file, one document per line");
  cmd->add_option("--output", o.cfg.output_path, "output path (default: standard output)");
  if (eval_flags) {
    cmd->add_option("--alpha", o.cfg.alpha, "Renyi order (positive, not 1)");
    cmd->add_option("--statistic", o.statistic, "token-count | tokens-per-character");
    cmd->add_option("--renyi-norm", o.renyi_norm, "observed-types | vocab-size");
    cmd->add_option("--default-method", o.default_method, "decoding-diff baseline method");
    cmd->add_option("--morph-dir", o.morph_dir, "directory of gold morphology TSVs");
    cmd->add_option("--cognitive", o.cfg.cognitive_path, "lexical decision CSV");
    cmd->add_option("--format", o.format, "json | tsv | markdown");
  }
}

void finish_config(CliOpts& o) {
  o.cfg.pretok_mode = parse_pretok_mode(o.pretokenizer);
  o.cfg.fallback = parse_fallback(o.fallback);
  o.cfg.statistic = parse_statistic(o.statistic);
  o.cfg.renyi_norm = parse_renyi_norm(o.renyi_norm);
  o.cfg.format = parse_report_format(o.format);
  if (!o.default_method.empty()) o.cfg.default_method = parse_method(o.default_method);
  if (!(o.cfg.alpha > 0.0) || o.cfg.alpha == 1.0) {
    throw ConfigError("alpha must be positive and not 1");
  }
  if (o.cfg.dropout_p < 0.0 || o.cfg.dropout_p > 1.0) {
    throw ConfigError("dropout probability must be in [0, 1]");
  }
  if (!o.morph_dir.empty()) o.cfg.morph_resources = list_morph_resources(o.morph_dir);
}

void do_segment(CliOpts& o) {
  finish_config(o);
  Method m = parse_method(o.method);
  LoadedResources res = load_resources(o.cfg);
  if (o.cfg.output_path.empty()) {
    run_segment(o.cfg, res, m, std::cout);
    return;
  }
  std::ofstream out(o.cfg.output_path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + o.cfg.output_path + "'");
  run_segment(o.cfg, res, m, out);
  if (!out.good()) throw IoError("failed while writing '" + o.cfg.output_path + "'");
}

void do_evaluate(CliOpts& o) {
  finish_config(o);
  Method m = parse_method(o.method);
  LoadedResources res = load_resources(o.cfg);
  EvalReport report = evaluate_method(o.cfg, res, m);
  write_report_file(o.cfg.output_path, report, o.cfg.format);
}

void do_compare(CliOpts& o) {
  finish_config(o);
  std::vector<Method> requested;
  for (const std::string& name : o.methods) {
    if (name == "all") continue;
    requested.push_back(parse_method(name));
  }
  LoadedResources res = load_resources(o.cfg);
  CompareResult result = compare_methods(o.cfg, res, requested);
  write_report_file(o.cfg.output_path, result, o.cfg.format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subword segmentation methods and intrinsic evaluation over any vocabulary"};
  app.require_subcommand(1);

  CliOpts seg_o, eval_o, cmp_o;

  CLI::App* seg = app.add_subcommand(
      "segment", "write one 'pretoken<TAB>token1 token2 ...' line per corpus pretoken");
  add_common(seg, seg_o, false);
  seg->add_option("--method", seg_o.method, "inference method")->required();

  CLI::App* ev =
      app.add_subcommand("evaluate", "compute the intrinsic benchmark for one method");
  add_common(ev, eval_o, true);
  ev->add_option("--method", eval_o.method, "inference method")->required();

  CLI::App* cmp =
      app.add_subcommand("compare", "benchmark every applicable method side by side");
  add_common(cmp, cmp_o, true);
  cmp->add_option("--method", cmp_o.methods, "methods to include (default: all applicable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }

  try {
    if (seg->parsed()) {
      do_segment(seg_o);
    } else if (ev->parsed()) {
      do_evaluate(eval_o);
    } else {
      do_compare(cmp_o);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
