#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string binary() {
  const char* bin = std::getenv("TOKEVAL_BIN");
  if (bin) return bin;
  return (fs::path(__FILE__).parent_path().parent_path() / "build" / "tokeval").string();
}

std::string fixtures() {
  const char* dir = std::getenv("TOKEVAL_FIXTURES");
  if (dir) return dir;
  return (fs::path(__FILE__).parent_path() / "fixtures").string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  static int counter = 0;
  fs::path out = fs::temp_directory_path() / ("tokeval_cli_out_" + std::to_string(++counter));
  fs::path err = fs::temp_directory_path() / ("tokeval_cli_err_" + std::to_string(counter));
  std::string cmd =
      binary() + " " + args + " >" + out.string() + " 2>" + err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return r;
}

// Vocabulary, merges, and corpus shared by every fixture run.
std::string base_args(const std::string& rest) {
  std::string fx = fixtures();
  return "--vocab " + fx + "/lang_vocab_scored.tsv --merges " + fx +
         "/lang_merges.txt --input " + fx + "/corpus_small.txt " + rest;
}

// The full benchmark setup the goldens were generated from (seed 7).
std::string full_args(const std::string& rest, const std::string& seed = "7") {
  std::string fx = fixtures();
  return base_args("--morph-dir " + fx + "/morph --cognitive " + fx + "/cognitive.csv --seed " +
                   seed + " " + rest);
}

}  // namespace

TEST_CASE("segment matches the golden output") {
  auto r = run("segment " + base_args("--method longest-prefix"));
  CHECK(r.exit_code == 0);
  CHECK(r.out == slurp(fs::path(fixtures()) / "goldens" / "segment_prefix.txt"));
  CHECK(r.err.empty());
}

TEST_CASE("compare matches the markdown golden") {
  auto r = run("compare " + full_args("--default-method merges --format markdown"));
  CHECK(r.exit_code == 0);
  CHECK(r.out == slurp(fs::path(fixtures()) / "goldens" / "compare_full.md"));
}

TEST_CASE("compare matches the json golden") {
  auto r = run("compare " + full_args("--default-method merges --format json"));
  CHECK(r.exit_code == 0);
  CHECK(r.out == slurp(fs::path(fixtures()) / "goldens" / "compare_full.json"));
}

TEST_CASE("compare without scores skips likelihood") {
  std::string fx = fixtures();
  auto r = run("compare --vocab " + fx + "/lang_vocab_unscored.tsv --merges " + fx +
               "/lang_merges.txt --input " + fx + "/corpus_small.txt --morph-dir " + fx +
               "/morph --cognitive " + fx +
               "/cognitive.csv --seed 7 --default-method merges --format tsv");
  CHECK(r.exit_code == 0);
  CHECK(r.out == slurp(fs::path(fx) / "goldens" / "compare_bpe.tsv"));
}

TEST_CASE("compare without merges skips the merge methods") {
  std::string fx = fixtures();
  auto r = run("compare --vocab " + fx + "/lang_vocab_scored.tsv --input " + fx +
               "/corpus_small.txt --morph-dir " + fx + "/morph --cognitive " + fx +
               "/cognitive.csv --seed 7 --default-method likelihood --format markdown");
  CHECK(r.exit_code == 0);
  CHECK(r.out == slurp(fs::path(fx) / "goldens" / "compare_unigram.md"));
}

TEST_CASE("evaluate agrees with the matching compare row") {
  auto cmp = run("compare " + full_args("--default-method merges --format json"));
  REQUIRE(cmp.exit_code == 0);
  auto table = nlohmann::json::parse(cmp.out);
  auto one = run("evaluate " + full_args("--default-method merges --method longest-suffix"));
  REQUIRE(one.exit_code == 0);
  auto row = nlohmann::json::parse(one.out);
  bool found = false;
  for (const auto& rep : table["reports"]) {
    if (rep["method"] != "longest-suffix") continue;
    found = true;
    CHECK(rep == row);
  }
  CHECK(found);
}

TEST_CASE("identical seeds reproduce dropout runs byte for byte") {
  auto a = run("evaluate " + full_args("--method dropout-merges --default-method merges"));
  auto b = run("evaluate " + full_args("--method dropout-merges --default-method merges"));
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  auto other = run("evaluate " +
                   full_args("--method dropout-merges --default-method merges", "8"));
  REQUIRE(other.exit_code == 0);
  CHECK(a.out != other.out);
}

TEST_CASE("thread count never changes the report bytes") {
  for (std::string method : {"dropout-merges", "likelihood"}) {
    auto one = run("evaluate " +
                   full_args("--method " + method + " --default-method merges --threads 1"));
    auto eight = run("evaluate " +
                     full_args("--method " + method + " --default-method merges --threads 8"));
    REQUIRE(one.exit_code == 0);
    REQUIRE(eight.exit_code == 0);
    CHECK(one.out == eight.out);
  }
}

TEST_CASE("output lands in the file given by --output") {
  fs::path out = fs::temp_directory_path() / "tokeval_cli_report.md";
  auto r = run("compare " + full_args("--default-method merges --format markdown --output " +
                                      out.string()));
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(out) == slurp(fs::path(fixtures()) / "goldens" / "compare_full.md"));
  fs::remove(out);
}

TEST_CASE("usage errors exit with 2") {
  std::string fx = fixtures();
  auto no_vocab = run("segment --method longest-prefix");
  CHECK(no_vocab.exit_code == 2);
  auto bad_method = run("segment --vocab " + fx + "/vocab_v1.tsv --input " + fx +
                        "/corpus_small.txt --method quickest");
  CHECK(bad_method.exit_code == 2);
  CHECK(bad_method.err.find("unknown method 'quickest'") != std::string::npos);
  auto no_merges = run("segment --vocab " + fx + "/vocab_v1.tsv --input " + fx +
                       "/corpus_small.txt --method merges");
  CHECK(no_merges.exit_code == 2);
  CHECK(no_merges.err.find("requires a merge table") != std::string::npos);
  auto no_input = run("segment --vocab " + fx + "/vocab_v1.tsv --method longest-prefix");
  CHECK(no_input.exit_code == 2);
  auto bad_alpha = run("evaluate " + full_args("--method merges --alpha 1.0"));
  CHECK(bad_alpha.exit_code == 2);
  auto bad_p = run("segment " + base_args("--method dropout-merges --dropout-p 1.5"));
  CHECK(bad_p.exit_code == 2);
  auto no_default = run("compare " + full_args("--format tsv"));
  CHECK(no_default.exit_code == 2);
  CHECK(no_default.err.find("compare requires --default-method") != std::string::npos);
}

TEST_CASE("data errors exit with 1") {
  std::string fx = fixtures();
  auto missing = run("segment --vocab /nonexistent/vocab.tsv --input " + fx +
                     "/corpus_small.txt --method longest-prefix");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  fs::path bad = fs::temp_directory_path() / "tokeval_cli_bad_corpus.txt";
  std::ofstream(bad, std::ios::binary) << "ok line\nbad \xff line\n";
  auto invalid = run("segment --vocab " + fx + "/vocab_v1.tsv --input " + bad.string() +
                     " --method longest-prefix");
  CHECK(invalid.exit_code == 1);
  CHECK(invalid.err.find("invalid UTF-8") != std::string::npos);
  fs::remove(bad);
}

TEST_CASE("help exits cleanly") {
  CHECK(run("--help").exit_code == 0);
  CHECK(run("segment --help").exit_code == 0);
  auto top = run("--help");
  CHECK(top.out.find("segment") != std::string::npos);
  CHECK(top.out.find("compare") != std::string::npos);
}

TEST_CASE("error fallback surfaces segmentation failures") {
  std::string fx = fixtures();
  fs::path oov = fs::temp_directory_path() / "tokeval_cli_oov.txt";
  std::ofstream(oov, std::ios::binary) << "abcz\n";
  auto unk = run("segment --vocab " + fx + "/vocab_v1.tsv --input " + oov.string() +
                 " --method longest-prefix");
  CHECK(unk.exit_code == 0);
  CHECK(unk.out == "abcz\tabc <unk>\n");
  auto err = run("segment --vocab " + fx + "/vocab_v1.tsv --input " + oov.string() +
                 " --method longest-prefix --fallback error");
  CHECK(err.exit_code == 1);
  CHECK(err.err.find("no vocabulary token matches at character offset 3") != std::string::npos);
  fs::remove(oov);
}
