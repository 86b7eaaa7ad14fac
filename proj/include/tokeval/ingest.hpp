#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tokeval/core.hpp"
#include "tokeval/metrics.hpp"
#include "tokeval/pretok.hpp"

namespace tokeval {

// TSV, one `token<TAB>score?` per line; the 0-based line number becomes the
// token id. Throws IoError when unreadable, ParseError (with line number)
// on malformed or duplicate lines or an empty file.
Vocabulary load_vocab(const std::string& path, Marker marker = Marker::kNone,
                      bool byte_level = false);

// One `left right` rule per line, rank = line order; a leading `#version`
// line is skipped. Each merged pair must be a vocabulary token.
MergeTable load_merges(const std::string& path, const Vocabulary& vocab);

// TSV, one `word<TAB>morph1 morph2 ...` analysis per line; repeated words
// contribute alternative analyses. Morphs must concatenate to the word.
std::vector<GoldEntry> load_gold(const std::string& path, const std::string& resource_name);

// CSV with header `stimulus,lexicality,rt_ms,accuracy` (RFC 4180 quoting).
std::vector<CognitiveStimulus> load_cognitive(const std::string& path);

// Line-oriented reader tracking file byte offsets; validates UTF-8.
class LineReader {
public:
  explicit LineReader(const std::string& path);

  // Next line without its newline; std::nullopt at end of file. Throws
  // DataError naming the file byte offset on invalid UTF-8.
  std::optional<std::string> next();

  uint64_t line_index() const { return line_index_; }

private:
  std::ifstream in_;
  std::string path_;
  uint64_t byte_offset_ = 0;
  uint64_t line_index_ = 0;
};

// Streams pretokens from a one-document-per-line corpus; memory stays
// bounded by the longest document.
class CorpusStream {
public:
  CorpusStream(const std::string& path, PretokenizerConfig cfg);

  std::optional<Pretoken> next();

private:
  LineReader reader_;
  PretokenizerConfig cfg_;
  std::vector<Pretoken> buf_;
  size_t buf_pos_ = 0;
  uint64_t doc_ = 0;
};

enum class ReportFormat { kJson, kTsv, kMarkdown };

std::string_view report_format_name(ReportFormat f);
ReportFormat parse_report_format(std::string_view name);

struct SkippedMethod {
  std::string method;
  std::string reason;
};

struct CompareResult {
  std::vector<EvalReport> reports;
  std::vector<SkippedMethod> skipped;
};

nlohmann::ordered_json report_to_json(const EvalReport& r);
EvalReport report_from_json(const nlohmann::json& j);

// Human formats render the five benchmark columns to 4 decimals, flag the
// default method, and print absent metrics as "---"; JSON keeps full
// precision and omits absent metrics.
void write_report(std::ostream& out, const EvalReport& r, ReportFormat format);
void write_report(std::ostream& out, const CompareResult& r, ReportFormat format);

// Writes to `path`, or standard output when path is empty. Throws IoError
// when the file cannot be written.
void write_report_file(const std::string& path, const EvalReport& r, ReportFormat format);
void write_report_file(const std::string& path, const CompareResult& r, ReportFormat format);

}  // namespace tokeval
