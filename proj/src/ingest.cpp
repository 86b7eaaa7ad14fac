#include "tokeval/ingest.hpp"

#include <charconv>
#include <cstdio>
#include <iostream>
#include <unordered_set>
#include <utility>

#include "tokeval/errors.hpp"
#include "tokeval/utf8.hpp"

namespace tokeval {
namespace {

constexpr size_t npos = std::string::npos;

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ParseError(context + ": '" + std::string(s) + "' is not a number");
  }
  return v;
}

std::string at_line(const std::string& path, size_t index0) {
  return path + " line " + std::to_string(index0 + 1);
}

}  // namespace

Vocabulary load_vocab(const std::string& path, Marker marker, bool byte_level) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw ParseError("'" + path + "' is empty");
  std::vector<std::pair<std::string, std::optional<double>>> entries;
  entries.reserve(lines.size());
  std::unordered_set<std::string> seen;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    size_t tab = line.find('\t');
    std::string token = line.substr(0, tab == npos ? line.size() : tab);
    if (token.empty()) throw ParseError(at_line(path, i) + ": empty token");
    std::optional<double> score;
    if (tab != npos) {
      std::string_view rest = std::string_view(line).substr(tab + 1);
      if (rest.empty()) throw ParseError(at_line(path, i) + ": empty score field");
      if (rest.find('\t') != npos) throw ParseError(at_line(path, i) + ": too many fields");
      score = parse_double(rest, at_line(path, i));
    }
    if (!seen.insert(token).second) {
      throw ParseError(at_line(path, i) + ": duplicate token '" + token + "'");
    }
    entries.emplace_back(std::move(token), score);
  }
  try {
    return Vocabulary::build(std::move(entries), marker, byte_level);
  } catch (const DataError& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

MergeTable load_merges(const std::string& path, const Vocabulary& vocab) {
  std::vector<std::string> lines = read_lines(path);
  std::vector<MergeTable::Rule> rules;
  size_t start = 0;
  if (!lines.empty() && lines[0].rfind("#version", 0) == 0) start = 1;
  for (size_t i = start; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    size_t sp = line.find(' ');
    if (sp == npos || sp == 0 || sp + 1 == line.size() || line.find(' ', sp + 1) != npos) {
      throw ParseError(at_line(path, i) + ": expected 'left right'");
    }
    rules.push_back(MergeTable::Rule{line.substr(0, sp), line.substr(sp + 1)});
  }
  try {
    return MergeTable::build(std::move(rules), vocab);
  } catch (const DataError& e) {
    throw DataError("'" + path + "': " + e.what());
  }
}

std::vector<GoldEntry> load_gold(const std::string& path, const std::string& resource_name) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw ParseError("'" + path + "' is empty");
  std::vector<GoldEntry> out;
  out.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    size_t tab = line.find('\t');
    if (tab == npos || tab == 0 || tab + 1 == line.size()) {
      throw ParseError(at_line(path, i) + ": expected 'word<TAB>morphs'");
    }
    GoldEntry entry;
    entry.word = line.substr(0, tab);
    entry.resource = resource_name;
    size_t pos = tab + 1;
    while (pos <= line.size()) {
      size_t sp = line.find(' ', pos);
      if (sp == npos) sp = line.size();
      if (sp == pos) throw ParseError(at_line(path, i) + ": empty morph");
      entry.morphs.push_back(line.substr(pos, sp - pos));
      pos = sp + 1;
    }
    std::string joined;
    for (const auto& m : entry.morphs) joined += m;
    if (joined != entry.word) {
      throw DataError(at_line(path, i) + ": analysis does not concatenate to '" + entry.word +
                      "'");
    }
    out.push_back(std::move(entry));
  }
  return out;
}

namespace {

// RFC 4180 records: quoted fields may contain commas, quotes ("") and
// newlines.
std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                const std::string& path) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  bool quoted_field = false;
  bool field_started = false;

  auto end_field = [&]() {
    fields.push_back(std::move(cur));
    cur.clear();
    quoted_field = false;
    field_started = false;
  };
  auto end_record = [&]() {
    end_field();
    records.push_back(std::move(fields));
    fields.clear();
  };

  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      if (field_started) {
        throw ParseError("'" + path + "': quote inside an unquoted field (record " +
                         std::to_string(records.size() + 1) + ")");
      }
      in_quotes = true;
      quoted_field = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
    } else {
      if (quoted_field) {
        throw ParseError("'" + path + "': text after a closing quote (record " +
                         std::to_string(records.size() + 1) + ")");
      }
      field_started = true;
      cur.push_back(c);
    }
    ++i;
  }
  if (in_quotes) throw ParseError("'" + path + "': unterminated quoted field");
  if (field_started || quoted_field || !fields.empty()) end_record();
  return records;
}

}  // namespace

std::vector<CognitiveStimulus> load_cognitive(const std::string& path) {
  std::string text = read_all(path);
  std::vector<std::vector<std::string>> records = parse_csv(text, path);
  if (records.empty()) throw ParseError("'" + path + "' is empty");
  const std::vector<std::string> header = {"stimulus", "lexicality", "rt_ms", "accuracy"};
  if (records[0] != header) {
    throw ParseError("'" + path + "': expected header 'stimulus,lexicality,rt_ms,accuracy'");
  }
  std::vector<CognitiveStimulus> out;
  out.reserve(records.size() - 1);
  for (size_t rec = 1; rec < records.size(); ++rec) {
    const auto& fields = records[rec];
    std::string at = "'" + path + "' row " + std::to_string(rec + 1);
    if (fields.size() != header.size()) {
      throw DataError(at + ": expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    CognitiveStimulus s;
    s.surface = fields[0];
    if (s.surface.empty()) throw DataError(at + ": empty stimulus");
    if (!utf8::is_valid(s.surface)) throw DataError(at + ": stimulus is not valid UTF-8");
    if (fields[1] == "word") {
      s.lexicality = Lexicality::kWord;
    } else if (fields[1] == "nonword") {
      s.lexicality = Lexicality::kNonword;
    } else {
      throw DataError(at + ": unknown lexicality '" + fields[1] + "'");
    }
    try {
      s.rt_ms = parse_double(fields[2], at);
      s.accuracy = parse_double(fields[3], at);
    } catch (const ParseError& e) {
      throw DataError(e.what());
    }
    if (!(s.rt_ms > 0)) throw DataError(at + ": rt_ms must be positive");
    if (!(s.accuracy >= 0.0 && s.accuracy <= 1.0)) {
      throw DataError(at + ": accuracy must be within [0, 1]");
    }
    out.push_back(std::move(s));
  }
  return out;
}

LineReader::LineReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
  if (!in_) throw IoError("cannot open '" + path + "'");
}

std::optional<std::string> LineReader::next() {
  std::string line;
  if (!std::getline(in_, line)) return std::nullopt;
  size_t err = 0;
  if (!utf8::codepoint_offsets(line, &err)) {
    throw DataError("'" + path_ + "': invalid UTF-8 at byte offset " +
                    std::to_string(byte_offset_ + err));
  }
  byte_offset_ += line.size() + 1;
  ++line_index_;
  return line;
}

CorpusStream::CorpusStream(const std::string& path, PretokenizerConfig cfg)
    : reader_(path), cfg_(cfg) {}

std::optional<Pretoken> CorpusStream::next() {
  while (buf_pos_ >= buf_.size()) {
    std::optional<std::string> line = reader_.next();
    if (!line) return std::nullopt;
    buf_ = pretokenize(*line, cfg_, doc_++);
    buf_pos_ = 0;
  }
  return buf_[buf_pos_++];
}

std::string_view report_format_name(ReportFormat f) {
  switch (f) {
    case ReportFormat::kJson: return "json";
    case ReportFormat::kTsv: return "tsv";
    case ReportFormat::kMarkdown: return "markdown";
  }
  return "?";
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "tsv") return ReportFormat::kTsv;
  if (name == "markdown") return ReportFormat::kMarkdown;
  throw ConfigError("unknown report format '" + std::string(name) + "'");
}

nlohmann::ordered_json report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["default"] = r.is_default;
  nlohmann::ordered_json prov;
  prov["seed"] = r.seed;
  prov["dropout_p"] = r.dropout_p;
  prov["alpha"] = r.alpha;
  prov["statistic"] = r.statistic;
  prov["renyi_norm"] = r.renyi_norm;
  prov["pretokenizer"] = r.pretokenizer;
  prov["fallback"] = r.fallback;
  prov["default_method"] = r.default_method;
  j["provenance"] = std::move(prov);
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  if (r.morphological_alignment) m["morphological_alignment"] = *r.morphological_alignment;
  if (!r.per_resource_f1.empty()) m["per_resource_f1"] = r.per_resource_f1;
  if (r.cognitive_plausibility) m["cognitive_plausibility"] = *r.cognitive_plausibility;
  if (r.per_setup_r) {
    nlohmann::ordered_json q;
    q["word_rt"] = r.per_setup_r->word_rt;
    q["word_accuracy"] = r.per_setup_r->word_accuracy;
    q["nonword_rt"] = r.per_setup_r->nonword_rt;
    q["nonword_accuracy"] = r.per_setup_r->nonword_accuracy;
    m["per_setup_r"] = std::move(q);
  }
  if (r.renyi_efficiency) m["renyi_efficiency"] = *r.renyi_efficiency;
  if (r.tokens_per_word) m["tokens_per_word"] = *r.tokens_per_word;
  if (r.decoding_diff) m["decoding_diff"] = *r.decoding_diff;
  j["metrics"] = std::move(m);
  return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.method = j.at("method").get<std::string>();
  r.is_default = j.at("default").get<bool>();
  const auto& p = j.at("provenance");
  r.seed = p.at("seed").get<uint64_t>();
  r.dropout_p = p.at("dropout_p").get<double>();
  r.alpha = p.at("alpha").get<double>();
  r.statistic = p.at("statistic").get<std::string>();
  r.renyi_norm = p.at("renyi_norm").get<std::string>();
  r.pretokenizer = p.at("pretokenizer").get<std::string>();
  r.fallback = p.at("fallback").get<std::string>();
  r.default_method = p.at("default_method").get<std::string>();
  const auto& m = j.at("metrics");
  if (m.contains("morphological_alignment")) {
    r.morphological_alignment = m["morphological_alignment"].get<double>();
  }
  if (m.contains("per_resource_f1")) {
    r.per_resource_f1 = m["per_resource_f1"].get<std::map<std::string, double>>();
  }
  if (m.contains("cognitive_plausibility")) {
    r.cognitive_plausibility = m["cognitive_plausibility"].get<double>();
  }
  if (m.contains("per_setup_r")) {
    const auto& q = m["per_setup_r"];
    CognitiveSetups s;
    s.word_rt = q.at("word_rt").get<double>();
    s.word_accuracy = q.at("word_accuracy").get<double>();
    s.nonword_rt = q.at("nonword_rt").get<double>();
    s.nonword_accuracy = q.at("nonword_accuracy").get<double>();
    r.per_setup_r = s;
  }
  if (m.contains("renyi_efficiency")) r.renyi_efficiency = m["renyi_efficiency"].get<double>();
  if (m.contains("tokens_per_word")) r.tokens_per_word = m["tokens_per_word"].get<double>();
  if (m.contains("decoding_diff")) r.decoding_diff = m["decoding_diff"].get<double>();
  return r;
}

namespace {

std::string fmt4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string cell(const std::optional<double>& v) { return v ? fmt4(*v) : "---"; }

std::string diff_cell(const EvalReport& r) {
  return r.is_default ? "---" : cell(r.decoding_diff);
}

constexpr std::string_view kTsvHeader =
    "method\tmorphological_alignment\tcognitive_plausibility\trenyi_efficiency\t"
    "tokens_per_word\tdecoding_diff\tdefault";

void tsv_row(std::ostream& out, const EvalReport& r) {
  out << r.method << '\t' << cell(r.morphological_alignment) << '\t'
      << cell(r.cognitive_plausibility) << '\t' << cell(r.renyi_efficiency) << '\t'
      << cell(r.tokens_per_word) << '\t' << diff_cell(r) << '\t'
      << (r.is_default ? "yes" : "no") << '\n';
}

constexpr std::string_view kMarkdownHeader =
    "| Method | Morphological alignment | Cognitive plausibility | Renyi efficiency "
    "| Tokens per word | Decoding diff |\n"
    "| --- | --- | --- | --- | --- | --- |\n";

void markdown_row(std::ostream& out, const EvalReport& r) {
  std::string name = r.is_default ? "*" + r.method + "*" : r.method;
  out << "| " << name << " | " << cell(r.morphological_alignment) << " | "
      << cell(r.cognitive_plausibility) << " | " << cell(r.renyi_efficiency) << " | "
      << cell(r.tokens_per_word) << " | " << diff_cell(r) << " |\n";
}

}  // namespace

void write_report(std::ostream& out, const EvalReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      out << report_to_json(r).dump(2) << '\n';
      return;
    case ReportFormat::kTsv:
      out << kTsvHeader << '\n';
      tsv_row(out, r);
      return;
    case ReportFormat::kMarkdown:
      out << kMarkdownHeader;
      markdown_row(out, r);
      return;
  }
}

void write_report(std::ostream& out, const CompareResult& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: {
      nlohmann::ordered_json j;
      j["reports"] = nlohmann::ordered_json::array();
      for (const auto& report : r.reports) j["reports"].push_back(report_to_json(report));
      j["skipped"] = nlohmann::ordered_json::array();
      for (const auto& s : r.skipped) {
        j["skipped"].push_back(nlohmann::ordered_json{{"method", s.method}, {"reason", s.reason}});
      }
      out << j.dump(2) << '\n';
      return;
    }
    case ReportFormat::kTsv:
      out << kTsvHeader << '\n';
      for (const auto& report : r.reports) tsv_row(out, report);
      for (const auto& s : r.skipped) out << "# skipped: " << s.method << " (" << s.reason << ")\n";
      return;
    case ReportFormat::kMarkdown:
      out << kMarkdownHeader;
      for (const auto& report : r.reports) markdown_row(out, report);
      if (!r.skipped.empty()) {
        out << '\n';
        for (const auto& s : r.skipped) {
          out << "Skipped: " << s.method << " (" << s.reason << ")\n";
        }
      }
      return;
  }
}

namespace {

template <typename T>
void write_file_impl(const std::string& path, const T& value, ReportFormat format) {
  if (path.empty()) {
    write_report(std::cout, value, format);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_report(out, value, format);
  out.flush();
  if (!out.good()) throw IoError("failed while writing '" + path + "'");
}

}  // namespace

void write_report_file(const std::string& path, const EvalReport& r, ReportFormat format) {
  write_file_impl(path, r, format);
}

void write_report_file(const std::string& path, const CompareResult& r, ReportFormat format) {
  write_file_impl(path, r, format);
}

}  // namespace tokeval
