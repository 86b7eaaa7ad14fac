#include "tokeval/pretok.hpp"

#include "tokeval/bytemap.hpp"
#include "tokeval/errors.hpp"
#include "tokeval/utf8.hpp"

namespace tokeval {

std::string_view pretok_mode_name(PretokMode mode) {
  switch (mode) {
    case PretokMode::kPlain: return "plain";
    case PretokMode::kMetaspace: return "metaspace";
    case PretokMode::kByteLevel: return "byte-level";
  }
  return "?";
}

PretokMode parse_pretok_mode(std::string_view name) {
  if (name == "plain") return PretokMode::kPlain;
  if (name == "metaspace") return PretokMode::kMetaspace;
  if (name == "byte-level") return PretokMode::kByteLevel;
  throw ConfigError("unknown pretokenizer '" + std::string(name) + "'");
}

Marker marker_for(PretokMode mode) {
  switch (mode) {
    case PretokMode::kPlain: return Marker::kNone;
    case PretokMode::kMetaspace: return Marker::kMetaspace;
    case PretokMode::kByteLevel: return Marker::kByteLevel;
  }
  return Marker::kNone;
}

std::vector<Pretoken> pretokenize(std::string_view text, const PretokenizerConfig& cfg,
                                  uint64_t doc) {
  std::vector<Pretoken> out;
  size_t pos = 0;
  std::string word;          // raw characters of the current run
  bool after_space = cfg.mark_first;
  uint64_t ordinal = 0;

  auto flush = [&]() {
    if (word.empty()) return;
    Pretoken p;
    p.doc = doc;
    p.ordinal = ordinal++;
    switch (cfg.mode) {
      case PretokMode::kPlain:
        p.surface = word;
        break;
      case PretokMode::kMetaspace:
        if (after_space) utf8::append_codepoint(p.surface, cfg.marker_cp);
        p.surface += word;
        break;
      case PretokMode::kByteLevel:
        p.surface = bytemap::encode(after_space ? " " + word : word);
        break;
    }
    out.push_back(std::move(p));
    word.clear();
  };

  while (pos < text.size()) {
    size_t start = pos;
    auto cp = utf8::next_codepoint(text, pos);
    if (!cp) throw DataError("invalid UTF-8 at byte offset " + std::to_string(start));
    if (utf8::is_whitespace(*cp)) {
      flush();
      after_space = true;
    } else {
      word.append(text.substr(start, pos - start));
    }
  }
  flush();
  return out;
}

}  // namespace tokeval
