#pragma once

// Corpus ingestion: tokenization, tagged sentences, splits, and the line-based
// file formats shared by the rest of the pipeline.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aspectseed/error.hpp"
#include "aspectseed/util.hpp"

namespace aspectseed {

enum class Pos : unsigned char { Noun, Adj, Verb, Other };

inline const char* to_string(Pos pos) {
  switch (pos) {
    case Pos::Noun: return "NOUN";
    case Pos::Adj: return "ADJ";
    case Pos::Verb: return "VERB";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

inline Pos pos_from_string(std::string_view s) {
  if (s == "NOUN") return Pos::Noun;
  if (s == "ADJ") return Pos::Adj;
  if (s == "VERB") return Pos::Verb;
  if (s == "OTHER") return Pos::Other;
  throw Error(ErrorCode::Data, "unknown POS tag: '" + std::string(s) + "'");
}

struct Token {
  std::string surface;  // lowercased form, never empty
  Pos pos = Pos::Other;
};

struct TaggedSentence {
  int id = 0;
  std::vector<Token> tokens;

  std::vector<std::string> surfaces() const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.surface);
    return out;
  }

  std::string text() const { return join(surfaces(), " "); }
};

enum class SplitRole { InDomain, Dev, Bank, Test };

struct CorpusSplit {
  SplitRole role = SplitRole::Bank;
  std::vector<TaggedSentence> sentences;
};

enum class Polarity : unsigned char { Pos, Neg };

inline const char* to_string(Polarity p) { return p == Polarity::Pos ? "POS" : "NEG"; }

inline Polarity polarity_from_string(std::string_view s) {
  if (s == "POS") return Polarity::Pos;
  if (s == "NEG") return Polarity::Neg;
  throw Error(ErrorCode::Data, "unknown polarity: '" + std::string(s) + "'");
}

// Half-open token span [start, end); polarity present when the span carries one.
struct TermSpan {
  int start = 0;
  int end = 0;
  std::optional<Polarity> polarity;

  bool operator==(const TermSpan& other) const {
    return start == other.start && end == other.end && polarity == other.polarity;
  }
};

// Lowercase, split on whitespace; every other non-alphanumeric byte becomes a
// one-character token of its own. Bytes >= 0x80 are kept inside words so UTF-8
// sequences stay glued together. Total: never fails, may return empty.
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      out.push_back(Token{current, Pos::Other});
      current.clear();
    }
  };
  for (char raw : text) {
    unsigned char c = static_cast<unsigned char>(raw);
    if (c < 0x80 && std::isspace(c)) {
      flush();
      continue;
    }
    bool word_char = c >= 0x80 || std::isalnum(c);
    if (word_char) {
      current += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    } else {
      flush();
      out.push_back(Token{std::string(1, raw), Pos::Other});
    }
  }
  flush();
  return out;
}

// Deterministic shuffle-split: first part gets round(ratio * N) sentences.
// Both parts keep the original corpus order.
inline std::pair<std::vector<TaggedSentence>, std::vector<TaggedSentence>> split_corpus(
    const std::vector<TaggedSentence>& sentences, double ratio, std::uint64_t seed) {
  if (sentences.empty()) throw Error(ErrorCode::EmptyCorpus, "cannot split an empty corpus");
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "split ratio must be in (0, 1)");
  }
  const std::size_t n = sentences.size();
  auto first_size = static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(n)));
  first_size = std::min(first_size, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<bool> in_first(n, false);
  for (std::size_t i = 0; i < first_size; ++i) in_first[order[i]] = true;

  std::pair<std::vector<TaggedSentence>, std::vector<TaggedSentence>> result;
  for (std::size_t i = 0; i < n; ++i) {
    (in_first[i] ? result.first : result.second).push_back(sentences[i]);
  }
  return result;
}

// A sentence from a labeled evaluation file: gold aspect plus optional term spans.
struct LabeledSentence {
  TaggedSentence sentence;
  std::string aspect;
  std::vector<TermSpan> spans;
};

namespace detail {

inline TermSpan parse_span(std::string_view field, std::size_t sentence_len, int line_no) {
  auto parts = split(field, ':');
  if (parts.size() != 2 && parts.size() != 3) {
    throw Error(ErrorCode::Data,
                "line " + std::to_string(line_no) + ": bad span '" + std::string(field) + "'");
  }
  TermSpan span;
  span.start = static_cast<int>(parse_int(parts[0]));
  span.end = static_cast<int>(parse_int(parts[1]));
  if (parts.size() == 3 && !parts[2].empty() && parts[2] != "-") {
    span.polarity = polarity_from_string(parts[2]);
  }
  if (span.start < 0 || span.start >= span.end ||
      static_cast<std::size_t>(span.end) > sentence_len) {
    throw Error(ErrorCode::Data, "line " + std::to_string(line_no) + ": span " +
                                     std::string(field) + " out of bounds");
  }
  return span;
}

}  // namespace detail

// One sentence per line. Blank (or whitespace-only) lines are skipped; ids
// number the kept sentences starting at id_base.
template <typename Tagger>
std::vector<TaggedSentence> load_corpus_file(const std::string& path, const Tagger& tagger,
                                             int id_base = 0) {
  std::vector<TaggedSentence> out;
  int next_id = id_base;
  for (const auto& line : read_lines(path)) {
    TaggedSentence sentence;
    sentence.tokens = tokenize(line);
    if (sentence.tokens.empty()) continue;
    sentence.id = next_id++;
    tagger.tag_sentence(sentence);
    out.push_back(std::move(sentence));
  }
  return out;
}

// Tab-separated: sentence, aspect label, optional space-separated
// start:end[:polarity] spans (token offsets, end exclusive). A label field
// holding several '|'-separated aspects marks a multi-aspect sentence; those
// are dropped here, at load time. Returns kept sentences; `dropped_multi`
// (when non-null) receives the number of dropped lines.
template <typename Tagger>
std::vector<LabeledSentence> load_labeled_file(const std::string& path, const Tagger& tagger,
                                               int id_base = 0, int* dropped_multi = nullptr) {
  std::vector<LabeledSentence> out;
  int next_id = id_base;
  int dropped = 0;
  int line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() < 2) {
      throw Error(ErrorCode::Data,
                  "line " + std::to_string(line_no) + ": expected at least 2 tab-separated fields");
    }
    auto labels = split(trim(fields[1]), '|');
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (labels.size() != 1 || labels[0].empty()) {
      ++dropped;
      continue;
    }
    LabeledSentence labeled;
    labeled.sentence.tokens = tokenize(fields[0]);
    if (labeled.sentence.tokens.empty()) {
      throw Error(ErrorCode::Data, "line " + std::to_string(line_no) + ": empty sentence");
    }
    labeled.sentence.id = next_id++;
    tagger.tag_sentence(labeled.sentence);
    labeled.aspect = labels[0];
    if (fields.size() >= 3) {
      for (const auto& field : split_ws(fields[2])) {
        labeled.spans.push_back(
            detail::parse_span(field, labeled.sentence.tokens.size(), line_no));
      }
      std::sort(labeled.spans.begin(), labeled.spans.end(),
                [](const TermSpan& a, const TermSpan& b) { return a.start < b.start; });
      for (std::size_t i = 1; i < labeled.spans.size(); ++i) {
        if (labeled.spans[i].start < labeled.spans[i - 1].end) {
          throw Error(ErrorCode::Data,
                      "line " + std::to_string(line_no) + ": overlapping term spans");
        }
      }
    }
    out.push_back(std::move(labeled));
  }
  if (dropped_multi) *dropped_multi = dropped;
  return out;
}

}  // namespace aspectseed
