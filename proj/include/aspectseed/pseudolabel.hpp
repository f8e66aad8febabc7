#pragma once

// Pseudo-label generation. ACD labels come from the piecewise similarity
// between a sentence and each aspect's seed words: when the sentence shares
// no word with any aspect's seed set G, every aspect is scored by the dot
// product of the summed sentence vector with the summed seed vectors;
// otherwise each aspect scores the sum of wᵀs over its matched seed words
// (0 when it matched none). ATE tags frequent nouns, ATP scores the context
// window around a term against the polarity seed sets with the same rule.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "aspectseed/corpus.hpp"
#include "aspectseed/embedding.hpp"
#include "aspectseed/error.hpp"
#include "aspectseed/seeds.hpp"
#include "aspectseed/util.hpp"

namespace aspectseed {

enum class SimilarityMode : unsigned char { SeedOverlap, EmbeddingDot };

struct SimilarityScores {
  std::vector<double> scores;  // one per aspect, lexicon order
  SimilarityMode mode = SimilarityMode::EmbeddingDot;
};

namespace detail {

// sum over the unique matched words of wᵀs, iterating seeds in G order so
// the result is deterministic
inline double overlap_score(const CategorySeeds& category,
                            const std::unordered_set<std::string>& sentence_words,
                            const std::vector<double>& s, const EmbeddingTable& table,
                            bool* any_match) {
  double score = 0.0;
  bool matched = false;
  for (const auto& seed : category.all) {
    if (!sentence_words.count(seed)) continue;
    matched = true;
    int idx = table.index_of(seed);
    if (idx < 0) continue;  // OOV matched seed contributes nothing
    score += detail::dot(table.row(idx), s.data(), table.dim());
  }
  if (any_match) *any_match = matched;
  return score;
}

}  // namespace detail

// the piecewise sentence-aspect similarity over all K aspects at once
inline SimilarityScores similarity(const TaggedSentence& sentence, const AspectLexicon& lexicon,
                                   const EmbeddingTable& table) {
  const auto& aspects = lexicon.aspects();
  if (aspects.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "similarity: need at least 2 aspects");
  }
  std::vector<double> s = embed_sentence(sentence, table);
  std::unordered_set<std::string> words;
  for (const auto& token : sentence.tokens) words.insert(token.surface);

  SimilarityScores out;
  out.scores.assign(aspects.size(), 0.0);
  bool any_overlap = false;
  for (std::size_t i = 0; i < aspects.size(); ++i) {
    bool matched = false;
    out.scores[i] = detail::overlap_score(aspects[i], words, s, table, &matched);
    any_overlap = any_overlap || matched;
  }
  if (any_overlap) {
    out.mode = SimilarityMode::SeedOverlap;
    return out;
  }
  out.mode = SimilarityMode::EmbeddingDot;
  for (std::size_t i = 0; i < aspects.size(); ++i) {
    auto a = embed_aspect(aspects[i].all, table, aspects[i].name);
    out.scores[i] = dot(s, a);
  }
  return out;
}

// argmax over the scores; ties go to the lowest aspect index
inline int acd_pseudo_label(const SimilarityScores& scores) {
  if (scores.scores.empty()) {
    throw Error(ErrorCode::InvalidArgument, "acd_pseudo_label: no scores");
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(scores.scores.size()); ++i) {
    if (scores.scores[static_cast<std::size_t>(i)] > scores.scores[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  return best;
}

// Connection(s): gap between the two most similar aspects; always >= 0
inline double connection(const SimilarityScores& scores) {
  if (scores.scores.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "connection: need at least 2 scores");
  }
  double top1 = scores.scores[0];
  double top2 = scores.scores[1];
  if (top2 > top1) std::swap(top1, top2);
  for (std::size_t i = 2; i < scores.scores.size(); ++i) {
    double v = scores.scores[i];
    if (v > top1) {
      top2 = top1;
      top1 = v;
    } else if (v > top2) {
      top2 = v;
    }
  }
  return top1 - top2;
}

enum class TermTag : unsigned char { O, B, I };

inline const char* to_string(TermTag t) {
  switch (t) {
    case TermTag::O: return "O";
    case TermTag::B: return "B";
    case TermTag::I: return "I";
  }
  return "O";
}

inline TermTag term_tag_from_string(std::string_view s) {
  if (s == "O") return TermTag::O;
  if (s == "B") return TermTag::B;
  if (s == "I") return TermTag::I;
  throw Error(ErrorCode::Data, "unknown term tag: '" + std::string(s) + "'");
}

enum class PolarityTag : unsigned char { O, BPos, IPos, BNeg, INeg };

inline const char* to_string(PolarityTag t) {
  switch (t) {
    case PolarityTag::O: return "O";
    case PolarityTag::BPos: return "B-POS";
    case PolarityTag::IPos: return "I-POS";
    case PolarityTag::BNeg: return "B-NEG";
    case PolarityTag::INeg: return "I-NEG";
  }
  return "O";
}

inline PolarityTag polarity_tag_from_string(std::string_view s) {
  if (s == "O") return PolarityTag::O;
  if (s == "B-POS") return PolarityTag::BPos;
  if (s == "I-POS") return PolarityTag::IPos;
  if (s == "B-NEG") return PolarityTag::BNeg;
  if (s == "I-NEG") return PolarityTag::INeg;
  throw Error(ErrorCode::Data, "unknown polarity tag: '" + std::string(s) + "'");
}

inline bool well_formed(const std::vector<TermTag>& tags) {
  bool inside = false;
  for (TermTag t : tags) {
    if (t == TermTag::I && !inside) return false;
    inside = t != TermTag::O;
  }
  return true;
}

inline bool well_formed(const std::vector<PolarityTag>& tags) {
  PolarityTag prev = PolarityTag::O;
  for (PolarityTag t : tags) {
    if (t == PolarityTag::IPos && !(prev == PolarityTag::BPos || prev == PolarityTag::IPos)) {
      return false;
    }
    if (t == PolarityTag::INeg && !(prev == PolarityTag::BNeg || prev == PolarityTag::INeg)) {
      return false;
    }
    prev = t;
  }
  return true;
}

struct PseudoLabeledSentence {
  TaggedSentence sentence;
  int acd_label = 0;  // aspect index, lexicon order
  double connection = 0.0;
  std::vector<TermTag> term_bio;
  std::vector<PolarityTag> polarity_bio;
};

// certain = {s : Connection(s) >= gamma}; the rest is S_u
inline std::pair<std::vector<PseudoLabeledSentence>, std::vector<PseudoLabeledSentence>>
filter_uncertain(const std::vector<PseudoLabeledSentence>& labeled, double gamma) {
  if (gamma < 0.0) throw Error(ErrorCode::InvalidArgument, "filter_uncertain: gamma must be >= 0");
  std::pair<std::vector<PseudoLabeledSentence>, std::vector<PseudoLabeledSentence>> out;
  for (const auto& s : labeled) {
    (s.connection >= gamma ? out.first : out.second).push_back(s);
  }
  return out;
}

// per-surface count of noun-tagged occurrences across the corpus
inline std::unordered_map<std::string, std::int64_t> noun_frequencies(
    const std::vector<TaggedSentence>& corpus) {
  std::unordered_map<std::string, std::int64_t> freq;
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence.tokens) {
      if (token.pos == Pos::Noun) ++freq[token.surface];
    }
  }
  return freq;
}

// tags nouns occurring more than m times; maximal runs of qualifying nouns
// become one B,I,... span
inline std::vector<TermTag> ate_tags(const TaggedSentence& sentence,
                                     const std::unordered_map<std::string, std::int64_t>& freq,
                                     int m) {
  std::vector<TermTag> tags(sentence.tokens.size(), TermTag::O);
  bool in_span = false;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const auto& token = sentence.tokens[i];
    bool qualifies = false;
    if (token.pos == Pos::Noun) {
      auto it = freq.find(token.surface);
      qualifies = it != freq.end() && it->second > m;
    }
    if (qualifies) {
      tags[i] = in_span ? TermTag::I : TermTag::B;
      in_span = true;
    } else {
      in_span = false;
    }
  }
  return tags;
}

inline std::vector<std::vector<TermTag>> ate_pseudo_label(
    const std::vector<TaggedSentence>& corpus, int m) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "ate_pseudo_label: m must be >= 0");
  auto freq = noun_frequencies(corpus);
  std::vector<std::vector<TermTag>> out;
  out.reserve(corpus.size());
  for (const auto& sentence : corpus) out.push_back(ate_tags(sentence, freq, m));
  return out;
}

// spans (start, end) of the B,I... runs in a tag sequence
inline std::vector<TermSpan> spans_from_tags(const std::vector<TermTag>& tags) {
  std::vector<TermSpan> spans;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == TermTag::B) {
      std::size_t j = i + 1;
      while (j < tags.size() && tags[j] == TermTag::I) ++j;
      spans.push_back(TermSpan{static_cast<int>(i), static_cast<int>(j), std::nullopt});
      i = j - 1;
    }
  }
  return spans;
}

// Polarity of a term from the window of up to `window` tokens on each side
// of the span (span itself excluded, clipped at sentence bounds), scored
// against the polarity seed sets with the piecewise similarity. POS wins ties.
inline Polarity atp_pseudo_label(const TaggedSentence& sentence, const TermSpan& span, int window,
                                 const AspectLexicon& lexicon, const EmbeddingTable& table) {
  if (window < 1) throw Error(ErrorCode::InvalidArgument, "atp: window must be >= 1");
  const int len = static_cast<int>(sentence.tokens.size());
  if (span.start < 0 || span.start >= span.end || span.end > len) {
    throw Error(ErrorCode::InvalidArgument, "atp: span out of bounds");
  }
  const auto& polarities = lexicon.polarities();
  if (polarities.size() != 2) {
    throw Error(ErrorCode::InvalidArgument, "atp: need exactly 2 polarity seed sets");
  }

  TaggedSentence context;
  context.id = sentence.id;
  int lo = std::max(0, span.start - window);
  for (int i = lo; i < span.start; ++i) {
    context.tokens.push_back(sentence.tokens[static_cast<std::size_t>(i)]);
  }
  int hi = std::min(len, span.end + window);
  for (int i = span.end; i < hi; ++i) {
    context.tokens.push_back(sentence.tokens[static_cast<std::size_t>(i)]);
  }

  std::vector<double> s = embed_sentence(context, table);
  std::unordered_set<std::string> words;
  for (const auto& token : context.tokens) words.insert(token.surface);

  std::vector<double> scores(2, 0.0);
  bool any_overlap = false;
  for (std::size_t i = 0; i < 2; ++i) {
    bool matched = false;
    scores[i] = detail::overlap_score(polarities[i], words, s, table, &matched);
    any_overlap = any_overlap || matched;
  }
  if (!any_overlap) {
    for (std::size_t i = 0; i < 2; ++i) {
      auto a = embed_aspect(polarities[i].all, table, polarities[i].name);
      scores[i] = dot(s, a);
    }
  }
  return scores[1] > scores[0] ? Polarity::Neg : Polarity::Pos;
}

inline PolarityTag begin_tag(Polarity p) {
  return p == Polarity::Pos ? PolarityTag::BPos : PolarityTag::BNeg;
}
inline PolarityTag inside_tag(Polarity p) {
  return p == Polarity::Pos ? PolarityTag::IPos : PolarityTag::INeg;
}

// full pseudo-labeling of one sentence against a lexicon
inline PseudoLabeledSentence pseudo_label_sentence(
    const TaggedSentence& sentence, const AspectLexicon& lexicon, const EmbeddingTable& table,
    const std::unordered_map<std::string, std::int64_t>& noun_freq, int m, int atp_window) {
  PseudoLabeledSentence out;
  out.sentence = sentence;
  auto scores = similarity(sentence, lexicon, table);
  out.acd_label = acd_pseudo_label(scores);
  out.connection = connection(scores);
  out.term_bio = ate_tags(sentence, noun_freq, m);
  out.polarity_bio.assign(sentence.tokens.size(), PolarityTag::O);
  for (const auto& span : spans_from_tags(out.term_bio)) {
    Polarity p = atp_pseudo_label(sentence, span, atp_window, lexicon, table);
    out.polarity_bio[static_cast<std::size_t>(span.start)] = begin_tag(p);
    for (int i = span.start + 1; i < span.end; ++i) {
      out.polarity_bio[static_cast<std::size_t>(i)] = inside_tag(p);
    }
  }
  return out;
}

inline std::vector<PseudoLabeledSentence> pseudo_label_corpus(
    const std::vector<TaggedSentence>& corpus, const AspectLexicon& lexicon,
    const EmbeddingTable& table, int m, int atp_window) {
  auto freq = noun_frequencies(corpus);
  std::vector<PseudoLabeledSentence> out;
  out.reserve(corpus.size());
  for (const auto& sentence : corpus) {
    out.push_back(pseudo_label_sentence(sentence, lexicon, table, freq, m, atp_window));
  }
  return out;
}

// Dump format, one row per sentence:
//   id <TAB> acd_label (1-based) <TAB> connection <TAB> term tags <TAB> polarity tags
// with tags space-joined and the connection in round-trip-exact form.
inline std::string serialize_pseudo_labels(const std::vector<PseudoLabeledSentence>& labeled) {
  std::string out;
  for (const auto& row : labeled) {
    std::vector<std::string> term, pol;
    for (TermTag t : row.term_bio) term.push_back(to_string(t));
    for (PolarityTag t : row.polarity_bio) pol.push_back(to_string(t));
    out += std::to_string(row.sentence.id);
    out += '\t';
    out += std::to_string(row.acd_label + 1);
    out += '\t';
    out += format_double(row.connection);
    out += '\t';
    out += join(term, " ");
    out += '\t';
    out += join(pol, " ");
    out += '\n';
  }
  return out;
}

inline void save_pseudo_labels(const std::vector<PseudoLabeledSentence>& labeled,
                               const std::string& path) {
  write_file(path, serialize_pseudo_labels(labeled));
}

// A dump row without the token text; ids refer back to the labeled corpus.
struct PseudoLabelRow {
  int id = 0;
  int acd_label = 0;  // back to 0-based
  double connection = 0.0;
  std::vector<TermTag> term_bio;
  std::vector<PolarityTag> polarity_bio;
};

inline std::vector<PseudoLabelRow> load_pseudo_labels(const std::string& path) {
  std::vector<PseudoLabelRow> rows;
  int line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 5) {
      throw Error(ErrorCode::Data, path + ":" + std::to_string(line_no) +
                                       ": expected 5 tab-separated fields");
    }
    PseudoLabelRow row;
    row.id = static_cast<int>(parse_int(fields[0]));
    int label = static_cast<int>(parse_int(fields[1]));
    if (label < 1) {
      throw Error(ErrorCode::Data,
                  path + ":" + std::to_string(line_no) + ": acd label must be >= 1");
    }
    row.acd_label = label - 1;
    row.connection = parse_double(fields[2]);
    for (const auto& t : split_ws(fields[3])) row.term_bio.push_back(term_tag_from_string(t));
    for (const auto& t : split_ws(fields[4])) {
      row.polarity_bio.push_back(polarity_tag_from_string(t));
    }
    if (row.term_bio.size() != row.polarity_bio.size()) {
      throw Error(ErrorCode::Data,
                  path + ":" + std::to_string(line_no) + ": tag sequences differ in length");
    }
    if (!well_formed(row.term_bio) || !well_formed(row.polarity_bio)) {
      throw Error(ErrorCode::Data,
                  path + ":" + std::to_string(line_no) + ": malformed BIO sequence");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace aspectseed
