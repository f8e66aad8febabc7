#pragma once

// Seed-word enhancement. From pseudo-labels computed with the initial seeds
// only, collect boundary keywords T_b (nouns/adjectives seen under at least
// two distinct pseudo-label aspects), keywords T_u of the uncertain sentences
// S_u (connection below γ), intersect them, and map each word of T = T_b ∩ T_u
// to the aspect maximizing its summed pairwise clarity — the TF-IDF-based
// likelihood ratio between aspect pseudo-documents. Mapped words extend the
// aspect seed sets as additional seeds T.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "aspectseed/corpus.hpp"
#include "aspectseed/embedding.hpp"
#include "aspectseed/error.hpp"
#include "aspectseed/pseudolabel.hpp"
#include "aspectseed/seeds.hpp"

namespace aspectseed {

class Stopwords {
 public:
  Stopwords() : words_(default_words().begin(), default_words().end()) {}

  explicit Stopwords(std::vector<std::string> words)
      : words_(words.begin(), words.end()) {}

  // one word per line, '#' comments allowed
  static Stopwords from_file(const std::string& path) {
    std::vector<std::string> words;
    for (const auto& raw : read_lines(path)) {
      auto line = trim(raw);
      if (line.empty() || line.front() == '#') continue;
      words.emplace_back(line);
    }
    return Stopwords(std::move(words));
  }

  bool contains(const std::string& word) const { return words_.count(word) != 0; }
  std::size_t size() const { return words_.size(); }

  static const std::vector<std::string>& default_words() {
    static const std::vector<std::string> words = {
        "a",       "about",   "above",   "after",   "again",    "against", "all",
        "am",      "an",      "and",     "any",     "are",      "aren",    "as",
        "at",      "be",      "because", "been",    "before",   "being",   "below",
        "between", "both",    "but",     "by",      "can",      "cannot",  "could",
        "couldn",  "did",     "didn",    "do",      "does",     "doesn",   "doing",
        "don",     "down",    "during",  "each",    "few",      "for",     "from",
        "further", "had",     "hadn",    "has",     "hasn",     "have",    "haven",
        "having",  "he",      "her",     "here",    "hers",     "herself", "him",
        "himself", "his",     "how",     "i",       "if",       "in",      "into",
        "is",      "isn",     "it",      "its",     "itself",   "just",    "ll",
        "m",       "me",      "more",    "most",    "mustn",    "my",      "myself",
        "no",      "nor",     "not",     "now",     "of",       "off",     "on",
        "once",    "only",    "or",      "other",   "our",      "ours",    "out",
        "over",    "own",     "re",      "s",       "same",     "shan",    "she",
        "should",  "shouldn", "so",      "some",    "such",     "t",       "than",
        "that",    "the",     "their",   "theirs",  "them",     "then",    "there",
        "these",   "they",    "this",    "those",   "through",  "to",      "too",
        "under",   "until",   "up",      "ve",      "very",     "was",     "wasn",
        "we",      "were",    "weren",   "what",    "when",     "where",   "which",
        "while",   "who",     "whom",    "why",     "will",     "with",    "won",
        "would",   "wouldn",  "you",     "your",    "yours",    "yourself",
        "yourselves",
    };
    return words;
  }

 private:
  std::unordered_set<std::string> words_;
};

inline bool is_keyword_pos(Pos pos) { return pos == Pos::Noun || pos == Pos::Adj; }

enum class KeywordKind : unsigned char { Boundary, Uncertain, Intersection };

// keywords with, per word, the number of sentences seen under each aspect
struct KeywordSet {
  KeywordKind kind = KeywordKind::Boundary;
  std::map<std::string, std::map<int, int>> words;  // word -> aspect -> sentence count

  bool contains(const std::string& word) const { return words.count(word) != 0; }
  std::size_t size() const { return words.size(); }

  std::vector<std::string> word_list() const {
    std::vector<std::string> out;
    out.reserve(words.size());
    for (const auto& [word, _] : words) out.push_back(word);
    return out;
  }
};

namespace detail {

// word -> aspects under which it occurs with keyword POS, counting each
// sentence once
inline std::map<std::string, std::map<int, int>> keyword_occurrences(
    const std::vector<TaggedSentence>& sentences, const std::vector<int>& labels,
    const AspectLexicon& lexicon, const Stopwords& stopwords) {
  std::map<std::string, std::map<int, int>> occ;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    std::set<std::string> in_sentence;
    for (const auto& token : sentences[i].tokens) {
      if (!is_keyword_pos(token.pos)) continue;
      if (lexicon.is_initial_seed(token.surface)) continue;
      if (stopwords.contains(token.surface)) continue;
      in_sentence.insert(token.surface);
    }
    for (const auto& word : in_sentence) ++occ[word][labels[i]];
  }
  return occ;
}

}  // namespace detail

// T_b: keywords appearing in sentences of at least two distinct label aspects
inline KeywordSet boundary_keywords(const std::vector<TaggedSentence>& sentences,
                                    const std::vector<int>& labels, const AspectLexicon& lexicon,
                                    const Stopwords& stopwords) {
  if (sentences.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "boundary_keywords: labels do not match sentences");
  }
  KeywordSet out;
  out.kind = KeywordKind::Boundary;
  for (auto& [word, aspects] :
       detail::keyword_occurrences(sentences, labels, lexicon, stopwords)) {
    if (aspects.size() >= 2) out.words.emplace(word, std::move(aspects));
  }
  return out;
}

// T_u: all keywords of the uncertain sentences
inline KeywordSet uncertain_keywords(const std::vector<TaggedSentence>& uncertain,
                                     const std::vector<int>& labels, const AspectLexicon& lexicon,
                                     const Stopwords& stopwords) {
  if (uncertain.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "uncertain_keywords: labels do not match sentences");
  }
  KeywordSet out;
  out.kind = KeywordKind::Uncertain;
  out.words = detail::keyword_occurrences(uncertain, labels, lexicon, stopwords);
  return out;
}

inline KeywordSet intersect_keywords(const KeywordSet& a, const KeywordSet& b) {
  KeywordSet out;
  out.kind = KeywordKind::Intersection;
  for (const auto& [word, aspects] : a.words) {
    auto it = b.words.find(word);
    if (it == b.words.end()) continue;
    auto merged = aspects;
    for (const auto& [aspect, count] : it->second) merged[aspect] += count;
    out.words.emplace(word, std::move(merged));
  }
  return out;
}

// Clarity scores over the K aspect pseudo-documents (sentences concatenated
// per pseudo-label aspect). t is the l1-normalized TF-IDF of a word within
// its aspect document, with IDF = log(K / #documents containing the word);
// the clarity of w for the ordered pair (a_i, a_j) is
//   (t_i + ε) · log((t_i + ε) / (t_j + ε)).
class ClarityTable {
 public:
  ClarityTable(const std::vector<TaggedSentence>& sentences, const std::vector<int>& labels,
               int num_aspects, double epsilon = 1e-9)
      : k_(num_aspects), epsilon_(epsilon), t_(static_cast<std::size_t>(num_aspects)) {
    if (sentences.size() != labels.size()) {
      throw Error(ErrorCode::LengthMismatch, "clarity: labels do not match sentences");
    }
    if (num_aspects < 2) throw Error(ErrorCode::InvalidArgument, "clarity: need >= 2 aspects");
    if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "clarity: epsilon must be > 0");

    std::vector<std::map<std::string, std::int64_t>> counts(static_cast<std::size_t>(k_));
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      int label = labels[i];
      if (label < 0 || label >= k_) {
        throw Error(ErrorCode::UnknownAspect,
                    "clarity: label " + std::to_string(label) + " out of range");
      }
      for (const auto& token : sentences[i].tokens) {
        ++counts[static_cast<std::size_t>(label)][token.surface];
      }
    }
    std::map<std::string, int> df;
    for (const auto& doc : counts) {
      for (const auto& [word, _] : doc) ++df[word];
    }
    for (int a = 0; a < k_; ++a) {
      const auto& doc = counts[static_cast<std::size_t>(a)];
      double total = 0.0;
      std::map<std::string, double> tfidf;
      for (const auto& [word, count] : doc) {
        double idf = std::log(static_cast<double>(k_) / static_cast<double>(df[word]));
        double score = static_cast<double>(count) * idf;
        tfidf.emplace(word, score);
        total += score;
      }
      auto& t = t_[static_cast<std::size_t>(a)];
      if (total > 0.0) {
        for (const auto& [word, score] : tfidf) t.emplace(word, score / total);
      }
    }
  }

  int num_aspects() const { return k_; }
  double epsilon() const { return epsilon_; }

  // l1-normalized TF-IDF before smoothing; 0 for absent words
  double t(const std::string& word, int aspect) const {
    check_aspect(aspect);
    const auto& doc = t_[static_cast<std::size_t>(aspect)];
    auto it = doc.find(word);
    return it == doc.end() ? 0.0 : it->second;
  }

  double clarity(const std::string& word, int aspect_i, int aspect_j) const {
    double ti = t(word, aspect_i) + epsilon_;
    double tj = t(word, aspect_j) + epsilon_;
    return ti * std::log(ti / tj);
  }

  // Σ over the other aspects of clarity(word, aspect, other)
  double aggregate(const std::string& word, int aspect) const {
    check_aspect(aspect);
    double sum = 0.0;
    for (int j = 0; j < k_; ++j) {
      if (j != aspect) sum += clarity(word, aspect, j);
    }
    return sum;
  }

 private:
  void check_aspect(int aspect) const {
    if (aspect < 0 || aspect >= k_) {
      throw Error(ErrorCode::UnknownAspect,
                  "clarity: aspect index " + std::to_string(aspect) + " out of range");
    }
  }

  int k_;
  double epsilon_;
  std::vector<std::unordered_map<std::string, double>> t_;
};

// T_a: each word goes to the aspect with the highest clarity aggregate
// (lowest index on ties); words whose best aggregate is <= 0 are dropped.
inline std::map<std::string, int> auto_map(const KeywordSet& intersection,
                                           const ClarityTable& clarity) {
  std::map<std::string, int> mapped;
  for (const auto& [word, _] : intersection.words) {
    int best = 0;
    double best_score = clarity.aggregate(word, 0);
    for (int a = 1; a < clarity.num_aspects(); ++a) {
      double score = clarity.aggregate(word, a);
      if (score > best_score) {
        best = a;
        best_score = score;
      }
    }
    if (best_score > 0.0) mapped.emplace(word, best);
  }
  return mapped;
}

// Full trace of one enhancement run.
struct SecResult {
  std::vector<int> temp_labels;        // pseudo-labels from H only, corpus order
  std::vector<double> connections;     // connection scores, corpus order
  KeywordSet boundary;                 // T_b
  std::vector<int> uncertain_indices;  // positions of S_u within the corpus
  KeywordSet uncertain;                // T_u
  KeywordSet intersection;             // T
  std::map<std::string, int> additions;  // T_a: word -> aspect index
};

inline SecResult enhance_seed_words(const std::vector<TaggedSentence>& corpus,
                                    const AspectLexicon& lexicon, const EmbeddingTable& table,
                                    double gamma, double epsilon = 1e-9,
                                    const Stopwords& stopwords = Stopwords()) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "enhance_seed_words: empty corpus");
  if (gamma < 0.0) throw Error(ErrorCode::InvalidArgument, "enhance_seed_words: gamma < 0");

  const AspectLexicon initial = lexicon.initial_only();

  SecResult result;
  result.temp_labels.reserve(corpus.size());
  result.connections.reserve(corpus.size());
  for (const auto& sentence : corpus) {
    auto scores = similarity(sentence, initial, table);
    result.temp_labels.push_back(acd_pseudo_label(scores));
    result.connections.push_back(connection(scores));
  }

  result.boundary = boundary_keywords(corpus, result.temp_labels, initial, stopwords);

  std::vector<TaggedSentence> uncertain_sentences;
  std::vector<int> uncertain_labels;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (result.connections[i] < gamma) {
      result.uncertain_indices.push_back(static_cast<int>(i));
      uncertain_sentences.push_back(corpus[i]);
      uncertain_labels.push_back(result.temp_labels[i]);
    }
  }
  result.uncertain = uncertain_keywords(uncertain_sentences, uncertain_labels, initial, stopwords);

  result.intersection = intersect_keywords(result.boundary, result.uncertain);

  ClarityTable clarity(corpus, result.temp_labels, initial.num_aspects(), epsilon);
  result.additions = auto_map(result.intersection, clarity);
  return result;
}

}  // namespace aspectseed
