#pragma once

// Retrieval-based data augmentation. Prior task knowledge — seed words and
// certain in-domain sentences — is embedded into task queries; the unlabeled
// data bank is indexed with unit-norm sentence vectors, and the k nearest
// neighbors of each query by cosine are pulled in, pseudo-labeled with the
// enhanced lexicon, and filtered by connection.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aspectseed/corpus.hpp"
#include "aspectseed/embedding.hpp"
#include "aspectseed/error.hpp"
#include "aspectseed/log.hpp"
#include "aspectseed/pseudolabel.hpp"
#include "aspectseed/seeds.hpp"

namespace aspectseed {

namespace detail {

// normalize to unit l2 norm; the zero vector stays zero
inline void l2_normalize(std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (sq <= 0.0) return;
  double inv = 1.0 / std::sqrt(sq);
  for (double& x : v) x *= inv;
}

inline bool is_zero(const std::vector<double>& v) {
  for (double x : v) {
    if (x != 0.0) return false;
  }
  return true;
}

}  // namespace detail

// Pluggable sentence encoder. Implementations return vectors of a fixed
// dimension with unit l2 norm; a zero vector signals "nothing to encode" and
// is skipped by the callers.
class SentenceEncoderBackend {
 public:
  virtual ~SentenceEncoderBackend() = default;
  virtual std::string id() const = 0;
  virtual int dim() const = 0;
  virtual std::vector<double> encode_sentence(const TaggedSentence& sentence) const = 0;
  virtual std::vector<double> encode_word(const std::string& word) const = 0;
};

// default backend: l2-normalized sum of CBOW word vectors
class CbowSumEncoder : public SentenceEncoderBackend {
 public:
  explicit CbowSumEncoder(const EmbeddingTable& table) : table_(&table) {}

  std::string id() const override { return "cbow-sum"; }
  int dim() const override { return table_->dim(); }

  std::vector<double> encode_sentence(const TaggedSentence& sentence) const override {
    std::vector<double> v = embed_sentence(sentence, *table_);
    detail::l2_normalize(v);
    return v;
  }

  std::vector<double> encode_word(const std::string& word) const override {
    std::vector<double> v(static_cast<std::size_t>(table_->dim()), 0.0);
    int idx = table_->index_of(word);
    if (idx >= 0) {
      const double* row = table_->row(idx);
      std::copy(row, row + table_->dim(), v.begin());
      detail::l2_normalize(v);
    }
    return v;
  }

 private:
  const EmbeddingTable* table_;
};

// Precomputed vectors loaded from an embedding-format file. Sentences are
// looked up by their decimal id, words by surface; a missing key is an error
// so silently misaligned files cannot slip through.
class FileVectorEncoder : public SentenceEncoderBackend {
 public:
  explicit FileVectorEncoder(EmbeddingTable table) : table_(std::move(table)) {
    for (int i = 0; i < table_.size(); ++i) {
      std::vector<double> v(table_.row(i), table_.row(i) + table_.dim());
      detail::l2_normalize(v);
      std::copy(v.begin(), v.end(), table_.row(i));
    }
  }

  static FileVectorEncoder from_file(const std::string& path) {
    return FileVectorEncoder(EmbeddingTable::load(path));
  }

  std::string id() const override { return "file-vectors"; }
  int dim() const override { return table_.dim(); }

  std::vector<double> encode_sentence(const TaggedSentence& sentence) const override {
    return lookup(std::to_string(sentence.id));
  }

  std::vector<double> encode_word(const std::string& word) const override {
    return lookup(word);
  }

 private:
  std::vector<double> lookup(const std::string& key) const {
    int idx = table_.index_of(key);
    if (idx < 0) {
      throw Error(ErrorCode::Data, "vector file has no entry for key '" + key + "'");
    }
    return std::vector<double>(table_.row(idx), table_.row(idx) + table_.dim());
  }

  EmbeddingTable table_;
};

enum class QueryOrigin : unsigned char { SeedWord, CertainSentence };

struct TaskQuery {
  std::vector<double> vector;  // unit norm
  QueryOrigin origin = QueryOrigin::SeedWord;
  std::string label;  // the seed word, or the sentence id in decimal
};

struct TaskEmbeddingSet {
  int dim = 0;
  std::vector<TaskQuery> queries;
};

// one query per seed word (all aspects, seed order) plus one per certain
// sentence; zero vectors are skipped with a warning
inline TaskEmbeddingSet build_task_embeddings(const AspectLexicon& lexicon,
                                              const std::vector<TaggedSentence>& certain,
                                              const SentenceEncoderBackend& encoder) {
  TaskEmbeddingSet set;
  set.dim = encoder.dim();
  for (const auto& aspect : lexicon.aspects()) {
    for (const auto& word : aspect.all) {
      std::vector<double> v = encoder.encode_word(word);
      if (detail::is_zero(v)) {
        warn("task embeddings: seed word '" + word + "' has no vector, skipped");
        continue;
      }
      set.queries.push_back({std::move(v), QueryOrigin::SeedWord, word});
    }
  }
  for (const auto& sentence : certain) {
    std::vector<double> v = encoder.encode_sentence(sentence);
    if (detail::is_zero(v)) {
      warn("task embeddings: sentence " + std::to_string(sentence.id) +
           " has no vector, skipped");
      continue;
    }
    set.queries.push_back(
        {std::move(v), QueryOrigin::CertainSentence, std::to_string(sentence.id)});
  }
  if (set.queries.empty()) {
    throw Error(ErrorCode::EmptyPriorKnowledge, "no task embeddings could be built");
  }
  return set;
}

// immutable exact-search index over the data bank
class RetrievalIndex {
 public:
  static RetrievalIndex build(const std::vector<TaggedSentence>& bank,
                              const SentenceEncoderBackend& encoder) {
    if (bank.empty()) throw Error(ErrorCode::EmptyBank, "retrieval index: empty bank");
    RetrievalIndex index;
    index.dim_ = encoder.dim();
    index.ids_.reserve(bank.size());
    index.vectors_.reserve(bank.size() * static_cast<std::size_t>(index.dim_));
    for (const auto& sentence : bank) {
      std::vector<double> v = encoder.encode_sentence(sentence);
      index.ids_.push_back(sentence.id);
      index.vectors_.insert(index.vectors_.end(), v.begin(), v.end());
    }
    return index;
  }

  int size() const { return static_cast<int>(ids_.size()); }
  int dim() const { return dim_; }
  const std::vector<int>& ids() const { return ids_; }
  const double* vector(int i) const {
    return vectors_.data() + static_cast<std::size_t>(i) * dim_;
  }

 private:
  int dim_ = 0;
  std::vector<int> ids_;
  std::vector<double> vectors_;
};

struct RetrievalResult {
  std::vector<std::vector<int>> per_query;  // sentence ids, best first
  std::vector<int> ids;                     // union over queries, ascending
  std::map<int, std::vector<int>> origins;  // sentence id -> query indices
};

// exact top-k by cosine per query, ties broken toward the lower sentence id
inline RetrievalResult knn_retrieve(const RetrievalIndex& index, const TaskEmbeddingSet& queries,
                                    int k) {
  if (index.size() == 0) throw Error(ErrorCode::EmptyBank, "knn_retrieve: empty bank");
  if (k < 1 || k > index.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "knn_retrieve: k must be in [1, " + std::to_string(index.size()) + "]");
  }
  if (queries.dim != index.dim()) {
    throw Error(ErrorCode::LengthMismatch, "knn_retrieve: query and bank dimensions differ");
  }

  RetrievalResult result;
  result.per_query.reserve(queries.queries.size());
  std::vector<std::pair<double, int>> scored(static_cast<std::size_t>(index.size()));
  for (std::size_t q = 0; q < queries.queries.size(); ++q) {
    const auto& query = queries.queries[q].vector;
    for (int i = 0; i < index.size(); ++i) {
      const double* v = index.vector(i);
      double dot = 0.0;
      for (int d = 0; d < index.dim(); ++d) dot += query[static_cast<std::size_t>(d)] * v[d];
      scored[static_cast<std::size_t>(i)] = {dot, index.ids()[static_cast<std::size_t>(i)]};
    }
    auto better = [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    };
    std::partial_sort(scored.begin(), scored.begin() + k, scored.end(), better);
    std::vector<int> top;
    top.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      int id = scored[static_cast<std::size_t>(i)].second;
      top.push_back(id);
      result.origins[id].push_back(static_cast<int>(q));
    }
    result.per_query.push_back(std::move(top));
  }
  for (const auto& [id, _] : result.origins) result.ids.push_back(id);
  return result;
}

struct AugmentedSet {
  std::vector<PseudoLabeledSentence> sentences;  // kept candidates, input order
  std::map<int, std::vector<int>> origins;       // for kept sentence ids
  int dropped = 0;                               // candidates below gamma
};

// pseudo-label retrieved candidates with the (enhanced) lexicon and keep the
// certain ones; filter=false keeps everything
inline AugmentedSet label_augmented(const std::vector<TaggedSentence>& candidates,
                                    const AspectLexicon& lexicon, const EmbeddingTable& table,
                                    double gamma, int min_noun_count, int atp_window,
                                    bool filter = true,
                                    const std::map<int, std::vector<int>>* origins = nullptr) {
  if (gamma < 0.0) throw Error(ErrorCode::InvalidArgument, "label_augmented: gamma < 0");
  AugmentedSet out;
  if (candidates.empty()) return out;
  std::vector<PseudoLabeledSentence> labeled =
      pseudo_label_corpus(candidates, lexicon, table, min_noun_count, atp_window);
  for (auto& sentence : labeled) {
    if (filter && sentence.connection < gamma) {
      ++out.dropped;
      continue;
    }
    if (origins != nullptr) {
      auto it = origins->find(sentence.sentence.id);
      if (it != origins->end()) out.origins[it->first] = it->second;
    }
    out.sentences.push_back(std::move(sentence));
  }
  return out;
}

}  // namespace aspectseed
