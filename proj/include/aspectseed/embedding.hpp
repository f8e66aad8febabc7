#pragma once

// CBOW word embeddings with negative sampling, trained single-threaded and
// deterministically from a fixed seed. Sentence vectors for the rest of the
// pipeline are plain sums of word vectors; inside CBOW training the context
// vector is the MEAN of the window vectors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aspectseed/corpus.hpp"
#include "aspectseed/error.hpp"
#include "aspectseed/log.hpp"
#include "aspectseed/util.hpp"

namespace aspectseed {

struct CbowConfig {
  int dim = 200;
  int epochs = 10;
  int window = 10;
  int negatives = 5;
  int min_count = 2;
  double learning_rate = 0.025;
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (dim <= 0) throw Error(ErrorCode::InvalidArgument, "cbow: dim must be > 0");
    if (epochs <= 0) throw Error(ErrorCode::InvalidArgument, "cbow: epochs must be > 0");
    if (window <= 0) throw Error(ErrorCode::InvalidArgument, "cbow: window must be > 0");
    if (negatives < 1) throw Error(ErrorCode::InvalidArgument, "cbow: negatives must be >= 1");
    if (min_count < 1) throw Error(ErrorCode::InvalidArgument, "cbow: min_count must be >= 1");
    if (!(learning_rate > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "cbow: learning_rate must be > 0");
    }
  }
};

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

  int add_word(const std::string& word, std::int64_t count = 0) {
    int idx = static_cast<int>(words_.size());
    words_.push_back(word);
    index_[word] = idx;
    counts_.push_back(count);
    data_.resize(data_.size() + static_cast<std::size_t>(dim_), 0.0);
    return idx;
  }

  // -1 when the word is out of vocabulary
  int index_of(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? -1 : it->second;
  }

  bool has(const std::string& word) const { return index_.count(word) != 0; }

  double* row(int idx) { return data_.data() + static_cast<std::size_t>(idx) * dim_; }
  const double* row(int idx) const {
    return data_.data() + static_cast<std::size_t>(idx) * dim_;
  }

  std::int64_t count_of(int idx) const { return counts_[static_cast<std::size_t>(idx)]; }

  // Text format: first line `vocab_size dim`, then `word v1 v2 ... vdim`.
  // Doubles are written in shortest round-trip form, so save/load/save is
  // byte-identical. Corpus frequencies are not part of the format.
  std::string serialize() const {
    std::string out = std::to_string(size()) + " " + std::to_string(dim_) + "\n";
    for (int i = 0; i < size(); ++i) {
      out += words_[static_cast<std::size_t>(i)];
      const double* v = row(i);
      for (int d = 0; d < dim_; ++d) {
        out += ' ';
        out += format_double(v[d]);
      }
      out += '\n';
    }
    return out;
  }

  void save(const std::string& path) const { write_file(path, serialize()); }

  static EmbeddingTable deserialize(const std::string& text) {
    auto lines = split(text, '\n');
    if (lines.empty()) throw Error(ErrorCode::Data, "embedding file: missing header");
    auto header = split_ws(lines[0]);
    if (header.size() != 2) {
      throw Error(ErrorCode::Data, "embedding file: header must be `vocab_size dim`");
    }
    int vocab = static_cast<int>(parse_int(header[0]));
    int dim = static_cast<int>(parse_int(header[1]));
    if (vocab < 0 || dim <= 0) throw Error(ErrorCode::Data, "embedding file: bad header values");
    EmbeddingTable table(dim);
    for (int i = 0; i < vocab; ++i) {
      if (static_cast<std::size_t>(i + 1) >= lines.size()) {
        throw Error(ErrorCode::Data, "embedding file: truncated");
      }
      auto fields = split_ws(lines[static_cast<std::size_t>(i + 1)]);
      if (fields.size() != static_cast<std::size_t>(dim) + 1) {
        throw Error(ErrorCode::Data,
                    "embedding file: row " + std::to_string(i + 1) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(dim + 1));
      }
      if (table.has(fields[0])) {
        throw Error(ErrorCode::Data, "embedding file: duplicate word '" + fields[0] + "'");
      }
      int idx = table.add_word(fields[0]);
      double* v = table.row(idx);
      for (int d = 0; d < dim; ++d) v[d] = parse_double(fields[static_cast<std::size_t>(d) + 1]);
    }
    return table;
  }

  static EmbeddingTable load(const std::string& path) { return deserialize(read_file(path)); }

 private:
  int dim_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::int64_t> counts_;
  std::vector<double> data_;  // row-major, size() x dim
};

namespace detail {

inline double dot(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) s += a[d] * b[d];
  return s;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log σ(x) without overflow for large |x|
inline double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

}  // namespace detail

// The two parameter matrices of CBOW: `input` holds the word vectors that
// become the EmbeddingTable, `output` the negative-sampling weights.
struct CbowModel {
  int dim = 0;
  int vocab = 0;
  std::vector<double> input;
  std::vector<double> output;

  CbowModel() = default;
  CbowModel(int vocab_size, int dimension)
      : dim(dimension),
        vocab(vocab_size),
        input(static_cast<std::size_t>(vocab_size) * dimension, 0.0),
        output(static_cast<std::size_t>(vocab_size) * dimension, 0.0) {}

  double* in_row(int i) { return input.data() + static_cast<std::size_t>(i) * dim; }
  const double* in_row(int i) const { return input.data() + static_cast<std::size_t>(i) * dim; }
  double* out_row(int i) { return output.data() + static_cast<std::size_t>(i) * dim; }
  const double* out_row(int i) const {
    return output.data() + static_cast<std::size_t>(i) * dim;
  }
};

// One training example: predict `target` from the mean of `context` rows
// against `negatives` sampled rows.
struct CbowExample {
  std::vector<int> context;
  int target = 0;
  std::vector<int> negatives;
};

namespace detail {

// Shared forward/backward core. Fills `h` with the mean context vector,
// `grad_h` with dL/dh, and `coef` with (σ(u·h) − label) for the target row
// followed by each negative row, all evaluated at the current parameters.
// Returns the loss −log σ(u_t·h) − Σ_n log σ(−u_n·h).
inline double cbow_forward_backward(const CbowModel& m, const CbowExample& ex,
                                    std::vector<double>& h, std::vector<double>& grad_h,
                                    std::vector<double>& coef) {
  const int dim = m.dim;
  h.assign(static_cast<std::size_t>(dim), 0.0);
  for (int c : ex.context) {
    const double* v = m.in_row(c);
    for (int d = 0; d < dim; ++d) h[static_cast<std::size_t>(d)] += v[d];
  }
  const double inv = 1.0 / static_cast<double>(ex.context.size());
  for (double& x : h) x *= inv;

  grad_h.assign(static_cast<std::size_t>(dim), 0.0);
  coef.clear();
  double loss = 0.0;
  auto accumulate = [&](int row, double label) {
    const double* u = m.out_row(row);
    double score = dot(u, h.data(), dim);
    loss -= label > 0.5 ? log_sigmoid(score) : log_sigmoid(-score);
    double g = sigmoid(score) - label;  // dL/dscore
    coef.push_back(g);
    for (int d = 0; d < dim; ++d) grad_h[static_cast<std::size_t>(d)] += g * u[d];
  };
  accumulate(ex.target, 1.0);
  for (int n : ex.negatives) accumulate(n, 0.0);
  return loss;
}

}  // namespace detail

inline double cbow_example_loss(const CbowModel& m, const CbowExample& ex) {
  if (ex.context.empty()) throw Error(ErrorCode::InvalidArgument, "cbow example: empty context");
  std::vector<double> h, grad_h, coef;
  return detail::cbow_forward_backward(m, ex, h, grad_h, coef);
}

// Dense analytic gradient of cbow_example_loss with the model's own layout.
inline CbowModel cbow_example_gradient(const CbowModel& m, const CbowExample& ex) {
  if (ex.context.empty()) throw Error(ErrorCode::InvalidArgument, "cbow example: empty context");
  std::vector<double> h, grad_h, coef;
  detail::cbow_forward_backward(m, ex, h, grad_h, coef);

  CbowModel grad(m.vocab, m.dim);
  const int dim = m.dim;
  auto add_out = [&](int row, double g) {
    double* gu = grad.out_row(row);
    for (int d = 0; d < dim; ++d) gu[d] += g * h[static_cast<std::size_t>(d)];
  };
  add_out(ex.target, coef[0]);
  for (std::size_t i = 0; i < ex.negatives.size(); ++i) add_out(ex.negatives[i], coef[i + 1]);

  const double inv = 1.0 / static_cast<double>(ex.context.size());
  for (int c : ex.context) {
    double* gv = grad.in_row(c);
    for (int d = 0; d < dim; ++d) gv[d] += grad_h[static_cast<std::size_t>(d)] * inv;
  }
  return grad;
}

namespace detail {

// vocabulary order: frequency descending, then word ascending
inline std::vector<std::pair<std::string, std::int64_t>> build_vocab(
    const std::vector<TaggedSentence>& corpus, int min_count) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence.tokens) ++counts[token.surface];
  }
  std::vector<std::pair<std::string, std::int64_t>> vocab;
  for (const auto& [word, count] : counts) {
    if (count >= min_count) vocab.emplace_back(word, count);
  }
  std::sort(vocab.begin(), vocab.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return vocab;
}

// cumulative distribution over counts^0.75 for negative sampling
inline std::vector<double> unigram_cdf(const std::vector<std::pair<std::string, std::int64_t>>& vocab) {
  std::vector<double> cdf(vocab.size());
  double total = 0.0;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    total += std::pow(static_cast<double>(vocab[i].second), 0.75);
    cdf[i] = total;
  }
  for (double& x : cdf) x /= total;
  cdf.back() = 1.0;
  return cdf;
}

inline int sample_cdf(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<int>(it - cdf.begin());
}

}  // namespace detail

inline EmbeddingTable train_cbow(const std::vector<TaggedSentence>& corpus,
                                 const CbowConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "cbow: empty corpus");

  auto vocab = detail::build_vocab(corpus, cfg.min_count);
  if (vocab.empty()) {
    throw Error(ErrorCode::EmptyVocabulary,
                "cbow: no word reaches min_count " + std::to_string(cfg.min_count));
  }

  EmbeddingTable table(cfg.dim);
  for (const auto& [word, count] : vocab) table.add_word(word, count);

  // sentences as vocab indices, OOV dropped
  std::vector<std::vector<int>> encoded;
  std::size_t total_positions = 0;
  for (const auto& sentence : corpus) {
    std::vector<int> ids;
    for (const auto& token : sentence.tokens) {
      int idx = table.index_of(token.surface);
      if (idx >= 0) ids.push_back(idx);
    }
    if (ids.size() >= 2) {
      total_positions += ids.size();
      encoded.push_back(std::move(ids));
    }
  }

  CbowModel model(table.size(), cfg.dim);
  Rng rng(cfg.rng_seed);
  const double half = 0.5 / static_cast<double>(cfg.dim);
  for (double& x : model.input) x = rng.range(-half, half);
  // output weights start at zero, the standard negative-sampling init

  auto cdf = detail::unigram_cdf(vocab);
  const double total_steps =
      static_cast<double>(cfg.epochs) * static_cast<double>(std::max<std::size_t>(total_positions, 1));
  std::size_t processed = 0;

  std::vector<double> h, grad_h, coef;
  CbowExample ex;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& ids : encoded) {
      const int len = static_cast<int>(ids.size());
      for (int pos = 0; pos < len; ++pos) {
        ++processed;
        // shrunken window, as in word2vec: effective size in [1, window]
        int span = 1 + rng.below_int(cfg.window);
        ex.context.clear();
        for (int off = -span; off <= span; ++off) {
          int p = pos + off;
          if (off == 0 || p < 0 || p >= len) continue;
          ex.context.push_back(ids[static_cast<std::size_t>(p)]);
        }
        if (ex.context.empty()) continue;
        ex.target = ids[static_cast<std::size_t>(pos)];
        ex.negatives.clear();
        while (static_cast<int>(ex.negatives.size()) < cfg.negatives) {
          int neg = detail::sample_cdf(cdf, rng.uniform());
          if (neg != ex.target) ex.negatives.push_back(neg);
        }

        double alpha = cfg.learning_rate *
                       std::max(1.0 - static_cast<double>(processed) / total_steps, 1e-4);
        detail::cbow_forward_backward(model, ex, h, grad_h, coef);
        double* ut = model.out_row(ex.target);
        for (int d = 0; d < cfg.dim; ++d) ut[d] -= alpha * coef[0] * h[static_cast<std::size_t>(d)];
        for (std::size_t i = 0; i < ex.negatives.size(); ++i) {
          double* un = model.out_row(ex.negatives[i]);
          double g = coef[i + 1];
          for (int d = 0; d < cfg.dim; ++d) un[d] -= alpha * g * h[static_cast<std::size_t>(d)];
        }
        const double inv = alpha / static_cast<double>(ex.context.size());
        for (int c : ex.context) {
          double* v = model.in_row(c);
          for (int d = 0; d < cfg.dim; ++d) v[d] -= inv * grad_h[static_cast<std::size_t>(d)];
        }
      }
    }
  }

  for (int i = 0; i < table.size(); ++i) {
    const double* src = model.in_row(i);
    std::copy(src, src + cfg.dim, table.row(i));
  }
  return table;
}

// s = Σ w_i over in-vocabulary tokens; all-OOV sentences give the zero vector.
inline std::vector<double> embed_sentence(const TaggedSentence& sentence,
                                          const EmbeddingTable& table) {
  std::vector<double> out(static_cast<std::size_t>(table.dim()), 0.0);
  for (const auto& token : sentence.tokens) {
    int idx = table.index_of(token.surface);
    if (idx < 0) continue;
    const double* v = table.row(idx);
    for (int d = 0; d < table.dim(); ++d) out[static_cast<std::size_t>(d)] += v[d];
  }
  return out;
}

// a_i = Σ over the aspect's seed words; all-OOV seed sets give the zero
// vector and emit a warning, since such an aspect can never win.
inline std::vector<double> embed_aspect(const std::vector<std::string>& seeds,
                                        const EmbeddingTable& table,
                                        const std::string& aspect_name = {}) {
  std::vector<double> out(static_cast<std::size_t>(table.dim()), 0.0);
  bool any = false;
  for (const auto& seed : seeds) {
    int idx = table.index_of(seed);
    if (idx < 0) continue;
    any = true;
    const double* v = table.row(idx);
    for (int d = 0; d < table.dim(); ++d) out[static_cast<std::size_t>(d)] += v[d];
  }
  if (!any) {
    warn("aspect " + (aspect_name.empty() ? std::string("(unnamed)") : aspect_name) +
         ": every seed word is out of vocabulary; representation is the zero vector");
  }
  return out;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "dot: vector lengths differ");
  }
  return detail::dot(a.data(), b.data(), static_cast<int>(a.size()));
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// cosine similarity; 0 when either vector is zero
inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double na = norm(a);
  double nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

}  // namespace aspectseed
