#pragma once

// Multitask classifier. A shared encoder turns a sentence into one
// contextual vector per token; three heads consume the shared vectors:
// sentence-level aspect classification over the mean token vector, and
// token-level BIO tagging for terms and term polarities. The training loss
// is the λ-weighted sum of the per-task cross-entropies, averaged over the
// presented samples.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "aspectseed/corpus.hpp"
#include "aspectseed/embedding.hpp"
#include "aspectseed/error.hpp"
#include "aspectseed/pseudolabel.hpp"
#include "aspectseed/util.hpp"

namespace aspectseed {

struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
};

namespace detail {

inline std::vector<double> softmax(const std::vector<double>& logits) {
  double max = logits[0];
  for (double x : logits) max = std::max(max, x);
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max);
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

// y = W x + b as probability logits
inline std::vector<double> affine(const Mat& w, const Mat& b, const std::vector<double>& x) {
  std::vector<double> out(static_cast<std::size_t>(w.rows));
  for (int r = 0; r < w.rows; ++r) {
    const double* wr = w.row(r);
    double acc = b.data[static_cast<std::size_t>(r)];
    for (int c = 0; c < w.cols; ++c) acc += wr[c] * x[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

inline double clamped_log(double p) { return std::log(std::max(p, 1e-12)); }

}  // namespace detail

// Pluggable shared encoder input. Each token gets a "direct" feature vector
// passed through unchanged and, optionally, a "context" vector that the model
// runs through its learnable transform before concatenation. A backend with
// context_input_dim() == 0 provides direct features only.
class SharedEncoderBackend {
 public:
  virtual ~SharedEncoderBackend() = default;
  virtual std::string id() const = 0;
  virtual int direct_dim() const = 0;
  virtual int context_input_dim() const = 0;
  virtual void encode(const TaggedSentence& sentence, std::vector<std::vector<double>>& direct,
                      std::vector<std::vector<double>>& context) const = 0;
};

// default backend: the pretrained CBOW vector of each token plus the mean
// CBOW vector of its neighbors within ±span tokens
class CbowWindowFeatures : public SharedEncoderBackend {
 public:
  explicit CbowWindowFeatures(const EmbeddingTable& table, int span = 2)
      : table_(&table), span_(span) {
    if (span < 1) throw Error(ErrorCode::InvalidArgument, "encoder: span must be >= 1");
  }

  std::string id() const override { return "cbow-window"; }
  int direct_dim() const override { return table_->dim(); }
  int context_input_dim() const override { return table_->dim(); }

  void encode(const TaggedSentence& sentence, std::vector<std::vector<double>>& direct,
              std::vector<std::vector<double>>& context) const override {
    const int n = static_cast<int>(sentence.tokens.size());
    const int dim = table_->dim();
    direct.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    context.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
      ids[static_cast<std::size_t>(t)] = table_->index_of(sentence.tokens[static_cast<std::size_t>(t)].surface);
      if (ids[static_cast<std::size_t>(t)] >= 0) {
        const double* v = table_->row(ids[static_cast<std::size_t>(t)]);
        std::copy(v, v + dim, direct[static_cast<std::size_t>(t)].begin());
      }
    }
    for (int t = 0; t < n; ++t) {
      auto& ctx = context[static_cast<std::size_t>(t)];
      int found = 0;
      for (int j = std::max(0, t - span_); j <= std::min(n - 1, t + span_); ++j) {
        if (j == t || ids[static_cast<std::size_t>(j)] < 0) continue;
        const double* v = table_->row(ids[static_cast<std::size_t>(j)]);
        for (int d = 0; d < dim; ++d) ctx[static_cast<std::size_t>(d)] += v[d];
        ++found;
      }
      if (found > 0) {
        for (double& x : ctx) x /= found;
      }
    }
  }

 private:
  const EmbeddingTable* table_;
  int span_;
};

struct MultitaskConfig {
  double lambda_acd = 1.0;
  double lambda_ate = 0.8;
  double lambda_atp = 0.6;
  int batch_size = 16;
  double learning_rate = 1e-3;
  int epochs = 10;
  int hidden_dim = 64;
  int context_dim = 32;  // learnable context transform output; 0 disables
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (lambda_acd < 0 || lambda_ate < 0 || lambda_atp < 0) {
      throw Error(ErrorCode::Config, "classifier: task weights must be >= 0");
    }
    if (lambda_acd + lambda_ate + lambda_atp <= 0.0) {
      throw Error(ErrorCode::Config, "classifier: at least one task weight must be > 0");
    }
    if (batch_size < 1) throw Error(ErrorCode::Config, "classifier: batch_size must be >= 1");
    if (learning_rate <= 0) throw Error(ErrorCode::Config, "classifier: learning_rate must be > 0");
    if (epochs < 1) throw Error(ErrorCode::Config, "classifier: epochs must be >= 1");
    if (hidden_dim < 1) throw Error(ErrorCode::Config, "classifier: hidden_dim must be >= 1");
    if (context_dim < 0) throw Error(ErrorCode::Config, "classifier: context_dim must be >= 0");
  }
};

// one training sample; empty BIO sequences mean the task has no labels here
struct TrainingSample {
  TaggedSentence sentence;
  int acd_label = 0;
  std::vector<TermTag> term_bio;
  std::vector<PolarityTag> polarity_bio;
};

inline TrainingSample to_training_sample(const PseudoLabeledSentence& s) {
  return TrainingSample{s.sentence, s.acd_label, s.term_bio, s.polarity_bio};
}

constexpr int kNumTermTags = 3;
constexpr int kNumPolarityTags = 5;

struct MultitaskModel {
  MultitaskConfig config;
  int direct_dim = 0;
  int context_input_dim = 0;
  int context_dim = 0;  // 0 when the backend provides no context features
  int hidden_dim = 0;
  int num_aspects = 0;
  std::string backend_id;

  Mat w_ctx, b_ctx;  // context transform
  Mat w_hid, b_hid;  // shared nonlinear layer
  Mat w_acd, b_acd;
  Mat w_ate, b_ate;
  Mat w_atp, b_atp;
  std::vector<double> loss_curve;  // mean loss per epoch

  int feature_dim() const { return direct_dim + context_dim; }

  std::vector<Mat*> parameters() {
    return {&w_ctx, &b_ctx, &w_hid, &b_hid, &w_acd, &b_acd, &w_ate, &b_ate, &w_atp, &b_atp};
  }
  std::vector<const Mat*> parameters() const {
    return {&w_ctx, &b_ctx, &w_hid, &b_hid, &w_acd, &b_acd, &w_ate, &b_ate, &w_atp, &b_atp};
  }
};

inline MultitaskModel init_model(const MultitaskConfig& config, const SharedEncoderBackend& backend,
                                 int num_aspects) {
  config.validate();
  if (num_aspects < 2) throw Error(ErrorCode::InvalidArgument, "classifier: need >= 2 aspects");

  MultitaskModel m;
  m.config = config;
  m.backend_id = backend.id();
  m.direct_dim = backend.direct_dim();
  m.context_input_dim = backend.context_input_dim();
  m.context_dim = m.context_input_dim > 0 ? config.context_dim : 0;
  m.hidden_dim = config.hidden_dim;
  m.num_aspects = num_aspects;

  m.w_ctx = Mat(m.context_dim, m.context_input_dim);
  m.b_ctx = Mat(1, m.context_dim);
  m.w_hid = Mat(m.hidden_dim, m.feature_dim());
  m.b_hid = Mat(1, m.hidden_dim);
  m.w_acd = Mat(num_aspects, m.hidden_dim);
  m.b_acd = Mat(1, num_aspects);
  m.w_ate = Mat(kNumTermTags, m.hidden_dim);
  m.b_ate = Mat(1, kNumTermTags);
  m.w_atp = Mat(kNumPolarityTags, m.hidden_dim);
  m.b_atp = Mat(1, kNumPolarityTags);

  Rng rng(config.rng_seed);
  for (Mat* w : {&m.w_ctx, &m.w_hid, &m.w_acd, &m.w_ate, &m.w_atp}) {
    if (w->cols == 0) continue;
    double bound = 1.0 / std::sqrt(static_cast<double>(w->cols));
    for (double& x : w->data) x = rng.range(-bound, bound);
  }
  return m;
}

inline MultitaskModel zeros_like(const MultitaskModel& model) {
  MultitaskModel z = model;
  for (Mat* m : z.parameters()) std::fill(m->data.begin(), m->data.end(), 0.0);
  z.loss_curve.clear();
  return z;
}

struct ForwardResult {
  std::vector<std::vector<double>> direct;    // n × direct_dim (frozen inputs)
  std::vector<std::vector<double>> context;   // n × context_input_dim
  std::vector<std::vector<double>> features;  // n × feature_dim
  std::vector<std::vector<double>> hidden;    // n × hidden_dim, post-tanh
  std::vector<double> mean_hidden;            // hidden_dim
  std::vector<double> acd;                    // num_aspects, sums to 1
  std::vector<std::vector<double>> ate;       // n × 3
  std::vector<std::vector<double>> atp;       // n × 5
};

inline ForwardResult forward(const MultitaskModel& model, const SharedEncoderBackend& backend,
                             const TaggedSentence& sentence) {
  const int n = static_cast<int>(sentence.tokens.size());
  if (n == 0) throw Error(ErrorCode::EmptySentence, "forward: sentence has no tokens");

  ForwardResult r;
  backend.encode(sentence, r.direct, r.context);

  r.features.resize(static_cast<std::size_t>(n));
  r.hidden.resize(static_cast<std::size_t>(n));
  r.ate.resize(static_cast<std::size_t>(n));
  r.atp.resize(static_cast<std::size_t>(n));
  r.mean_hidden.assign(static_cast<std::size_t>(model.hidden_dim), 0.0);

  for (int t = 0; t < n; ++t) {
    auto& f = r.features[static_cast<std::size_t>(t)];
    f = r.direct[static_cast<std::size_t>(t)];
    if (model.context_dim > 0) {
      std::vector<double> c =
          detail::affine(model.w_ctx, model.b_ctx, r.context[static_cast<std::size_t>(t)]);
      f.insert(f.end(), c.begin(), c.end());
    }
    std::vector<double> pre = detail::affine(model.w_hid, model.b_hid, f);
    auto& h = r.hidden[static_cast<std::size_t>(t)];
    h.resize(pre.size());
    for (std::size_t i = 0; i < pre.size(); ++i) h[i] = std::tanh(pre[i]);
    for (int d = 0; d < model.hidden_dim; ++d) {
      r.mean_hidden[static_cast<std::size_t>(d)] += h[static_cast<std::size_t>(d)] / n;
    }
    r.ate[static_cast<std::size_t>(t)] =
        detail::softmax(detail::affine(model.w_ate, model.b_ate, h));
    r.atp[static_cast<std::size_t>(t)] =
        detail::softmax(detail::affine(model.w_atp, model.b_atp, h));
  }
  r.acd = detail::softmax(detail::affine(model.w_acd, model.b_acd, r.mean_hidden));
  return r;
}

// per-task mean cross-entropies over the batch, unweighted; token-level
// tasks sum over tokens within a sample. Samples without labels for a task
// contribute zero to it.
inline std::array<double, 3> task_losses(const std::vector<TrainingSample>& batch,
                                         const std::vector<ForwardResult>& results) {
  if (batch.size() != results.size()) {
    throw Error(ErrorCode::LengthMismatch, "task_losses: results do not match batch");
  }
  if (batch.empty()) throw Error(ErrorCode::InvalidArgument, "task_losses: empty batch");
  std::array<double, 3> losses = {0.0, 0.0, 0.0};
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const auto& sample = batch[s];
    const auto& r = results[s];
    losses[0] -= detail::clamped_log(r.acd[static_cast<std::size_t>(sample.acd_label)]);
    for (std::size_t t = 0; t < sample.term_bio.size(); ++t) {
      losses[1] -= detail::clamped_log(
          r.ate[t][static_cast<std::size_t>(static_cast<int>(sample.term_bio[t]))]);
    }
    for (std::size_t t = 0; t < sample.polarity_bio.size(); ++t) {
      losses[2] -= detail::clamped_log(
          r.atp[t][static_cast<std::size_t>(static_cast<int>(sample.polarity_bio[t]))]);
    }
  }
  for (double& l : losses) l /= static_cast<double>(batch.size());
  return losses;
}

inline double multitask_loss(const std::vector<TrainingSample>& batch,
                             const std::vector<ForwardResult>& results,
                             const MultitaskConfig& config) {
  auto losses = task_losses(batch, results);
  return config.lambda_acd * losses[0] + config.lambda_ate * losses[1] +
         config.lambda_atp * losses[2];
}

namespace detail {

inline void add_outer(Mat& grad, const std::vector<double>& dl, const std::vector<double>& x) {
  for (int r = 0; r < grad.rows; ++r) {
    double* gr = grad.row(r);
    double d = dl[static_cast<std::size_t>(r)];
    for (int c = 0; c < grad.cols; ++c) gr[c] += d * x[static_cast<std::size_t>(c)];
  }
}

inline void add_vec(Mat& grad, const std::vector<double>& dl) {
  for (std::size_t i = 0; i < dl.size(); ++i) grad.data[i] += dl[i];
}

// x += W^T dl
inline void add_transposed(std::vector<double>& x, const Mat& w, const std::vector<double>& dl) {
  for (int r = 0; r < w.rows; ++r) {
    const double* wr = w.row(r);
    double d = dl[static_cast<std::size_t>(r)];
    for (int c = 0; c < w.cols; ++c) x[static_cast<std::size_t>(c)] += d * wr[c];
  }
}

}  // namespace detail

// analytic gradient of multitask_loss with respect to every parameter
inline MultitaskModel backward(const MultitaskModel& model,
                               const std::vector<TrainingSample>& batch,
                               const std::vector<ForwardResult>& results) {
  if (batch.size() != results.size()) {
    throw Error(ErrorCode::LengthMismatch, "backward: results do not match batch");
  }
  if (batch.empty()) throw Error(ErrorCode::InvalidArgument, "backward: empty batch");

  MultitaskModel grad = zeros_like(model);
  const auto& cfg = model.config;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());

  for (std::size_t s = 0; s < batch.size(); ++s) {
    const auto& sample = batch[s];
    const auto& r = results[s];
    const int n = static_cast<int>(r.hidden.size());

    // softmax + cross-entropy: d logits = p − y, scaled by λ / |batch|
    std::vector<double> d_acd = r.acd;
    for (double& x : d_acd) x *= cfg.lambda_acd * inv_batch;
    d_acd[static_cast<std::size_t>(sample.acd_label)] -= cfg.lambda_acd * inv_batch;

    detail::add_outer(grad.w_acd, d_acd, r.mean_hidden);
    detail::add_vec(grad.b_acd, d_acd);

    std::vector<double> d_mean(static_cast<std::size_t>(model.hidden_dim), 0.0);
    detail::add_transposed(d_mean, model.w_acd, d_acd);

    for (int t = 0; t < n; ++t) {
      const auto& h = r.hidden[static_cast<std::size_t>(t)];
      std::vector<double> dh(static_cast<std::size_t>(model.hidden_dim));
      for (int d = 0; d < model.hidden_dim; ++d) {
        dh[static_cast<std::size_t>(d)] = d_mean[static_cast<std::size_t>(d)] / n;
      }

      if (!sample.term_bio.empty()) {
        std::vector<double> dl = r.ate[static_cast<std::size_t>(t)];
        for (double& x : dl) x *= cfg.lambda_ate * inv_batch;
        dl[static_cast<std::size_t>(static_cast<int>(sample.term_bio[static_cast<std::size_t>(t)]))] -=
            cfg.lambda_ate * inv_batch;
        detail::add_outer(grad.w_ate, dl, h);
        detail::add_vec(grad.b_ate, dl);
        detail::add_transposed(dh, model.w_ate, dl);
      }
      if (!sample.polarity_bio.empty()) {
        std::vector<double> dl = r.atp[static_cast<std::size_t>(t)];
        for (double& x : dl) x *= cfg.lambda_atp * inv_batch;
        dl[static_cast<std::size_t>(
            static_cast<int>(sample.polarity_bio[static_cast<std::size_t>(t)]))] -=
            cfg.lambda_atp * inv_batch;
        detail::add_outer(grad.w_atp, dl, h);
        detail::add_vec(grad.b_atp, dl);
        detail::add_transposed(dh, model.w_atp, dl);
      }

      // through tanh into the shared layer
      std::vector<double> dpre(static_cast<std::size_t>(model.hidden_dim));
      for (int d = 0; d < model.hidden_dim; ++d) {
        double hv = h[static_cast<std::size_t>(d)];
        dpre[static_cast<std::size_t>(d)] = dh[static_cast<std::size_t>(d)] * (1.0 - hv * hv);
      }
      detail::add_outer(grad.w_hid, dpre, r.features[static_cast<std::size_t>(t)]);
      detail::add_vec(grad.b_hid, dpre);

      if (model.context_dim > 0) {
        std::vector<double> df(static_cast<std::size_t>(model.feature_dim()), 0.0);
        detail::add_transposed(df, model.w_hid, dpre);
        std::vector<double> dc(df.begin() + model.direct_dim, df.end());
        detail::add_outer(grad.w_ctx, dc, r.context[static_cast<std::size_t>(t)]);
        detail::add_vec(grad.b_ctx, dc);
      }
    }
  }
  return grad;
}

inline void validate_training_set(const std::vector<TrainingSample>& data, int num_aspects) {
  if (data.empty()) throw Error(ErrorCode::EmptyCorpus, "train: empty training set");
  for (const auto& sample : data) {
    if (sample.sentence.tokens.empty()) {
      throw Error(ErrorCode::EmptySentence,
                  "train: sentence " + std::to_string(sample.sentence.id) + " has no tokens");
    }
    if (sample.acd_label < 0 || sample.acd_label >= num_aspects) {
      throw Error(ErrorCode::Data, "train: aspect label out of range in sentence " +
                                       std::to_string(sample.sentence.id));
    }
    if (!sample.term_bio.empty() && sample.term_bio.size() != sample.sentence.tokens.size()) {
      throw Error(ErrorCode::LengthMismatch, "train: term tags do not match tokens in sentence " +
                                                 std::to_string(sample.sentence.id));
    }
    if (!sample.polarity_bio.empty() &&
        sample.polarity_bio.size() != sample.sentence.tokens.size()) {
      throw Error(ErrorCode::LengthMismatch,
                  "train: polarity tags do not match tokens in sentence " +
                      std::to_string(sample.sentence.id));
    }
  }
}

// minibatch training with per-parameter adaptive steps; deterministic for a
// fixed seed. Records the mean loss of each epoch.
inline MultitaskModel train(const std::vector<TrainingSample>& data,
                            const MultitaskConfig& config, const SharedEncoderBackend& backend,
                            int num_aspects) {
  config.validate();
  validate_training_set(data, num_aspects);

  MultitaskModel model = init_model(config, backend, num_aspects);
  auto params = model.parameters();
  std::vector<Mat> m1, m2;
  for (const Mat* p : params) {
    m1.emplace_back(p->rows, p->cols);
    m2.emplace_back(p->rows, p->cols);
  }
  const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  long step = 0;

  Rng rng(config.rng_seed ^ 0x5eedULL);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;

    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      std::vector<TrainingSample> batch;
      batch.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) batch.push_back(data[order[i]]);

      std::vector<ForwardResult> results;
      results.reserve(batch.size());
      for (const auto& sample : batch) results.push_back(forward(model, backend, sample.sentence));

      double loss = multitask_loss(batch, results, config);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::Diverged, "train: loss became non-finite at epoch " +
                                             std::to_string(epoch + 1));
      }
      epoch_loss += loss * static_cast<double>(batch.size());

      MultitaskModel grad = backward(model, batch, results);
      auto grads = grad.parameters();
      ++step;
      double bias1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      double bias2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      for (std::size_t p = 0; p < params.size(); ++p) {
        auto& param = params[p]->data;
        const auto& g = grads[p]->data;
        auto& m = m1[p].data;
        auto& v = m2[p].data;
        for (std::size_t i = 0; i < param.size(); ++i) {
          m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
          v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
          param[i] -= config.learning_rate * (m[i] / bias1) / (std::sqrt(v[i] / bias2) + adam_eps);
        }
      }
    }
    model.loss_curve.push_back(epoch_loss / static_cast<double>(data.size()));
  }
  return model;
}

struct Prediction {
  int acd_label = 0;
  std::vector<TermTag> term_bio;
  std::vector<PolarityTag> polarity_bio;
  std::vector<TermSpan> spans;  // polarity filled per span
};

namespace detail {

template <typename T>
inline T argmax_tag(const std::vector<double>& probs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return static_cast<T>(best);
}

inline bool is_pos(PolarityTag t) { return t == PolarityTag::BPos || t == PolarityTag::IPos; }
inline bool is_neg(PolarityTag t) { return t == PolarityTag::BNeg || t == PolarityTag::INeg; }

}  // namespace detail

// greedy decoding with transition repair: an I without a compatible
// predecessor becomes B, so the output is always well-formed
inline Prediction predict(const MultitaskModel& model, const SharedEncoderBackend& backend,
                          const TaggedSentence& sentence) {
  ForwardResult r = forward(model, backend, sentence);
  Prediction p;
  p.acd_label = static_cast<int>(detail::argmax_tag<std::size_t>(r.acd));

  const std::size_t n = r.hidden.size();
  p.term_bio.resize(n);
  p.polarity_bio.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    TermTag tag = detail::argmax_tag<TermTag>(r.ate[t]);
    if (tag == TermTag::I &&
        (t == 0 || p.term_bio[t - 1] == TermTag::O)) {
      tag = TermTag::B;
    }
    p.term_bio[t] = tag;

    PolarityTag ptag = detail::argmax_tag<PolarityTag>(r.atp[t]);
    if (ptag == PolarityTag::IPos &&
        (t == 0 || !detail::is_pos(p.polarity_bio[t - 1]))) {
      ptag = PolarityTag::BPos;
    } else if (ptag == PolarityTag::INeg &&
               (t == 0 || !detail::is_neg(p.polarity_bio[t - 1]))) {
      ptag = PolarityTag::BNeg;
    }
    p.polarity_bio[t] = ptag;
  }

  p.spans = spans_from_tags(p.term_bio);
  for (auto& span : p.spans) {
    int pos = 0, neg = 0;
    for (int t = span.start; t < span.end; ++t) {
      if (detail::is_pos(p.polarity_bio[static_cast<std::size_t>(t)])) ++pos;
      if (detail::is_neg(p.polarity_bio[static_cast<std::size_t>(t)])) ++neg;
    }
    span.polarity = neg > pos ? Polarity::Neg : Polarity::Pos;
  }
  return p;
}

// ---- checkpoint ----

inline std::string serialize_model(const MultitaskModel& m) {
  std::ostringstream out;
  out << "aspectseed-model 1\n";
  out << "backend " << m.backend_id << "\n";
  out << "dims " << m.direct_dim << " " << m.context_input_dim << " " << m.context_dim << " "
      << m.hidden_dim << " " << m.num_aspects << "\n";
  out << "config " << format_double(m.config.lambda_acd) << " " << format_double(m.config.lambda_ate)
      << " " << format_double(m.config.lambda_atp) << " " << m.config.batch_size << " "
      << format_double(m.config.learning_rate) << " " << m.config.epochs << " "
      << m.config.hidden_dim << " " << m.config.context_dim << " " << m.config.rng_seed << "\n";
  const char* names[] = {"w_ctx", "b_ctx", "w_hid", "b_hid", "w_acd",
                         "b_acd", "w_ate", "b_ate", "w_atp", "b_atp"};
  auto params = m.parameters();
  for (std::size_t p = 0; p < params.size(); ++p) {
    out << "mat " << names[p] << " " << params[p]->rows << " " << params[p]->cols << "\n";
    for (int r = 0; r < params[p]->rows; ++r) {
      const double* row = params[p]->row(r);
      for (int c = 0; c < params[p]->cols; ++c) {
        if (c > 0) out << " ";
        out << format_double(row[c]);
      }
      out << "\n";
    }
  }
  out << "loss_curve " << m.loss_curve.size();
  for (double l : m.loss_curve) out << " " << format_double(l);
  out << "\n";
  return out.str();
}

inline MultitaskModel deserialize_model(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "aspectseed-model") {
    throw Error(ErrorCode::Data, "model checkpoint: bad header");
  }
  if (version != 1) {
    throw Error(ErrorCode::Data, "model checkpoint: unsupported version " + std::to_string(version));
  }
  MultitaskModel m;
  if (!(in >> word >> m.backend_id) || word != "backend") {
    throw Error(ErrorCode::Data, "model checkpoint: missing backend line");
  }
  if (!(in >> word >> m.direct_dim >> m.context_input_dim >> m.context_dim >> m.hidden_dim >>
        m.num_aspects) ||
      word != "dims") {
    throw Error(ErrorCode::Data, "model checkpoint: missing dims line");
  }
  if (!(in >> word >> m.config.lambda_acd >> m.config.lambda_ate >> m.config.lambda_atp >>
        m.config.batch_size >> m.config.learning_rate >> m.config.epochs >> m.config.hidden_dim >>
        m.config.context_dim >> m.config.rng_seed) ||
      word != "config") {
    throw Error(ErrorCode::Data, "model checkpoint: missing config line");
  }
  const char* names[] = {"w_ctx", "b_ctx", "w_hid", "b_hid", "w_acd",
                         "b_acd", "w_ate", "b_ate", "w_atp", "b_atp"};
  auto params = m.parameters();
  for (std::size_t p = 0; p < params.size(); ++p) {
    std::string name;
    int rows = 0, cols = 0;
    if (!(in >> word >> name >> rows >> cols) || word != "mat" || name != names[p]) {
      throw Error(ErrorCode::Data, "model checkpoint: bad matrix header");
    }
    *params[p] = Mat(rows, cols);
    for (double& x : params[p]->data) {
      if (!(in >> x)) throw Error(ErrorCode::Data, "model checkpoint: truncated matrix");
    }
  }
  std::size_t curve = 0;
  if (!(in >> word >> curve) || word != "loss_curve") {
    throw Error(ErrorCode::Data, "model checkpoint: missing loss curve");
  }
  m.loss_curve.resize(curve);
  for (double& l : m.loss_curve) {
    if (!(in >> l)) throw Error(ErrorCode::Data, "model checkpoint: truncated loss curve");
  }
  return m;
}

inline void save_model(const MultitaskModel& m, const std::string& path) {
  write_file(path, serialize_model(m));
}

inline MultitaskModel load_model(const std::string& path) {
  return deserialize_model(read_file(path));
}

// ---- training-set export for external trainers ----

// one sentence per line: tokens, aspect label (1-based), term BIO, polarity
// BIO, tab-separated; "-" marks an absent tag sequence
inline std::string serialize_training_set(const std::vector<TrainingSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    out += join(s.sentence.surfaces(), " ");
    out += "\t" + std::to_string(s.acd_label + 1) + "\t";
    if (s.term_bio.empty()) {
      out += "-";
    } else {
      for (std::size_t t = 0; t < s.term_bio.size(); ++t) {
        if (t > 0) out += " ";
        out += to_string(s.term_bio[t]);
      }
    }
    out += "\t";
    if (s.polarity_bio.empty()) {
      out += "-";
    } else {
      for (std::size_t t = 0; t < s.polarity_bio.size(); ++t) {
        if (t > 0) out += " ";
        out += to_string(s.polarity_bio[t]);
      }
    }
    out += "\n";
  }
  return out;
}

inline void export_training_set(const std::vector<TrainingSample>& samples,
                                const std::string& path) {
  write_file(path, serialize_training_set(samples));
}

}  // namespace aspectseed
