#pragma once

// Pipeline orchestration. Stages run lazily in dependency order — embeddings,
// initial pseudo-labels, seed enhancement, enhanced pseudo-labels + the
// uncertainty filter, retrieval + label augmentation, classifier training,
// evaluation — and every stage writes its artifact under a chained hash of
// the configuration it depends on, so changing a knob re-addresses that
// stage and everything downstream while upstream artifacts keep their paths.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aspectseed/classifier.hpp"
#include "aspectseed/config.hpp"
#include "aspectseed/corpus.hpp"
#include "aspectseed/embedding.hpp"
#include "aspectseed/error.hpp"
#include "aspectseed/log.hpp"
#include "aspectseed/metrics.hpp"
#include "aspectseed/pos_tagger.hpp"
#include "aspectseed/pseudolabel.hpp"
#include "aspectseed/retrieval.hpp"
#include "aspectseed/sec.hpp"
#include "aspectseed/seeds.hpp"

namespace aspectseed {

// per-stage RNG streams derived from the single pipeline seed
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stage) {
  return fnv1a64(stage, master ^ 0x9e3779b97f4a7c15ULL);
}

inline std::string dump_section(const PipelineConfig& config, const std::string& section) {
  std::string out;
  for (const auto& key : config_keys()) {
    if (key.section == section) out += key.name + " = " + key.get(config) + "\n";
  }
  return out;
}

struct PipelineResult {
  MetricReport report;
  std::string report_path;        // machine-readable artifact
  std::string report_text_path;   // human-readable artifact
  std::map<std::string, int> additions;
  int certain_count = 0;
  int uncertain_count = 0;
  int augmented_kept = 0;
  int augmented_dropped = 0;
  int training_samples = 0;
  int dropped_multi_aspect = 0;
  std::vector<std::string> artifacts;
};

class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config) : cfg_(std::move(config)) {
    cfg_.validate();
    base_hash_ = hash_hex(
        fnv1a64(dump_section(cfg_, "data") + "seed = " + std::to_string(cfg_.seed) + "\n"));
  }

  const PipelineConfig& config() const { return cfg_; }

  const TaggerBackend& tagger() {
    if (!tagger_) {
      tagger_ = stage("load", [&] { return make_tagger("lexicon", cfg_.pos_lexicon); });
    }
    return *tagger_;
  }

  const AspectLexicon& lexicon() {
    if (!lexicon_) {
      lexicon_ = stage("load", [&] {
        require_input(cfg_.seeds, "data.seeds");
        return AspectLexicon(load_seed_lexicon(cfg_.seeds));
      });
    }
    return *lexicon_;
  }

  // ids: bank from 0, in-domain from 1e6, test from 2e6 — disjoint by role
  const std::vector<TaggedSentence>& bank() {
    if (!bank_) {
      bank_ = stage("load", [&] {
        require_input(cfg_.bank, "data.bank");
        return load_corpus_file(cfg_.bank, tagger(), 0);
      });
    }
    return *bank_;
  }

  const std::vector<TaggedSentence>& in_domain() {
    if (!in_domain_) {
      in_domain_ = stage("load", [&] {
        require_input(cfg_.in_domain, "data.in_domain");
        return load_corpus_file(cfg_.in_domain, tagger(), 1000000);
      });
    }
    return *in_domain_;
  }

  // --- stage: embeddings (trained on bank + in-domain; cached on disk)
  const EmbeddingTable& embeddings() {
    if (!embeddings_) {
      embeddings_ = stage("embeddings", [&] {
        std::string path = artifact_path("embeddings", embeddings_hash(), "tsv");
        if (std::filesystem::exists(path)) {
          artifacts_.push_back(path);
          return EmbeddingTable::load(path);
        }
        std::vector<TaggedSentence> corpus;
        if (!cfg_.bank.empty()) corpus = bank();
        const auto& dom = in_domain();
        corpus.insert(corpus.end(), dom.begin(), dom.end());
        CbowConfig cbow = cfg_.embedding;
        cbow.rng_seed = derive_seed(cfg_.seed, "embeddings");
        EmbeddingTable table = train_cbow(corpus, cbow);
        write_artifact(path, table.serialize());
        return table;
      });
    }
    return *embeddings_;
  }

  // --- stage: pseudo-labels from the seed lexicon as loaded
  const std::vector<PseudoLabeledSentence>& initial_labels() {
    if (!initial_labels_) {
      initial_labels_ = stage("pseudolabel", [&] {
        auto labeled = pseudo_label_corpus(in_domain(), lexicon(), embeddings(),
                                           cfg_.min_noun_count, cfg_.atp_window);
        write_artifact(artifact_path("pseudo-initial", pseudolabel_hash(), "tsv"),
                       serialize_pseudo_labels(labeled));
        return labeled;
      });
    }
    return *initial_labels_;
  }

  // --- stage: seed enhancement; disabled leaves the lexicon unchanged
  const AspectLexicon& enhanced_lexicon() {
    if (!enhanced_) {
      initial_labels();
      enhanced_ = stage("sec", [&] {
        AspectLexicon out = lexicon();
        if (cfg_.sec_enabled) {
          SecResult sec = enhance_seed_words(in_domain(), lexicon(), embeddings(), cfg_.gamma,
                                             cfg_.sec_epsilon, stopwords());
          additions_ = sec.additions;
          out = lexicon().with_additions(sec.additions);
        }
        write_artifact(artifact_path("seeds-enhanced", sec_hash(), "txt"),
                       serialize_seed_lexicon(out.to_seed_lexicon()));
        return out;
      });
    }
    return *enhanced_;
  }

  const std::map<std::string, int>& additions() {
    enhanced_lexicon();
    return additions_;
  }

  // --- stage: relabel with G = H ∪ T_a, then split by the uncertainty filter
  const std::vector<PseudoLabeledSentence>& certain() {
    enhanced_labels();
    return certain_;
  }
  const std::vector<PseudoLabeledSentence>& uncertain() {
    enhanced_labels();
    return uncertain_;
  }

  // --- stage: retrieval + label augmentation; k = 0 skips it
  const AugmentedSet& augmented() {
    if (!augmented_) {
      augmented_ = stage("retrieval", [&] {
        AugmentedSet out;
        if (cfg_.k == 0) {
          write_artifact(artifact_path("augmented", retrieval_hash(), "tsv"), "");
          return out;
        }
        const auto& bank_sentences = bank();
        if (bank_sentences.empty()) {
          throw Error(ErrorCode::EmptyBank, "the data bank has no sentences");
        }
        std::unique_ptr<SentenceEncoderBackend> encoder = make_encoder();
        std::vector<TaggedSentence> certain_sentences;
        for (const auto& s : certain()) certain_sentences.push_back(s.sentence);
        TaskEmbeddingSet queries =
            build_task_embeddings(enhanced_lexicon(), certain_sentences, *encoder);
        RetrievalIndex index = RetrievalIndex::build(bank_sentences, *encoder);
        int k = cfg_.k;
        if (k > index.size()) {
          warn("retrieval.k exceeds the bank size; clamped to " + std::to_string(index.size()));
          k = index.size();
        }
        RetrievalResult hits = knn_retrieve(index, queries, k);
        std::map<int, const TaggedSentence*> by_id;
        for (const auto& s : bank_sentences) by_id[s.id] = &s;
        std::vector<TaggedSentence> candidates;
        for (int id : hits.ids) candidates.push_back(*by_id.at(id));
        out = label_augmented(candidates, enhanced_lexicon(), embeddings(), cfg_.gamma,
                              cfg_.min_noun_count, cfg_.atp_window, cfg_.filter_augmented,
                              &hits.origins);
        write_artifact(artifact_path("augmented", retrieval_hash(), "tsv"),
                       serialize_pseudo_labels(out.sentences));
        return out;
      });
    }
    return *augmented_;
  }

  // --- stage: multitask training on certain in-domain + augmented sentences
  const MultitaskModel& model() {
    if (!model_) {
      model_ = stage("train", [&] {
        std::vector<TrainingSample> samples;
        for (const auto& s : certain()) samples.push_back(to_training_sample(s));
        for (const auto& s : augmented().sentences) samples.push_back(to_training_sample(s));
        training_samples_ = static_cast<int>(samples.size());
        write_artifact(artifact_path("training-set", train_hash(), "tsv"),
                       serialize_training_set(samples));
        MultitaskConfig mt = cfg_.classifier;
        mt.rng_seed = derive_seed(cfg_.seed, "classifier");
        backend_ = std::make_unique<CbowWindowFeatures>(embeddings());
        MultitaskModel m = train(samples, mt, *backend_, enhanced_lexicon().num_aspects());
        save_model(m, artifact_path("model", train_hash(), "txt"));
        artifacts_.push_back(artifact_path("model", train_hash(), "txt"));
        return m;
      });
    }
    return *model_;
  }

  // --- stage: evaluation on the gold test split
  PipelineResult run() {
    PipelineResult result;
    stage("evaluate", [&] {
      require_input(cfg_.test, "data.test");
      const MultitaskModel& m = model();

      int dropped_multi = 0;
      std::vector<LabeledSentence> test =
          load_labeled_file(cfg_.test, tagger(), 2000000, &dropped_multi);
      if (test.empty()) throw Error(ErrorCode::EmptyCorpus, "test split has no usable sentences");

      const AspectLexicon& lex = enhanced_lexicon();
      const int num_aspects = lex.num_aspects();
      std::vector<int> acd_gold, acd_pred;
      std::vector<std::vector<TermSpan>> ate_gold, ate_pred;
      std::vector<int> atp_gold, atp_pred;
      int atp_skipped = 0;

      for (const auto& gold : test) {
        Prediction p = predict(m, *backend_, gold.sentence);
        acd_gold.push_back(lex.aspect_index(gold.aspect));
        acd_pred.push_back(p.acd_label);
        ate_gold.push_back(gold.spans);
        ate_pred.push_back(p.spans);

        // sentence-level polarity: gold sentences with no polarity spans or
        // with both polarities are skipped
        std::vector<Polarity> gold_polarities;
        for (const auto& span : gold.spans) {
          if (span.polarity) gold_polarities.push_back(*span.polarity);
        }
        bool has_pos = false, has_neg = false;
        for (Polarity pol : gold_polarities) {
          (pol == Polarity::Pos ? has_pos : has_neg) = true;
        }
        if (gold_polarities.empty() || (has_pos && has_neg)) {
          ++atp_skipped;
          continue;
        }
        std::vector<Polarity> pred_polarities;
        for (const auto& span : p.spans) {
          if (span.polarity) pred_polarities.push_back(*span.polarity);
        }
        Polarity pred_pol =
            pred_polarities.empty() ? Polarity::Pos : sentence_atp(pred_polarities);
        atp_gold.push_back(sentence_atp(gold_polarities) == Polarity::Pos ? 0 : 1);
        atp_pred.push_back(pred_pol == Polarity::Pos ? 0 : 1);
      }

      MetricReport& report = result.report;
      report.num_sentences = static_cast<int>(test.size());
      report.aspect_names = lex.aspect_names();
      report.acd_accuracy = accuracy(acd_gold, acd_pred);
      report.acd_macro_f1 = macro_f1(acd_gold, acd_pred, num_aspects);
      report.acd_per_class = per_class_f1(acd_gold, acd_pred, num_aspects);
      report.ate = span_f1(ate_gold, ate_pred);
      report.atp_evaluated = static_cast<int>(atp_gold.size());
      report.atp_skipped = atp_skipped;
      if (!atp_gold.empty()) {
        report.atp_accuracy = accuracy(atp_gold, atp_pred);
        report.atp_macro_f1 = macro_f1(atp_gold, atp_pred, 2);
        report.atp_per_class = per_class_f1(atp_gold, atp_pred, 2);
      }
      report.config_hash = config_hash(cfg_);
      report.seed = cfg_.seed;

      result.report_path = artifact_path("report", evaluate_hash(), "tsv");
      result.report_text_path = artifact_path("report", evaluate_hash(), "txt");
      write_artifact(result.report_path, serialize_metric_report(report));
      write_artifact(result.report_text_path, format_metric_report(report));
      write_artifact(output_path("config-" + config_hash(cfg_) + ".ini"), dump_config(cfg_));
      result.dropped_multi_aspect = dropped_multi;
      return 0;
    });

    result.additions = additions_;
    result.certain_count = static_cast<int>(certain_.size());
    result.uncertain_count = static_cast<int>(uncertain_.size());
    result.augmented_kept = static_cast<int>(augmented_->sentences.size());
    result.augmented_dropped = augmented_->dropped;
    result.training_samples = training_samples_;
    result.artifacts = artifacts_;
    return result;
  }

  // chained stage hashes: each covers its own section plus everything upstream
  std::string embeddings_hash() const {
    return stage_hash(base_hash_, "embeddings", dump_section(cfg_, "embedding"));
  }
  std::string pseudolabel_hash() const {
    return stage_hash(embeddings_hash(), "pseudolabel", dump_section(cfg_, "pseudolabel"));
  }
  std::string sec_hash() const {
    return stage_hash(pseudolabel_hash(), "sec", dump_section(cfg_, "sec"));
  }
  std::string enhanced_hash() const { return stage_hash(sec_hash(), "pseudolabel-enhanced"); }
  std::string retrieval_hash() const {
    return stage_hash(enhanced_hash(), "retrieval", dump_section(cfg_, "retrieval"));
  }
  std::string train_hash() const {
    return stage_hash(retrieval_hash(), "train", dump_section(cfg_, "classifier"));
  }
  std::string evaluate_hash() const { return stage_hash(train_hash(), "evaluate"); }

  std::string artifact_path(const std::string& name, const std::string& hash,
                            const std::string& ext) const {
    return output_path(name + "-" + hash + "." + ext);
  }

  const std::vector<std::string>& artifacts() const { return artifacts_; }

 private:
  template <typename F>
  auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      throw Error(e.code(), std::string("stage ") + name + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::Stage, std::string("stage ") + name + ": " + e.what());
    }
  }

  static void require_input(const std::string& path, const std::string& key) {
    if (path.empty()) throw Error(ErrorCode::Config, key + " is not set");
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorCode::Data, key + ": no such file '" + path + "'");
    }
  }

  std::string output_path(const std::string& file) const {
    return (std::filesystem::path(cfg_.output_dir) / file).string();
  }

  void write_artifact(const std::string& path, std::string_view content) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    write_file(path, content);
    artifacts_.push_back(path);
  }

  Stopwords stopwords() {
    if (cfg_.stopwords.empty()) return Stopwords();
    return Stopwords::from_file(cfg_.stopwords);
  }

  std::unique_ptr<SentenceEncoderBackend> make_encoder() {
    if (cfg_.encoder == "cbow-sum") return std::make_unique<CbowSumEncoder>(embeddings());
    return std::make_unique<FileVectorEncoder>(FileVectorEncoder::from_file(cfg_.sentence_vectors));
  }

  void enhanced_labels() {
    if (enhanced_labeled_) return;
    stage("pseudolabel-enhanced", [&] {
      auto labeled = pseudo_label_corpus(in_domain(), enhanced_lexicon(), embeddings(),
                                         cfg_.min_noun_count, cfg_.atp_window);
      write_artifact(artifact_path("pseudo-enhanced", enhanced_hash(), "tsv"),
                     serialize_pseudo_labels(labeled));
      auto parts = filter_uncertain(labeled, cfg_.gamma);
      certain_ = std::move(parts.first);
      uncertain_ = std::move(parts.second);
      enhanced_labeled_ = true;
      return 0;
    });
  }

  PipelineConfig cfg_;
  std::string base_hash_;

  std::unique_ptr<TaggerBackend> tagger_;
  std::optional<AspectLexicon> lexicon_;
  std::optional<std::vector<TaggedSentence>> bank_;
  std::optional<std::vector<TaggedSentence>> in_domain_;
  std::optional<EmbeddingTable> embeddings_;
  std::optional<std::vector<PseudoLabeledSentence>> initial_labels_;
  std::optional<AspectLexicon> enhanced_;
  std::map<std::string, int> additions_;
  bool enhanced_labeled_ = false;
  std::vector<PseudoLabeledSentence> certain_;
  std::vector<PseudoLabeledSentence> uncertain_;
  std::optional<AugmentedSet> augmented_;
  std::unique_ptr<CbowWindowFeatures> backend_;
  std::optional<MultitaskModel> model_;
  int training_samples_ = 0;
  std::vector<std::string> artifacts_;
};

inline PipelineResult run_pipeline(const PipelineConfig& config) {
  Pipeline pipeline(config);
  return pipeline.run();
}

// resolves relative data paths (and the output dir) against `base_dir`,
// so a config next to its data files runs from anywhere
inline void resolve_config_paths(PipelineConfig& config, const std::string& base_dir) {
  auto resolve = [&](std::string& path) {
    if (path.empty()) return;
    std::filesystem::path p(path);
    if (p.is_absolute()) return;
    path = (std::filesystem::path(base_dir) / p).lexically_normal().string();
  };
  resolve(config.seeds);
  resolve(config.bank);
  resolve(config.in_domain);
  resolve(config.test);
  resolve(config.pos_lexicon);
  resolve(config.stopwords);
  resolve(config.sentence_vectors);
  resolve(config.output_dir);
}

}  // namespace aspectseed
