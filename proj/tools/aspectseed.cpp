// aspectseed command line front-end: every pipeline stage is independently
// runnable, plus a synthetic-corpus generator for demos and tests. Library
// errors map onto process exit codes (1 config, 2 data, 3 stage failure).

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aspectseed/config.hpp"
#include "aspectseed/error.hpp"
#include "aspectseed/pipeline.hpp"
#include "aspectseed/synthetic.hpp"

namespace {

using namespace aspectseed;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-c,--config", opts.config_path, "pipeline config file (INI)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", opts.sets,
                  "override a config key, section.key=value (repeatable, wins over file and env)");
}

// precedence: file < ASPECTSEED_* environment < --set
PipelineConfig make_config(const CommonOpts& opts) {
  PipelineConfig cfg = load_config(opts.config_path);
  resolve_config_paths(cfg, std::filesystem::path(opts.config_path).parent_path().string());
  for (const auto& [key, value] : apply_env_overrides(cfg)) {
    std::cerr << "env override: " << key << " = " << value << "\n";
  }
  for (const auto& assignment : opts.sets) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Config, "--set expects section.key=value, got '" + assignment + "'");
    }
    set_config_value(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
  }
  return cfg;
}

void print_run_summary(Pipeline& pipeline, const PipelineResult& result) {
  const auto& names = pipeline.enhanced_lexicon().aspect_names();
  std::cout << "seed additions: " << result.additions.size();
  if (!result.additions.empty()) {
    std::cout << " (";
    bool first = true;
    for (const auto& [word, aspect] : result.additions) {
      if (!first) std::cout << ", ";
      first = false;
      std::cout << word << " -> " << names[static_cast<std::size_t>(aspect)];
    }
    std::cout << ")";
  }
  std::cout << "\n";
  std::cout << "certain " << result.certain_count << " / uncertain " << result.uncertain_count
            << "\n";
  std::cout << "augmented kept " << result.augmented_kept << " dropped "
            << result.augmented_dropped << "\n";
  std::cout << "training samples " << result.training_samples << "\n";
  if (result.dropped_multi_aspect > 0) {
    std::cout << "test sentences dropped as multi-aspect: " << result.dropped_multi_aspect << "\n";
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"seed-word driven aspect pipeline: pseudo-labels, seed enhancement, retrieval "
               "augmentation, multitask training"};
  app.require_subcommand(1);

  // --- gen-synthetic
  auto* gen = app.add_subcommand("gen-synthetic", "write a separable synthetic dataset");
  std::string out_dir;
  SyntheticSpec spec;
  gen->add_option("-o,--out", out_dir, "output directory")->required();
  gen->add_option("--seed", spec.seed, "generator seed");
  gen->add_option("--bank", spec.bank_sentences, "bank sentences (multiple of 100)");
  gen->add_option("--in-domain", spec.in_domain_sentences, "in-domain sentences (multiple of 40)");
  gen->add_option("--test", spec.test_sentences, "test sentences (multiple of 25)");
  gen->callback([&] {
    for (const auto& path : write_synthetic_dataset(out_dir, spec)) {
      std::cout << "wrote " << path << "\n";
    }
  });

  // --- stage subcommands
  CommonOpts opts;

  auto* emb = app.add_subcommand("train-embeddings", "train (or reuse) the CBOW embeddings");
  add_common(emb, opts);
  emb->callback([&] {
    Pipeline pipeline(make_config(opts));
    const EmbeddingTable& table = pipeline.embeddings();
    std::cout << "vocabulary " << table.size() << ", dim " << table.dim() << "\n";
    std::cout << "embeddings: " << pipeline.artifact_path("embeddings", pipeline.embeddings_hash(), "tsv")
              << "\n";
  });

  auto* pl = app.add_subcommand("pseudo-label", "pseudo-label the in-domain split");
  add_common(pl, opts);
  pl->callback([&] {
    Pipeline pipeline(make_config(opts));
    const auto& labeled = pipeline.initial_labels();
    int certain = 0;
    for (const auto& s : labeled) {
      if (s.connection >= pipeline.config().gamma) ++certain;
    }
    std::cout << "labeled " << labeled.size() << " sentences, " << certain
              << " certain at gamma " << format_double(pipeline.config().gamma) << "\n";
    std::cout << "labels: " << pipeline.artifact_path("pseudo-initial", pipeline.pseudolabel_hash(), "tsv")
              << "\n";
  });

  auto* sec = app.add_subcommand("enhance-seeds", "run seed enhancement and print additions");
  add_common(sec, opts);
  sec->callback([&] {
    Pipeline pipeline(make_config(opts));
    const auto& additions = pipeline.additions();
    const auto& names = pipeline.enhanced_lexicon().aspect_names();
    if (!pipeline.config().sec_enabled) std::cout << "seed enhancement disabled\n";
    for (const auto& [word, aspect] : additions) {
      std::cout << word << " -> " << names[static_cast<std::size_t>(aspect)] << "\n";
    }
    std::cout << "added " << additions.size() << " seed words\n";
    std::cout << "lexicon: " << pipeline.artifact_path("seeds-enhanced", pipeline.sec_hash(), "txt")
              << "\n";
  });

  auto* ret = app.add_subcommand("retrieve", "retrieve and pseudo-label bank sentences");
  add_common(ret, opts);
  ret->callback([&] {
    Pipeline pipeline(make_config(opts));
    const AugmentedSet& aug = pipeline.augmented();
    std::cout << "augmented kept " << aug.sentences.size() << " dropped " << aug.dropped << "\n";
    std::cout << "augmented: " << pipeline.artifact_path("augmented", pipeline.retrieval_hash(), "tsv")
              << "\n";
  });

  auto* tr = app.add_subcommand("train", "train the multitask classifier");
  add_common(tr, opts);
  tr->callback([&] {
    Pipeline pipeline(make_config(opts));
    const MultitaskModel& model = pipeline.model();
    std::cout << "trained " << model.loss_curve.size() << " epochs";
    if (!model.loss_curve.empty()) {
      std::cout << ", final loss " << format_double(model.loss_curve.back());
    }
    std::cout << "\n";
    std::cout << "model: " << pipeline.artifact_path("model", pipeline.train_hash(), "txt") << "\n";
  });

  auto* ev = app.add_subcommand("evaluate", "run the full pipeline and report metrics");
  add_common(ev, opts);
  ev->callback([&] {
    Pipeline pipeline(make_config(opts));
    PipelineResult result = pipeline.run();
    print_run_summary(pipeline, result);
    std::cout << format_metric_report(result.report);
    std::cout << "report: " << result.report_path << "\n";
  });

  auto* pipe = app.add_subcommand("pipeline", "full pipeline, optionally over several seeds");
  add_common(pipe, opts);
  std::string seeds_csv;
  pipe->add_option("--seeds", seeds_csv, "comma-separated seed list; reports the per-seed and mean metrics");
  pipe->callback([&] {
    PipelineConfig cfg = make_config(opts);
    std::vector<std::uint64_t> seeds;
    if (seeds_csv.empty()) {
      seeds.push_back(cfg.seed);
    } else {
      for (const auto& field : split(seeds_csv, ',')) {
        seeds.push_back(detail::parse_u64("--seeds", std::string(trim(field))));
      }
    }
    double acc = 0.0, macro = 0.0, ate = 0.0, atp = 0.0;
    for (std::uint64_t seed : seeds) {
      PipelineConfig run_cfg = cfg;
      run_cfg.seed = seed;
      Pipeline pipeline(run_cfg);
      PipelineResult result = pipeline.run();
      if (seeds.size() == 1) {
        print_run_summary(pipeline, result);
        std::cout << format_metric_report(result.report);
      } else {
        std::cout << "seed " << seed << ": acd_accuracy "
                  << format_double(result.report.acd_accuracy) << "  acd_macro_f1 "
                  << format_double(result.report.acd_macro_f1) << "  ate_f1 "
                  << format_double(result.report.ate.f1) << "  atp_accuracy "
                  << format_double(result.report.atp_accuracy) << "\n";
      }
      std::cout << "report: " << result.report_path << "\n";
      acc += result.report.acd_accuracy;
      macro += result.report.acd_macro_f1;
      ate += result.report.ate.f1;
      atp += result.report.atp_accuracy;
    }
    if (seeds.size() > 1) {
      auto n = static_cast<double>(seeds.size());
      std::cout << "mean over " << seeds.size() << " seeds: acd_accuracy "
                << format_double(acc / n) << "  acd_macro_f1 " << format_double(macro / n)
                << "  ate_f1 " << format_double(ate / n) << "  atp_accuracy "
                << format_double(atp / n) << "\n";
    }
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const aspectseed::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
