#pragma once

// Pipeline configuration: one INI-style file covering every stage, a typed
// key table driving parsing, environment overrides, and a canonical dump
// whose FNV-1a hash content-addresses stage artifacts.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aspectseed/classifier.hpp"
#include "aspectseed/embedding.hpp"
#include "aspectseed/error.hpp"
#include "aspectseed/util.hpp"

namespace aspectseed {

struct PipelineConfig {
  // [data]
  std::string seeds;         // seed lexicon file
  std::string bank;          // unlabeled data bank, one sentence per line
  std::string in_domain;     // unlabeled in-domain sentences
  std::string test;          // gold-labeled evaluation file
  std::string pos_lexicon;   // empty = suffix heuristics only
  std::string stopwords;     // empty = bundled list

  // [embedding]
  CbowConfig embedding;

  // [pseudolabel]
  double gamma = 0.1;
  int min_noun_count = 2;
  int atp_window = 10;

  // [sec]
  bool sec_enabled = true;
  double sec_epsilon = 1e-9;

  // [retrieval]
  int k = 10;  // 0 disables augmentation
  std::string encoder = "cbow-sum";
  std::string sentence_vectors;  // for encoder = file
  bool filter_augmented = true;

  // [classifier]
  MultitaskConfig classifier;

  // [pipeline]
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  void validate() const {
    embedding.validate();
    classifier.validate();
    if (gamma < 0) throw Error(ErrorCode::Config, "pseudolabel.gamma must be >= 0");
    if (min_noun_count < 0) throw Error(ErrorCode::Config, "pseudolabel.min_noun_count must be >= 0");
    if (atp_window < 1) throw Error(ErrorCode::Config, "pseudolabel.atp_window must be >= 1");
    if (!(sec_epsilon > 0)) throw Error(ErrorCode::Config, "sec.epsilon must be > 0");
    if (k < 0) throw Error(ErrorCode::Config, "retrieval.k must be >= 0");
    if (encoder != "cbow-sum" && encoder != "file") {
      throw Error(ErrorCode::Config, "retrieval.encoder must be cbow-sum or file");
    }
    if (encoder == "file" && sentence_vectors.empty()) {
      throw Error(ErrorCode::Config, "retrieval.sentence_vectors required for encoder = file");
    }
    if (output_dir.empty()) throw Error(ErrorCode::Config, "pipeline.output_dir must be set");
  }
};

namespace detail {

inline long long parse_ll(const std::string& key, const std::string& value) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::Config, key + ": invalid integer '" + value + "'");
  }
  return out;
}

inline int parse_int(const std::string& key, const std::string& value) {
  return static_cast<int>(parse_ll(key, value));
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::Config, key + ": invalid unsigned integer '" + value + "'");
  }
  return out;
}

inline double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, key + ": invalid number '" + value + "'");
  }
}

inline bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw Error(ErrorCode::Config, key + ": invalid boolean '" + value + "'");
}

}  // namespace detail

struct ConfigKey {
  std::string section;
  std::string name;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, const std::string&)> set;

  std::string full() const { return section + "." + name; }
};

inline const std::vector<ConfigKey>& config_keys() {
  using detail::parse_flag;
  using detail::parse_int;
  using detail::parse_real;
  using detail::parse_u64;
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    auto str = [&](const char* section, const char* name, std::string PipelineConfig::*field) {
      k.push_back({section, name, [field](const PipelineConfig& c) { return c.*field; },
                   [field](PipelineConfig& c, const std::string& v) { c.*field = v; }});
    };
    auto integer = [&](const char* section, const char* name, auto getter, auto setter) {
      k.push_back({section, name,
                   [getter](const PipelineConfig& c) { return std::to_string(getter(c)); },
                   setter});
    };
    auto real = [&](const char* section, const char* name, auto getter, auto setter) {
      k.push_back({section, name,
                   [getter](const PipelineConfig& c) { return format_double(getter(c)); },
                   setter});
    };
    auto flag = [&](const char* section, const char* name, auto getter, auto setter) {
      k.push_back({section, name,
                   [getter](const PipelineConfig& c) { return getter(c) ? "true" : "false"; },
                   setter});
    };

    str("data", "seeds", &PipelineConfig::seeds);
    str("data", "bank", &PipelineConfig::bank);
    str("data", "in_domain", &PipelineConfig::in_domain);
    str("data", "test", &PipelineConfig::test);
    str("data", "pos_lexicon", &PipelineConfig::pos_lexicon);
    str("data", "stopwords", &PipelineConfig::stopwords);

    integer("embedding", "dim", [](const PipelineConfig& c) { return c.embedding.dim; },
            [](PipelineConfig& c, const std::string& v) { c.embedding.dim = parse_int("embedding.dim", v); });
    integer("embedding", "epochs", [](const PipelineConfig& c) { return c.embedding.epochs; },
            [](PipelineConfig& c, const std::string& v) { c.embedding.epochs = parse_int("embedding.epochs", v); });
    integer("embedding", "window", [](const PipelineConfig& c) { return c.embedding.window; },
            [](PipelineConfig& c, const std::string& v) { c.embedding.window = parse_int("embedding.window", v); });
    integer("embedding", "negatives", [](const PipelineConfig& c) { return c.embedding.negatives; },
            [](PipelineConfig& c, const std::string& v) { c.embedding.negatives = parse_int("embedding.negatives", v); });
    integer("embedding", "min_count", [](const PipelineConfig& c) { return c.embedding.min_count; },
            [](PipelineConfig& c, const std::string& v) { c.embedding.min_count = parse_int("embedding.min_count", v); });
    real("embedding", "learning_rate", [](const PipelineConfig& c) { return c.embedding.learning_rate; },
         [](PipelineConfig& c, const std::string& v) { c.embedding.learning_rate = parse_real("embedding.learning_rate", v); });

    real("pseudolabel", "gamma", [](const PipelineConfig& c) { return c.gamma; },
         [](PipelineConfig& c, const std::string& v) { c.gamma = parse_real("pseudolabel.gamma", v); });
    integer("pseudolabel", "min_noun_count", [](const PipelineConfig& c) { return c.min_noun_count; },
            [](PipelineConfig& c, const std::string& v) { c.min_noun_count = parse_int("pseudolabel.min_noun_count", v); });
    integer("pseudolabel", "atp_window", [](const PipelineConfig& c) { return c.atp_window; },
            [](PipelineConfig& c, const std::string& v) { c.atp_window = parse_int("pseudolabel.atp_window", v); });

    flag("sec", "enabled", [](const PipelineConfig& c) { return c.sec_enabled; },
         [](PipelineConfig& c, const std::string& v) { c.sec_enabled = parse_flag("sec.enabled", v); });
    real("sec", "epsilon", [](const PipelineConfig& c) { return c.sec_epsilon; },
         [](PipelineConfig& c, const std::string& v) { c.sec_epsilon = parse_real("sec.epsilon", v); });

    integer("retrieval", "k", [](const PipelineConfig& c) { return c.k; },
            [](PipelineConfig& c, const std::string& v) { c.k = parse_int("retrieval.k", v); });
    str("retrieval", "encoder", &PipelineConfig::encoder);
    str("retrieval", "sentence_vectors", &PipelineConfig::sentence_vectors);
    flag("retrieval", "filter", [](const PipelineConfig& c) { return c.filter_augmented; },
         [](PipelineConfig& c, const std::string& v) { c.filter_augmented = parse_flag("retrieval.filter", v); });

    real("classifier", "lambda_acd", [](const PipelineConfig& c) { return c.classifier.lambda_acd; },
         [](PipelineConfig& c, const std::string& v) { c.classifier.lambda_acd = parse_real("classifier.lambda_acd", v); });
    real("classifier", "lambda_ate", [](const PipelineConfig& c) { return c.classifier.lambda_ate; },
         [](PipelineConfig& c, const std::string& v) { c.classifier.lambda_ate = parse_real("classifier.lambda_ate", v); });
    real("classifier", "lambda_atp", [](const PipelineConfig& c) { return c.classifier.lambda_atp; },
         [](PipelineConfig& c, const std::string& v) { c.classifier.lambda_atp = parse_real("classifier.lambda_atp", v); });
    integer("classifier", "batch_size", [](const PipelineConfig& c) { return c.classifier.batch_size; },
            [](PipelineConfig& c, const std::string& v) { c.classifier.batch_size = parse_int("classifier.batch_size", v); });
    real("classifier", "learning_rate", [](const PipelineConfig& c) { return c.classifier.learning_rate; },
         [](PipelineConfig& c, const std::string& v) { c.classifier.learning_rate = parse_real("classifier.learning_rate", v); });
    integer("classifier", "epochs", [](const PipelineConfig& c) { return c.classifier.epochs; },
            [](PipelineConfig& c, const std::string& v) { c.classifier.epochs = parse_int("classifier.epochs", v); });
    integer("classifier", "hidden_dim", [](const PipelineConfig& c) { return c.classifier.hidden_dim; },
            [](PipelineConfig& c, const std::string& v) { c.classifier.hidden_dim = parse_int("classifier.hidden_dim", v); });
    integer("classifier", "context_dim", [](const PipelineConfig& c) { return c.classifier.context_dim; },
            [](PipelineConfig& c, const std::string& v) { c.classifier.context_dim = parse_int("classifier.context_dim", v); });

    str("pipeline", "output_dir", &PipelineConfig::output_dir);
    k.push_back({"pipeline", "seed",
                 [](const PipelineConfig& c) { return std::to_string(c.seed); },
                 [](PipelineConfig& c, const std::string& v) { c.seed = parse_u64("pipeline.seed", v); }});
    return k;
  }();
  return keys;
}

// set one value addressed as "section.key"
inline void set_config_value(PipelineConfig& config, const std::string& address,
                             const std::string& value) {
  for (const auto& key : config_keys()) {
    if (key.full() == address) {
      key.set(config, value);
      return;
    }
  }
  throw Error(ErrorCode::Config, "unknown config key '" + address + "'");
}

inline PipelineConfig parse_config(const std::string& text) {
  PipelineConfig config;
  std::string section;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": unterminated section");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      bool known = false;
      for (const auto& key : config_keys()) known = known || key.section == section;
      if (!known) {
        throw Error(ErrorCode::Config,
                    "line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string name(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (section.empty()) {
      throw Error(ErrorCode::Config,
                  "line " + std::to_string(line_no) + ": key outside any section");
    }
    bool found = false;
    for (const auto& key : config_keys()) {
      if (key.section == section && key.name == name) {
        key.set(config, value);
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": unknown key '" +
                                         section + "." + name + "'");
    }
  }
  return config;
}

inline PipelineConfig load_config(const std::string& path) {
  return parse_config(read_file(path));
}

// canonical form: fixed section and key order, current values
inline std::string dump_config(const PipelineConfig& config) {
  std::string out;
  std::string section;
  for (const auto& key : config_keys()) {
    if (key.section != section) {
      if (!section.empty()) out += "\n";
      section = key.section;
      out += "[" + section + "]\n";
    }
    out += key.name + " = " + key.get(config) + "\n";
  }
  return out;
}

// environment overrides: ASPECTSEED_<SECTION>_<KEY> (upper case, non-alnum
// mapped to '_'); returns the (key, value) pairs applied
inline std::vector<std::pair<std::string, std::string>> apply_env_overrides(
    PipelineConfig& config) {
  std::vector<std::pair<std::string, std::string>> applied;
  for (const auto& key : config_keys()) {
    std::string var = "ASPECTSEED_" + key.section + "_" + key.name;
    for (char& c : var) {
      unsigned char u = static_cast<unsigned char>(c);
      c = std::isalnum(u) ? static_cast<char>(std::toupper(u)) : '_';
    }
    const char* value = std::getenv(var.c_str());
    if (value != nullptr) {
      key.set(config, value);
      applied.emplace_back(key.full(), value);
    }
  }
  return applied;
}

inline std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

// hash of the canonical dump plus the effective seed
inline std::string config_hash(const PipelineConfig& config) {
  return hash_hex(fnv1a64(dump_config(config)));
}

// chained stage hash: depends on the previous stage and this stage's name
inline std::string stage_hash(const std::string& previous, const std::string& stage,
                              const std::string& payload = "") {
  return hash_hex(fnv1a64(payload, fnv1a64(stage, fnv1a64(previous))));
}

}  // namespace aspectseed
