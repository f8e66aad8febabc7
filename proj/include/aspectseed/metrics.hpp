#pragma once

// Evaluation metrics: accuracy and macro-F1 for classification, exact-match
// span F1 for term extraction, and the majority rule lifting term polarities
// to a sentence polarity.

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "aspectseed/corpus.hpp"
#include "aspectseed/error.hpp"
#include "aspectseed/util.hpp"

namespace aspectseed {

inline double accuracy(const std::vector<int>& gold, const std::vector<int>& predicted) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::LengthMismatch, "accuracy: label lists differ in length");
  }
  if (gold.empty()) throw Error(ErrorCode::InvalidArgument, "accuracy: empty inputs");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == predicted[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

struct ClassF1 {
  int label = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int support = 0;  // gold occurrences
  bool absent = false;  // never seen in gold or predictions
};

inline std::vector<ClassF1> per_class_f1(const std::vector<int>& gold,
                                         const std::vector<int>& predicted, int num_classes) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::LengthMismatch, "per_class_f1: label lists differ in length");
  }
  if (gold.empty()) throw Error(ErrorCode::InvalidArgument, "per_class_f1: empty inputs");
  if (num_classes < 1) throw Error(ErrorCode::InvalidArgument, "per_class_f1: no classes");
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= num_classes || predicted[i] < 0 || predicted[i] >= num_classes) {
      throw Error(ErrorCode::Data, "per_class_f1: label out of range");
    }
  }

  std::vector<ClassF1> out;
  for (int c = 0; c < num_classes; ++c) {
    int tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      bool g = gold[i] == c, p = predicted[i] == c;
      if (g && p) ++tp;
      if (!g && p) ++fp;
      if (g && !p) ++fn;
    }
    ClassF1 f;
    f.label = c;
    f.support = tp + fn;
    f.absent = (tp + fp + fn) == 0;
    if (tp + fp > 0) f.precision = static_cast<double>(tp) / (tp + fp);
    if (tp + fn > 0) f.recall = static_cast<double>(tp) / (tp + fn);
    if (f.precision + f.recall > 0) {
      f.f1 = 2.0 * f.precision * f.recall / (f.precision + f.recall);
    }
    out.push_back(f);
  }
  return out;
}

// unweighted mean of per-class F1. A class absent from both gold and
// predictions counts as 0 unless include_absent is false, which drops it
// from the mean instead.
inline double macro_f1(const std::vector<int>& gold, const std::vector<int>& predicted,
                       int num_classes, bool include_absent = true) {
  auto classes = per_class_f1(gold, predicted, num_classes);
  double sum = 0.0;
  int counted = 0;
  for (const auto& c : classes) {
    if (c.absent && !include_absent) continue;
    sum += c.f1;
    ++counted;
  }
  if (counted == 0) throw Error(ErrorCode::InvalidArgument, "macro_f1: no classes to average");
  return sum / counted;
}

struct SpanF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int gold_count = 0;
  int predicted_count = 0;
  int matched = 0;
};

// exact-match span metrics over per-sentence span lists; polarity must match
// too when match_polarity is set. Empty gold and predictions count as a
// perfect score.
inline SpanF1 span_f1(const std::vector<std::vector<TermSpan>>& gold,
                      const std::vector<std::vector<TermSpan>>& predicted,
                      bool match_polarity = false) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::LengthMismatch, "span_f1: sentence counts differ");
  }
  SpanF1 out;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    out.gold_count += static_cast<int>(gold[s].size());
    out.predicted_count += static_cast<int>(predicted[s].size());
    std::vector<bool> used(gold[s].size(), false);
    for (const auto& p : predicted[s]) {
      for (std::size_t g = 0; g < gold[s].size(); ++g) {
        if (used[g]) continue;
        bool same = gold[s][g].start == p.start && gold[s][g].end == p.end;
        if (same && match_polarity) same = gold[s][g].polarity == p.polarity;
        if (same) {
          used[g] = true;
          ++out.matched;
          break;
        }
      }
    }
  }
  if (out.gold_count == 0 && out.predicted_count == 0) {
    out.precision = out.recall = out.f1 = 1.0;
    return out;
  }
  if (out.predicted_count > 0) {
    out.precision = static_cast<double>(out.matched) / out.predicted_count;
  }
  if (out.gold_count > 0) out.recall = static_cast<double>(out.matched) / out.gold_count;
  if (out.precision + out.recall > 0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

// sentence polarity = majority vote of its term polarities, ties positive
inline Polarity sentence_atp(const std::vector<Polarity>& term_polarities) {
  if (term_polarities.empty()) {
    throw Error(ErrorCode::NoTerms, "sentence_atp: no term polarities");
  }
  int pos = 0, neg = 0;
  for (Polarity p : term_polarities) {
    if (p == Polarity::Pos) ++pos;
    else ++neg;
  }
  return neg > pos ? Polarity::Neg : Polarity::Pos;
}

struct MetricReport {
  double acd_accuracy = 0.0;
  double acd_macro_f1 = 0.0;
  std::vector<ClassF1> acd_per_class;
  std::vector<std::string> aspect_names;

  SpanF1 ate;

  double atp_accuracy = 0.0;
  double atp_macro_f1 = 0.0;
  std::vector<ClassF1> atp_per_class;
  int atp_evaluated = 0;
  int atp_skipped = 0;  // no-term or multi-polarity sentences

  int num_sentences = 0;
  std::string config_hash;
  std::uint64_t seed = 0;
};

// machine-readable form: one "key<TAB>value" per line, stable order
inline std::string serialize_metric_report(const MetricReport& r) {
  std::string out;
  auto put = [&](const std::string& key, const std::string& value) {
    out += key + "\t" + value + "\n";
  };
  put("config_hash", r.config_hash);
  put("seed", std::to_string(r.seed));
  put("sentences", std::to_string(r.num_sentences));
  put("acd.accuracy", format_double(r.acd_accuracy));
  put("acd.macro_f1", format_double(r.acd_macro_f1));
  for (const auto& c : r.acd_per_class) {
    std::string name = c.label < static_cast<int>(r.aspect_names.size())
                           ? r.aspect_names[static_cast<std::size_t>(c.label)]
                           : std::to_string(c.label + 1);
    put("acd.f1." + name, format_double(c.f1));
    put("acd.support." + name, std::to_string(c.support));
  }
  put("ate.precision", format_double(r.ate.precision));
  put("ate.recall", format_double(r.ate.recall));
  put("ate.f1", format_double(r.ate.f1));
  put("ate.gold_spans", std::to_string(r.ate.gold_count));
  put("ate.predicted_spans", std::to_string(r.ate.predicted_count));
  put("atp.accuracy", format_double(r.atp_accuracy));
  put("atp.macro_f1", format_double(r.atp_macro_f1));
  for (const auto& c : r.atp_per_class) {
    const char* name = c.label == 0 ? "POS" : "NEG";
    put(std::string("atp.f1.") + name, format_double(c.f1));
  }
  put("atp.evaluated", std::to_string(r.atp_evaluated));
  put("atp.skipped", std::to_string(r.atp_skipped));
  return out;
}

// human-readable table
inline std::string format_metric_report(const MetricReport& r) {
  std::ostringstream out;
  out << "== evaluation (" << r.num_sentences << " sentences) ==\n";
  out << "config " << r.config_hash << "  seed " << r.seed << "\n";
  out << "ACD  accuracy " << format_double(r.acd_accuracy) << "  macro-F1 "
      << format_double(r.acd_macro_f1) << "\n";
  for (const auto& c : r.acd_per_class) {
    std::string name = c.label < static_cast<int>(r.aspect_names.size())
                           ? r.aspect_names[static_cast<std::size_t>(c.label)]
                           : std::to_string(c.label + 1);
    out << "     " << name << " F1 " << format_double(c.f1) << " (support " << c.support
        << ")\n";
  }
  out << "ATE  P " << format_double(r.ate.precision) << "  R " << format_double(r.ate.recall)
      << "  F1 " << format_double(r.ate.f1) << " (" << r.ate.matched << "/"
      << r.ate.predicted_count << " predicted, " << r.ate.gold_count << " gold)\n";
  out << "ATP  accuracy " << format_double(r.atp_accuracy) << "  macro-F1 "
      << format_double(r.atp_macro_f1) << " (" << r.atp_evaluated << " evaluated, "
      << r.atp_skipped << " skipped)\n";
  return out.str();
}

}  // namespace aspectseed
