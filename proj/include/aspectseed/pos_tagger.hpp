#pragma once

// Pluggable POS tagging over the closed tag set {NOUN, ADJ, VERB, OTHER}.
// The default backend is a word->tag lexicon file plus suffix heuristics,
// falling back to OTHER, so the whole pipeline stays self-contained and
// deterministic.

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aspectseed/corpus.hpp"
#include "aspectseed/error.hpp"
#include "aspectseed/util.hpp"

namespace aspectseed {

class TaggerBackend {
 public:
  virtual ~TaggerBackend() = default;
  virtual std::string id() const = 0;
  virtual Pos tag(const std::string& surface) const = 0;

  void tag_sentence(TaggedSentence& sentence) const {
    for (auto& token : sentence.tokens) token.pos = tag(token.surface);
  }
};

class LexiconTagger : public TaggerBackend {
 public:
  LexiconTagger() = default;
  explicit LexiconTagger(std::unordered_map<std::string, Pos> lexicon)
      : lexicon_(std::move(lexicon)) {}

  // File format: `word<TAB>TAG` per line, '#' comments allowed.
  static LexiconTagger from_file(const std::string& path) {
    std::unordered_map<std::string, Pos> lexicon;
    int line_no = 0;
    for (const auto& raw : read_lines(path)) {
      ++line_no;
      auto line = trim(raw);
      if (line.empty() || line.front() == '#') continue;
      auto fields = split(line, '\t');
      if (fields.size() != 2) {
        throw Error(ErrorCode::Data,
                    path + ":" + std::to_string(line_no) + ": expected `word<TAB>TAG`");
      }
      lexicon[std::string(trim(fields[0]))] = pos_from_string(trim(fields[1]));
    }
    return LexiconTagger(std::move(lexicon));
  }

  std::string id() const override { return "lexicon"; }

  Pos tag(const std::string& surface) const override {
    auto it = lexicon_.find(surface);
    if (it != lexicon_.end()) return it->second;

    bool alphabetic = !surface.empty();
    for (unsigned char c : surface) {
      if (c < 0x80 && !std::isalpha(c)) {
        alphabetic = false;
        break;
      }
    }
    if (!alphabetic) return Pos::Other;

    // plural noun / 3rd-person verb formed from a known base word
    if (surface.size() > 1 && surface.back() == 's') {
      auto base = lexicon_.find(surface.substr(0, surface.size() - 1));
      if (base != lexicon_.end() &&
          (base->second == Pos::Noun || base->second == Pos::Verb)) {
        return base->second;
      }
    }
    for (const auto& [suffix, pos] : suffix_rules()) {
      if (surface.size() > suffix.size() &&
          surface.compare(surface.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return pos;
      }
    }
    return Pos::Other;
  }

  std::size_t lexicon_size() const { return lexicon_.size(); }

 private:
  static const std::vector<std::pair<std::string, Pos>>& suffix_rules() {
    // checked in order; longer suffixes listed before their tails
    static const std::vector<std::pair<std::string, Pos>> rules = {
        {"ation", Pos::Noun}, {"tion", Pos::Noun}, {"sion", Pos::Noun}, {"ness", Pos::Noun},
        {"ment", Pos::Noun},  {"ship", Pos::Noun}, {"ity", Pos::Noun},  {"ism", Pos::Noun},
        {"ist", Pos::Noun},   {"ious", Pos::Adj},  {"ous", Pos::Adj},   {"able", Pos::Adj},
        {"ible", Pos::Adj},   {"less", Pos::Adj},  {"ful", Pos::Adj},   {"ive", Pos::Adj},
        {"ish", Pos::Adj},    {"ical", Pos::Adj},  {"ing", Pos::Verb},  {"ize", Pos::Verb},
        {"ise", Pos::Verb},   {"ied", Pos::Verb},  {"ed", Pos::Verb},   {"al", Pos::Adj},
        {"ic", Pos::Adj},     {"ly", Pos::Other},  {"y", Pos::Adj},
    };
    return rules;
  }

  std::unordered_map<std::string, Pos> lexicon_;
};

using TaggerFactory =
    std::function<std::unique_ptr<TaggerBackend>(const std::string& resource)>;

inline std::map<std::string, TaggerFactory>& tagger_registry() {
  static std::map<std::string, TaggerFactory> registry = [] {
    std::map<std::string, TaggerFactory> r;
    r["lexicon"] = [](const std::string& resource) -> std::unique_ptr<TaggerBackend> {
      if (resource.empty()) return std::make_unique<LexiconTagger>();
      return std::make_unique<LexiconTagger>(LexiconTagger::from_file(resource));
    };
    return r;
  }();
  return registry;
}

inline void register_tagger(const std::string& id, TaggerFactory factory) {
  tagger_registry()[id] = std::move(factory);
}

// `resource` is backend-specific; for "lexicon" it is the lexicon file path.
inline std::unique_ptr<TaggerBackend> make_tagger(const std::string& id,
                                                  const std::string& resource = {}) {
  auto it = tagger_registry().find(id);
  if (it == tagger_registry().end()) {
    throw Error(ErrorCode::UnknownBackend, "unknown tagger backend: '" + id + "'");
  }
  return it->second(resource);
}

inline void pos_tag(TaggedSentence& sentence, const TaggerBackend& tagger) {
  tagger.tag_sentence(sentence);
}

}  // namespace aspectseed
