#pragma once

// Seed lexicons. SeedLexicon mirrors the on-disk format (sections `aspects`
// and `polarities`, with `NAME.derived` lines carrying auto-added words);
// AspectLexicon is the runtime view with initial seeds H, additional seeds T
// and their union G per category.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "aspectseed/error.hpp"
#include "aspectseed/util.hpp"

namespace aspectseed {

struct SeedEntry {
  std::string name;
  std::vector<std::string> initial;  // H
  std::vector<std::string> derived;  // T
};

struct SeedLexicon {
  std::vector<SeedEntry> aspects;
  std::vector<SeedEntry> polarities;

  void validate() const {
    if (aspects.size() < 2) {
      throw Error(ErrorCode::Data, "seed lexicon needs at least 2 aspects");
    }
    check_entries(aspects, "aspect");
    check_entries(polarities, "polarity");
    if (polarities.size() != 2 || polarities[0].name != "POS" || polarities[1].name != "NEG") {
      throw Error(ErrorCode::Data, "polarities section must define exactly POS and NEG");
    }
    // a derived word belongs to at most one aspect
    std::set<std::string> seen;
    for (const auto& entry : aspects) {
      for (const auto& word : entry.derived) {
        if (!seen.insert(word).second) {
          throw Error(ErrorCode::Data, "derived word '" + word + "' mapped to several aspects");
        }
      }
    }
  }

 private:
  static void check_entries(const std::vector<SeedEntry>& entries, const std::string& kind) {
    std::set<std::string> names;
    for (const auto& entry : entries) {
      if (entry.name.empty()) throw Error(ErrorCode::Data, "empty " + kind + " name");
      if (!names.insert(entry.name).second) {
        throw Error(ErrorCode::Data, "duplicate " + kind + " '" + entry.name + "'");
      }
      if (entry.initial.empty()) {
        throw Error(ErrorCode::Data, kind + " '" + entry.name + "' has no seed words");
      }
      std::set<std::string> words;
      for (const auto& w : entry.initial) {
        if (!words.insert(w).second) {
          throw Error(ErrorCode::Data,
                      "duplicate seed '" + w + "' in " + kind + " '" + entry.name + "'");
        }
      }
      for (const auto& w : entry.derived) {
        if (!words.insert(w).second) {
          throw Error(ErrorCode::Data,
                      "derived seed '" + w + "' duplicates a seed in '" + entry.name + "'");
        }
      }
    }
  }
};

inline SeedLexicon parse_seed_lexicon(const std::string& text) {
  SeedLexicon lex;
  std::vector<SeedEntry>* section = nullptr;
  auto find_entry = [](std::vector<SeedEntry>& entries, const std::string& name) -> SeedEntry& {
    for (auto& e : entries) {
      if (e.name == name) return e;
    }
    entries.push_back(SeedEntry{name, {}, {}});
    return entries.back();
  };

  int line_no = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line == "[aspects]") {
        section = &lex.aspects;
      } else if (line == "[polarities]") {
        section = &lex.polarities;
      } else {
        throw Error(ErrorCode::Data,
                    "line " + std::to_string(line_no) + ": unknown section " + std::string(line));
      }
      continue;
    }
    if (!section) {
      throw Error(ErrorCode::Data,
                  "line " + std::to_string(line_no) + ": seed entry outside any section");
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Data,
                  "line " + std::to_string(line_no) + ": expected `NAME = word word ...`");
    }
    std::string key(trim(line.substr(0, eq)));
    auto words = split_ws(line.substr(eq + 1));
    bool derived = false;
    const std::string marker = ".derived";
    if (key.size() > marker.size() &&
        key.compare(key.size() - marker.size(), marker.size(), marker) == 0) {
      derived = true;
      key = key.substr(0, key.size() - marker.size());
    }
    auto& entry = find_entry(*section, key);
    auto& target = derived ? entry.derived : entry.initial;
    target.insert(target.end(), words.begin(), words.end());
  }
  lex.validate();
  return lex;
}

inline SeedLexicon load_seed_lexicon(const std::string& path) {
  return parse_seed_lexicon(read_file(path));
}

inline std::string serialize_seed_lexicon(const SeedLexicon& lex) {
  std::string out;
  auto dump = [&out](const std::vector<SeedEntry>& entries) {
    for (const auto& entry : entries) {
      out += entry.name + " = " + join(entry.initial, " ") + "\n";
      if (!entry.derived.empty()) {
        out += entry.name + ".derived = " + join(entry.derived, " ") + "\n";
      }
    }
  };
  out += "[aspects]\n";
  dump(lex.aspects);
  out += "[polarities]\n";
  dump(lex.polarities);
  return out;
}

inline void save_seed_lexicon(const SeedLexicon& lex, const std::string& path) {
  write_file(path, serialize_seed_lexicon(lex));
}

// Runtime category: H = initial, T = additional, G = H ∪ T (H order first).
struct CategorySeeds {
  std::string name;
  std::vector<std::string> initial;
  std::vector<std::string> additional;
  std::vector<std::string> all;
  std::unordered_set<std::string> all_set;

  static CategorySeeds build(const SeedEntry& entry) {
    CategorySeeds c;
    c.name = entry.name;
    c.initial = entry.initial;
    for (const auto& w : entry.initial) {
      if (c.all_set.insert(w).second) c.all.push_back(w);
    }
    for (const auto& w : entry.derived) {
      if (c.all_set.insert(w).second) {
        c.additional.push_back(w);
        c.all.push_back(w);
      }
    }
    return c;
  }

  bool contains(const std::string& word) const { return all_set.count(word) != 0; }
};

class AspectLexicon {
 public:
  AspectLexicon() = default;

  explicit AspectLexicon(const SeedLexicon& lex) {
    lex.validate();
    for (const auto& entry : lex.aspects) aspects_.push_back(CategorySeeds::build(entry));
    for (const auto& entry : lex.polarities) polarities_.push_back(CategorySeeds::build(entry));
    for (const auto& aspect : aspects_) {
      for (const auto& w : aspect.initial) initial_seeds_.insert(w);
    }
  }

  int num_aspects() const { return static_cast<int>(aspects_.size()); }
  const std::vector<CategorySeeds>& aspects() const { return aspects_; }
  const std::vector<CategorySeeds>& polarities() const { return polarities_; }
  const CategorySeeds& aspect(int i) const {
    if (i < 0 || i >= num_aspects()) {
      throw Error(ErrorCode::UnknownAspect, "aspect index " + std::to_string(i) + " out of range");
    }
    return aspects_[static_cast<std::size_t>(i)];
  }

  int aspect_index(const std::string& name) const {
    for (std::size_t i = 0; i < aspects_.size(); ++i) {
      if (aspects_[i].name == name) return static_cast<int>(i);
    }
    throw Error(ErrorCode::UnknownAspect, "unknown aspect '" + name + "'");
  }

  std::vector<std::string> aspect_names() const {
    std::vector<std::string> names;
    names.reserve(aspects_.size());
    for (const auto& a : aspects_) names.push_back(a.name);
    return names;
  }

  // true when `word` is one of the given initial seeds H of any aspect
  bool is_initial_seed(const std::string& word) const { return initial_seeds_.count(word) != 0; }

  // A copy whose H is unchanged and T is empty: the view used while searching
  // for additional seeds.
  AspectLexicon initial_only() const {
    AspectLexicon out(*this);
    for (auto& aspect : out.aspects_) {
      aspect.additional.clear();
      aspect.all = aspect.initial;
      aspect.all_set =
          std::unordered_set<std::string>(aspect.initial.begin(), aspect.initial.end());
    }
    return out;
  }

  // Extends T with `additions` (word -> aspect index). Words already in some
  // H are skipped, as are words already added elsewhere.
  AspectLexicon with_additions(const std::map<std::string, int>& additions) const {
    AspectLexicon out(*this);
    for (const auto& [word, aspect_idx] : additions) {
      if (aspect_idx < 0 || aspect_idx >= out.num_aspects()) {
        throw Error(ErrorCode::UnknownAspect,
                    "addition '" + word + "' maps to invalid aspect " + std::to_string(aspect_idx));
      }
      if (out.initial_seeds_.count(word)) continue;
      bool taken = false;
      for (const auto& aspect : out.aspects_) {
        if (aspect.all_set.count(word)) taken = true;
      }
      if (taken) continue;
      auto& aspect = out.aspects_[static_cast<std::size_t>(aspect_idx)];
      aspect.additional.push_back(word);
      aspect.all.push_back(word);
      aspect.all_set.insert(word);
    }
    return out;
  }

  // Back to the file form, additions under the `derived` markers.
  SeedLexicon to_seed_lexicon() const {
    SeedLexicon lex;
    for (const auto& a : aspects_) lex.aspects.push_back(SeedEntry{a.name, a.initial, a.additional});
    for (const auto& p : polarities_) {
      lex.polarities.push_back(SeedEntry{p.name, p.initial, p.additional});
    }
    return lex;
  }

 private:
  std::vector<CategorySeeds> aspects_;
  std::vector<CategorySeeds> polarities_;
  std::unordered_set<std::string> initial_seeds_;
};

}  // namespace aspectseed
