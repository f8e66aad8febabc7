#pragma once

// Separable synthetic restaurant-review generator. Each aspect owns one seed
// noun plus four hidden nouns that never appear in the seed lexicon; hidden
// nouns surface alone (uncertain under the initial seeds), beside their own
// aspect's seed, and beside the next aspect's seed, so seed enhancement has
// real work to do: they become boundary keywords whose clarity points back
// at the owning aspect. Each aspect also owns a venue word and a verb that
// appear in nearly every sentence; they carry the aspect identity into the
// embedding space (nouns alone would share all their contexts) but stay out
// of the noun lexicon so spans and enhancement candidates remain on aspect
// terms. Polarity adjectives are shared across aspects and cycled so every
// adjective surfaces under every aspect and both polarities; register verbs
// correlate with polarity so the two adjective families stay separable.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "aspectseed/error.hpp"
#include "aspectseed/util.hpp"

namespace aspectseed {

struct SyntheticSpec {
  int bank_sentences = 2000;
  int in_domain_sentences = 200;
  int test_sentences = 500;
  std::uint64_t seed = 2024;

  void validate() const {
    if (bank_sentences < 100 || bank_sentences % 100 != 0) {
      throw Error(ErrorCode::InvalidArgument, "synthetic: bank size must a positive multiple of 100");
    }
    if (in_domain_sentences < 40 || in_domain_sentences % 40 != 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "synthetic: in-domain size must be a positive multiple of 40");
    }
    if (test_sentences < 25 || test_sentences % 25 != 0) {
      throw Error(ErrorCode::InvalidArgument, "synthetic: test size must be a positive multiple of 25");
    }
  }
};

struct SyntheticDataset {
  std::vector<std::string> bank;
  std::vector<std::string> in_domain;
  std::vector<std::string> test_lines;  // text <TAB> aspect <TAB> start:end:POL
  std::string seeds_text;
  std::string pos_lexicon_text;
  std::string config_text;
};

namespace synth {

struct AspectVocab {
  std::string name;
  std::string seed;
  std::vector<std::string> hidden;
  std::string venue;  // aspect-specific location word, tagged OTHER
  std::string verb;   // aspect-specific verb, tagged VERB
};

inline const std::vector<AspectVocab>& aspect_vocab() {
  static const std::vector<AspectVocab> aspects = {
      {"food", "pasta", {"pizza", "burger", "salad", "dessert"}, "kitchen", "tasted"},
      {"service", "waiter", {"staff", "manager", "hostess", "crew"}, "lobby", "greeted"},
      {"ambience", "decor", {"lighting", "music", "patio", "interior"}, "hall", "echoed"},
      {"drinks", "wine", {"beer", "cocktail", "espresso", "lemonade"}, "bar", "poured"},
      {"price", "bill", {"cost", "markup", "surcharge", "tab"}, "menu", "charged"},
  };
  return aspects;
}

inline const std::vector<std::string>& pos_adjectives() {
  static const std::vector<std::string> words = {"good", "great", "lovely", "superb", "pleasant"};
  return words;  // words[0] is the polarity seed
}

inline const std::vector<std::string>& neg_adjectives() {
  static const std::vector<std::string> words = {"bad", "awful", "terrible", "dreadful", "lousy"};
  return words;
}

inline const std::vector<std::string>& pos_registers() {
  static const std::vector<std::string> words = {"smiled", "enjoyed", "praised", "celebrated",
                                                 "approved"};
  return words;
}

inline const std::vector<std::string>& neg_registers() {
  static const std::vector<std::string> words = {"frowned", "complained", "grumbled", "sighed",
                                                 "regretted"};
  return words;
}

struct Line {
  std::vector<std::string> tokens;
  int aspect = 0;
  int noun_pos = -1;  // single-noun templates only
  bool positive = true;
};

// single-noun templates; the noun moves through the position bands, all but
// one variant carry the aspect venue or verb (v / b), and the adjective sits
// within two tokens of the noun so token-level context windows can reach it
inline Line single_template(int which, const std::string& n, const std::string& a,
                            const std::string& r, const std::string& v, const std::string& b) {
  switch (which % 14) {
    case 0: return {{"the", n, "was", a, "at", "the", v}, 0, 1, true};
    case 1: return {{"the", a, n, b, "and", "we", r}, 0, 2, true};
    case 2: return {{"we", r, "the", a, n, "at", "the", v}, 0, 4, true};
    case 3: return {{"honestly", "the", n, "seemed", a, "in", "the", v}, 0, 2, true};
    case 4: return {{"the", "really", a, n, "at", "the", v}, 0, 3, true};
    case 5: return {{"we", "thought", "the", v, n, "was", a}, 0, 4, true};
    case 6: return {{a, n, b, "tonight", "and", "we", r}, 0, 1, true};
    case 7: return {{"it", "was", "a", a, n, "from", "the", v}, 0, 4, true};
    case 8: return {{"the", n, b, a, "again", "and", "we", r}, 0, 1, true};
    case 9: return {{"quite", "a", a, n, "near", "the", v}, 0, 3, true};
    case 10: return {{"we", "found", "the", n, "very", a, "at", "the", v}, 0, 3, true};
    case 11: return {{"overall", "the", n, b, a}, 0, 2, true};
    case 12: return {{"we", r, "because", "the", n, b, a}, 0, 4, true};
    default: return {{"the", n, "was", a, "and", "we", r}, 0, 1, true};
  }
}

inline std::vector<std::string> mixed_template(int which, const std::string& n1,
                                               const std::string& n2, const std::string& a,
                                               const std::string& r, const std::string& v,
                                               const std::string& b) {
  switch (which % 5) {
    case 0: return {"the", n1, "and", "the", n2, "at", "the", v, "were", a};
    case 1: return {a, n1, "and", a, n2, b};
    case 2: return {"we", r, "the", n1, "and", "the", n2, "in", "the", v};
    case 3: return {"both", "the", n1, "and", "the", n2, "seemed", a, "near", "the", v};
    default: return {"the", n1, "with", "the", n2, b, a};
  }
}

}  // namespace synth

inline SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const auto& aspects = synth::aspect_vocab();
  const int num_aspects = static_cast<int>(aspects.size());
  Rng rng(spec.seed);

  auto draw_polarity = [&rng] { return rng.below(2) == 0; };
  // cycle adjectives per aspect and polarity: the polarity seed anchors half
  // the sentences (matched-word rule) while every shared adjective is
  // guaranteed to surface under every aspect, keeping them aspect-neutral
  std::vector<std::array<std::size_t, 2>> adj_cycle(aspects.size(), {0, 0});
  auto draw_adjective = [&adj_cycle](int aspect, bool positive) {
    const auto& words = positive ? synth::pos_adjectives() : synth::neg_adjectives();
    std::size_t& count = adj_cycle[static_cast<std::size_t>(aspect)][positive ? 1 : 0];
    std::size_t pick = count++;
    if (pick % 2 == 0) return words[0];
    return words[1 + (pick / 2) % (words.size() - 1)];
  };
  auto draw_register = [&rng](bool positive) {
    const auto& words = positive ? synth::pos_registers() : synth::neg_registers();
    return words[rng.below(words.size())];
  };

  auto render_single = [&](int aspect, const std::string& noun, synth::Line& out) {
    bool positive = draw_polarity();
    const auto& vocab = aspects[static_cast<std::size_t>(aspect)];
    out = synth::single_template(static_cast<int>(rng.below(14)), noun,
                                 draw_adjective(aspect, positive), draw_register(positive),
                                 vocab.venue, vocab.verb);
    out.aspect = aspect;
    out.positive = positive;
  };
  // mixes borrow the context aspect's venue, verb, and adjective counter so a
  // cross mix reads like a sentence of the aspect whose seed word it carries
  auto render_mixed = [&](int context_aspect, const std::string& n1, const std::string& n2) {
    bool positive = draw_polarity();
    const auto& vocab = aspects[static_cast<std::size_t>(context_aspect)];
    return synth::mixed_template(static_cast<int>(rng.below(5)), n1, n2,
                                 draw_adjective(context_aspect, positive),
                                 draw_register(positive), vocab.venue, vocab.verb);
  };

  SyntheticDataset data;

  // --- unlabeled splits; per 100 bank (40 in-domain) sentences of an aspect:
  //     seed-only, hidden-only, seed+hidden, and next-aspect-seed+hidden mixes
  auto emit_unlabeled = [&](std::vector<std::string>& out, int per_aspect, int seed_only,
                            int hidden_only, int within_mix, int cross_mix) {
    std::vector<std::string> lines;
    for (int a = 0; a < num_aspects; ++a) {
      const auto& vocab = aspects[static_cast<std::size_t>(a)];
      const auto& partner = aspects[static_cast<std::size_t>((a + 1) % num_aspects)];
      int emitted = 0;
      synth::Line line;
      for (int i = 0; i < seed_only; ++i, ++emitted) {
        render_single(a, vocab.seed, line);
        lines.push_back(join(line.tokens, " "));
      }
      for (int i = 0; i < hidden_only; ++i, ++emitted) {
        const auto& noun = vocab.hidden[static_cast<std::size_t>(i) % vocab.hidden.size()];
        render_single(a, noun, line);
        lines.push_back(join(line.tokens, " "));
      }
      for (int i = 0; i < within_mix; ++i, ++emitted) {
        const auto& noun = vocab.hidden[static_cast<std::size_t>(i) % vocab.hidden.size()];
        bool seed_first = rng.below(2) == 0;
        auto tokens =
            render_mixed(a, seed_first ? vocab.seed : noun, seed_first ? noun : vocab.seed);
        lines.push_back(join(tokens, " "));
      }
      for (int i = 0; i < cross_mix; ++i, ++emitted) {
        const auto& noun = vocab.hidden[static_cast<std::size_t>(i) % vocab.hidden.size()];
        auto tokens = render_mixed((a + 1) % num_aspects, partner.seed, noun);
        lines.push_back(join(tokens, " "));
      }
      if (emitted != per_aspect) {
        throw Error(ErrorCode::InvalidArgument, "synthetic: sentence quota mismatch");
      }
    }
    rng.shuffle(lines);
    out = std::move(lines);
  };

  int bank_block = spec.bank_sentences / (num_aspects * 20);  // per aspect: 20 * block
  emit_unlabeled(data.bank, bank_block * 20, bank_block * 6, bank_block * 10, bank_block * 3,
                 bank_block * 1);
  int dom_block = spec.in_domain_sentences / (num_aspects * 8);  // per aspect: 8 * block
  emit_unlabeled(data.in_domain, dom_block * 8, dom_block * 2, dom_block * 3, dom_block * 2,
                 dom_block * 1);

  // --- labeled test split: single-noun sentences only, gold span = the noun
  {
    std::vector<std::string> lines;
    int per_aspect = spec.test_sentences / num_aspects;
    int seed_only = per_aspect * 7 / 20;  // rest use hidden nouns
    for (int a = 0; a < num_aspects; ++a) {
      const auto& vocab = aspects[static_cast<std::size_t>(a)];
      synth::Line line;
      for (int i = 0; i < per_aspect; ++i) {
        const std::string& noun =
            i < seed_only
                ? vocab.seed
                : vocab.hidden[static_cast<std::size_t>(i - seed_only) % vocab.hidden.size()];
        render_single(a, noun, line);
        std::string row = join(line.tokens, " ");
        row += '\t';
        row += vocab.name;
        row += '\t';
        row += std::to_string(line.noun_pos) + ":" + std::to_string(line.noun_pos + 1) + ":" +
               (line.positive ? "POS" : "NEG");
        lines.push_back(std::move(row));
      }
    }
    rng.shuffle(lines);
    data.test_lines = std::move(lines);
  }

  // --- seed lexicon: one noun per aspect, one adjective per polarity
  {
    std::string out = "[aspects]\n";
    for (const auto& vocab : aspects) out += vocab.name + " = " + vocab.seed + "\n";
    out += "[polarities]\n";
    out += "POS = " + synth::pos_adjectives()[0] + "\n";
    out += "NEG = " + synth::neg_adjectives()[0] + "\n";
    data.seeds_text = std::move(out);
  }

  // --- tag lexicon: aspect nouns are the only NOUNs, adjectives the only ADJs
  {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& vocab : aspects) {
      rows.emplace_back(vocab.seed, "NOUN");
      for (const auto& noun : vocab.hidden) rows.emplace_back(noun, "NOUN");
    }
    for (const auto& w : synth::pos_adjectives()) rows.emplace_back(w, "ADJ");
    for (const auto& w : synth::neg_adjectives()) rows.emplace_back(w, "ADJ");
    for (const auto& w : synth::pos_registers()) rows.emplace_back(w, "VERB");
    for (const auto& w : synth::neg_registers()) rows.emplace_back(w, "VERB");
    for (const auto& vocab : aspects) {
      rows.emplace_back(vocab.verb, "VERB");
      rows.emplace_back(vocab.venue, "OTHER");  // outside the noun lexicon on purpose
    }
    for (const char* w : {"was", "were", "seemed", "thought", "found"}) {
      rows.emplace_back(w, "VERB");
    }
    for (const char* w : {"the", "a", "and", "we", "it", "very", "really", "quite", "tonight",
                          "again", "honestly", "overall", "because", "both", "with", "at", "in",
                          "from", "near"}) {
      rows.emplace_back(w, "OTHER");
    }
    std::string out;
    for (const auto& [word, tag] : rows) out += word + "\t" + tag + "\n";
    data.pos_lexicon_text = std::move(out);
  }

  // --- pipeline config tuned to this corpus size
  data.config_text =
      "[data]\n"
      "seeds = seeds.txt\n"
      "bank = bank.txt\n"
      "in_domain = in_domain.txt\n"
      "test = test.tsv\n"
      "pos_lexicon = pos_lexicon.tsv\n"
      "\n"
      "[embedding]\n"
      "dim = 48\n"
      "epochs = 60\n"
      "window = 5\n"
      "negatives = 5\n"
      "min_count = 2\n"
      "learning_rate = 0.05\n"
      "\n"
      "[pseudolabel]\n"
      "gamma = 20\n"
      "min_noun_count = 2\n"
      "atp_window = 10\n"
      "\n"
      "[sec]\n"
      "enabled = true\n"
      "\n"
      "[retrieval]\n"
      "k = 10\n"
      "\n"
      "[classifier]\n"
      "epochs = 12\n"
      "hidden_dim = 48\n"
      "learning_rate = 0.005\n"
      "\n"
      "[pipeline]\n"
      "output_dir = out\n"
      "seed = 1\n";

  return data;
}

// writes the generated corpus files plus a ready-to-run config into `dir`
inline std::vector<std::string> write_synthetic_dataset(const std::string& dir,
                                                        const SyntheticSpec& spec) {
  SyntheticDataset data = generate_synthetic(spec);
  auto lines_file = [](const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& line : lines) {
      out += line;
      out += '\n';
    }
    return out;
  };
  std::vector<std::pair<std::string, std::string>> files = {
      {"bank.txt", lines_file(data.bank)},
      {"in_domain.txt", lines_file(data.in_domain)},
      {"test.tsv", lines_file(data.test_lines)},
      {"seeds.txt", data.seeds_text},
      {"pos_lexicon.tsv", data.pos_lexicon_text},
      {"config.ini", data.config_text},
  };
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& [name, content] : files) {
    std::string path = dir.empty() ? name : dir + "/" + name;
    write_file(path, content);
    written.push_back(path);
  }
  return written;
}

}  // namespace aspectseed
