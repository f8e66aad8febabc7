#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "aspectseed/pseudolabel.hpp"
#include "aspectseed/sec.hpp"
#include "fixtures.hpp"

using namespace aspectseed;
using fixtures::tagged;

namespace {

AspectLexicon two_aspect_lexicon() {
  SeedLexicon lex;
  lex.aspects = {{"FOOD", {"pasta"}, {}}, {"SERVICE", {"staff"}, {}}};
  lex.polarities = {{"POS", {"good"}, {}}, {"NEG", {"bad"}, {}}};
  return AspectLexicon(lex);
}

}  // namespace

TEST_CASE("default stopword list covers function words only") {
  Stopwords sw;
  CHECK(sw.contains("the"));
  CHECK(sw.contains("and"));
  CHECK(sw.contains("t"));
  CHECK_FALSE(sw.contains("pizza"));
  CHECK_FALSE(sw.contains("rude"));
  CHECK(sw.size() == Stopwords::default_words().size());
}

TEST_CASE("stopwords load from file with comments") {
  std::string path = "/tmp/aspectseed_stopwords_test.txt";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs("# custom list\nfoo\n  bar  \n\nbaz\n", f);
    std::fclose(f);
  }
  Stopwords sw = Stopwords::from_file(path);
  CHECK(sw.size() == 3);
  CHECK(sw.contains("foo"));
  CHECK(sw.contains("bar"));
  CHECK(sw.contains("baz"));
  CHECK_FALSE(sw.contains("the"));
}

TEST_CASE("boundary keywords need two distinct label aspects") {
  auto lexicon = two_aspect_lexicon();
  Stopwords sw;
  std::vector<TaggedSentence> sentences = {
      tagged(0, {{"pasta", Pos::Noun}, {"bread", Pos::Noun}, {"warm", Pos::Adj}}),
      tagged(1, {{"staff", Pos::Noun}, {"bread", Pos::Noun}}),
      tagged(2, {{"the", Pos::Noun}, {"staff", Pos::Noun}, {"runs", Pos::Verb}}),
  };
  std::vector<int> labels = {0, 1, 1};
  KeywordSet tb = boundary_keywords(sentences, labels, lexicon, sw);

  CHECK(tb.kind == KeywordKind::Boundary);
  // bread: aspect 0 once, aspect 1 once. warm only under 0; "the" is a
  // stopword even when mistagged; seeds and the verb never qualify.
  REQUIRE(tb.size() == 1);
  REQUIRE(tb.contains("bread"));
  CHECK(tb.words.at("bread") == std::map<int, int>{{0, 1}, {1, 1}});

  CHECK_THROWS_AS(boundary_keywords(sentences, {0, 1}, lexicon, sw), Error);
}

TEST_CASE("keyword occurrences count each sentence once") {
  auto lexicon = two_aspect_lexicon();
  Stopwords sw;
  std::vector<TaggedSentence> sentences = {
      tagged(0, {{"bread", Pos::Noun}, {"bread", Pos::Noun}, {"bread", Pos::Noun}}),
      tagged(1, {{"bread", Pos::Noun}}),
  };
  KeywordSet tb = boundary_keywords(sentences, {0, 1}, lexicon, sw);
  REQUIRE(tb.contains("bread"));
  CHECK(tb.words.at("bread") == std::map<int, int>{{0, 1}, {1, 1}});
}

TEST_CASE("boundary keywords match a brute-force recount") {
  auto lexicon = two_aspect_lexicon();
  Stopwords sw;
  const std::vector<std::pair<std::string, Pos>> vocab = {
      {"bread", Pos::Noun},  {"soup", Pos::Noun},   {"table", Pos::Noun},
      {"menu", Pos::Noun},   {"warm", Pos::Adj},    {"slow", Pos::Adj},
      {"fresh", Pos::Adj},   {"pasta", Pos::Noun},  {"staff", Pos::Noun},
      {"the", Pos::Other},   {"eats", Pos::Verb},   {"very", Pos::Other},
  };
  Rng rng(2024);
  std::vector<TaggedSentence> sentences;
  std::vector<int> labels;
  for (int i = 0; i < 50; ++i) {
    TaggedSentence s;
    s.id = i;
    int len = 3 + rng.below_int(4);
    for (int j = 0; j < len; ++j) {
      const auto& [w, pos] = vocab[static_cast<std::size_t>(rng.below_int(
          static_cast<int>(vocab.size())))];
      s.tokens.push_back({w, pos});
    }
    sentences.push_back(std::move(s));
    labels.push_back(rng.below_int(2));
  }

  // independent recount: per word, the set of labels of sentences where it
  // occurs as a noun or adjective
  std::map<std::string, std::set<int>> seen;
  std::map<std::string, std::map<int, int>> counts;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    std::set<std::string> words;
    for (const auto& tok : sentences[i].tokens) {
      if (tok.pos != Pos::Noun && tok.pos != Pos::Adj) continue;
      if (tok.surface == "pasta" || tok.surface == "staff") continue;
      if (sw.contains(tok.surface)) continue;
      words.insert(tok.surface);
    }
    for (const auto& w : words) {
      seen[w].insert(labels[i]);
      ++counts[w][labels[i]];
    }
  }
  std::map<std::string, std::map<int, int>> expected;
  for (const auto& [w, aspects] : seen) {
    if (aspects.size() >= 2) expected[w] = counts[w];
  }

  KeywordSet tb = boundary_keywords(sentences, labels, lexicon, sw);
  CHECK(tb.words == expected);
  CHECK(expected.size() >= 3);  // the fixture actually exercises the rule
}

TEST_CASE("uncertain keywords keep every keyword of the uncertain set") {
  auto lexicon = two_aspect_lexicon();
  Stopwords sw;
  std::vector<TaggedSentence> uncertain = {
      tagged(3, {{"menu", Pos::Noun}, {"slow", Pos::Adj}, {"was", Pos::Verb}}),
      tagged(7, {{"menu", Pos::Noun}, {"pasta", Pos::Noun}, {"the", Pos::Other}}),
  };
  KeywordSet tu = uncertain_keywords(uncertain, {0, 1}, lexicon, sw);
  CHECK(tu.kind == KeywordKind::Uncertain);
  REQUIRE(tu.word_list() == std::vector<std::string>{"menu", "slow"});
  CHECK(tu.words.at("menu") == std::map<int, int>{{0, 1}, {1, 1}});
  CHECK(tu.words.at("slow") == std::map<int, int>{{0, 1}});
}

TEST_CASE("keyword intersection keeps shared words and merges counts") {
  KeywordSet a;
  a.kind = KeywordKind::Boundary;
  a.words = {{"bread", {{0, 2}, {1, 1}}}, {"music", {{0, 1}, {1, 1}}}};
  KeywordSet b;
  b.kind = KeywordKind::Uncertain;
  b.words = {{"bread", {{1, 3}}}, {"slow", {{0, 1}}}};

  KeywordSet t = intersect_keywords(a, b);
  CHECK(t.kind == KeywordKind::Intersection);
  REQUIRE(t.word_list() == std::vector<std::string>{"bread"});
  CHECK(t.words.at("bread") == std::map<int, int>{{0, 2}, {1, 4}});
}

// Two aspect documents built by hand:
//   doc0 = "pizza cheese pizza" + "cheese bread music" + "pizza bread"
//   doc1 = "waiter music" + "waiter rude music" + "rude tips"
// Reference t and clarity values were computed independently from raw
// counts, IDF = log(K/df), and l1 normalization.
TEST_CASE("clarity table matches an independent hand computation") {
  std::vector<TaggedSentence> sentences = {
      tagged(0, {{"pizza", Pos::Noun}, {"cheese", Pos::Noun}, {"pizza", Pos::Noun}}),
      tagged(1, {{"cheese", Pos::Noun}, {"bread", Pos::Noun}, {"music", Pos::Noun}}),
      tagged(2, {{"pizza", Pos::Noun}, {"bread", Pos::Noun}}),
      tagged(3, {{"waiter", Pos::Noun}, {"music", Pos::Noun}}),
      tagged(4, {{"waiter", Pos::Noun}, {"rude", Pos::Adj}, {"music", Pos::Noun}}),
      tagged(5, {{"rude", Pos::Adj}, {"tips", Pos::Noun}}),
  };
  std::vector<int> labels = {0, 0, 0, 1, 1, 1};
  ClarityTable table(sentences, labels, 2);
  CHECK(table.num_aspects() == 2);
  CHECK(table.epsilon() == 1e-9);

  const double tol = 1e-9;
  CHECK_THAT(table.t("pizza", 0), Catch::Matchers::WithinAbs(0.42857142857142855, tol));
  CHECK_THAT(table.t("cheese", 0), Catch::Matchers::WithinAbs(0.2857142857142857, tol));
  CHECK_THAT(table.t("bread", 0), Catch::Matchers::WithinAbs(0.2857142857142857, tol));
  CHECK(table.t("music", 0) == 0.0);  // present in both documents, IDF = 0
  CHECK(table.t("waiter", 0) == 0.0);
  CHECK_THAT(table.t("waiter", 1), Catch::Matchers::WithinAbs(0.39999999999999997, tol));
  CHECK_THAT(table.t("rude", 1), Catch::Matchers::WithinAbs(0.39999999999999997, tol));
  CHECK_THAT(table.t("tips", 1), Catch::Matchers::WithinAbs(0.19999999999999998, tol));
  CHECK(table.t("music", 1) == 0.0);

  CHECK_THAT(table.clarity("pizza", 0, 1), Catch::Matchers::WithinAbs(8.518272010829914, tol));
  CHECK_THAT(table.clarity("cheese", 0, 1), Catch::Matchers::WithinAbs(5.563000840027945, tol));
  CHECK_THAT(table.clarity("waiter", 1, 0), Catch::Matchers::WithinAbs(7.922790062835878, tol));
  CHECK_THAT(table.clarity("tips", 1, 0), Catch::Matchers::WithinAbs(3.82276560501629, tol));
  CHECK_THAT(table.clarity("pizza", 1, 0),
             Catch::Matchers::WithinAbs(-1.987596797889254e-08, 1e-15));

  // equal t on both sides gives exactly zero
  CHECK(table.clarity("music", 0, 1) == 0.0);
  CHECK(table.clarity("unseen", 0, 1) == 0.0);

  // a word absent from the first document scores strictly below every word
  // present in it
  double max_absent = std::max({table.clarity("waiter", 0, 1), table.clarity("rude", 0, 1),
                                table.clarity("tips", 0, 1)});
  double min_present = std::min({table.clarity("pizza", 0, 1), table.clarity("cheese", 0, 1),
                                 table.clarity("bread", 0, 1), table.clarity("music", 0, 1)});
  CHECK(max_absent < 0.0);
  CHECK(max_absent < min_present);

  CHECK_THROWS_AS(table.clarity("pizza", 0, 2), Error);
  CHECK_THROWS_AS(table.clarity("pizza", -1, 1), Error);
  CHECK_THROWS_AS(table.aggregate("pizza", 2), Error);
  CHECK_THROWS_AS(ClarityTable(sentences, {0, 0, 0, 1, 1}, 2), Error);
  CHECK_THROWS_AS(ClarityTable(sentences, labels, 1), Error);
  CHECK_THROWS_AS(ClarityTable(sentences, labels, 2, 0.0), Error);
  CHECK_THROWS_AS(ClarityTable(sentences, {0, 0, 0, 1, 1, 2}, 2), Error);
}

TEST_CASE("auto map assigns the best aggregate and drops non-positive words") {
  std::vector<TaggedSentence> sentences = {
      tagged(0, {{"pizza", Pos::Noun}, {"cheese", Pos::Noun}, {"pizza", Pos::Noun}}),
      tagged(1, {{"cheese", Pos::Noun}, {"bread", Pos::Noun}, {"music", Pos::Noun}}),
      tagged(2, {{"pizza", Pos::Noun}, {"bread", Pos::Noun}}),
      tagged(3, {{"waiter", Pos::Noun}, {"music", Pos::Noun}}),
      tagged(4, {{"waiter", Pos::Noun}, {"rude", Pos::Adj}, {"music", Pos::Noun}}),
      tagged(5, {{"rude", Pos::Adj}, {"tips", Pos::Noun}}),
  };
  ClarityTable table(sentences, {0, 0, 0, 1, 1, 1}, 2);

  KeywordSet t;
  t.kind = KeywordKind::Intersection;
  t.words = {{"pizza", {{0, 1}}}, {"rude", {{1, 1}}}, {"music", {{0, 1}, {1, 1}}}};

  auto mapped = auto_map(t, table);
  // music has t = 0 in both documents, so both aggregates are 0 -> dropped
  CHECK(mapped == std::map<std::string, int>{{"pizza", 0}, {"rude", 1}});
}

TEST_CASE("seed enhancement reproduces the planted trace") {
  auto fx = fixtures::make_planted_sec();
  SecResult r = enhance_seed_words(fx.corpus, fx.lexicon, fx.table, fx.gamma);

  CHECK(r.temp_labels == std::vector<int>{0, 1, 2, 2, 0, 2, 0, 1, 0, 2});
  // every score is integer arithmetic over doubles, so exact comparison holds
  CHECK(r.connections ==
        std::vector<double>{136, 72, 72, 160, 0, 104, 72, 72, 0, 8});
  CHECK(r.uncertain_indices == std::vector<int>{4, 8, 9});

  CHECK(r.boundary.word_list() == std::vector<std::string>{"martinis", "music"});
  CHECK(r.boundary.words.at("martinis") == std::map<int, int>{{0, 1}, {2, 3}});
  CHECK(r.boundary.words.at("music") == std::map<int, int>{{0, 1}, {1, 1}});

  CHECK(r.uncertain.word_list() ==
        std::vector<std::string>{"day", "fancy", "martinis", "nice"});
  CHECK(r.uncertain.words.at("martinis") == std::map<int, int>{{0, 1}, {2, 1}});

  CHECK(r.intersection.word_list() == std::vector<std::string>{"martinis"});
  CHECK(r.intersection.words.at("martinis") == std::map<int, int>{{0, 2}, {2, 4}});

  CHECK(r.additions == std::map<std::string, int>{{"martinis", 2}});

  // clarity internals, frozen from an independent computation
  ClarityTable table(fx.corpus, r.temp_labels, 3);
  const double tol = 1e-9;
  CHECK_THAT(table.t("martinis", 0), Catch::Matchers::WithinAbs(0.04552370208413546, tol));
  CHECK(table.t("martinis", 1) == 0.0);
  CHECK_THAT(table.t("martinis", 2), Catch::Matchers::WithinAbs(0.1365711062524064, tol));
  CHECK_THAT(table.aggregate("martinis", 0),
             Catch::Matchers::WithinAbs(0.7527404132738554, tol));
  CHECK_THAT(table.aggregate("martinis", 2),
             Catch::Matchers::WithinAbs(2.708337290864816, tol));
  CHECK(table.aggregate("martinis", 1) < 0.0);
}

TEST_CASE("gamma zero yields no uncertain sentences and no additions") {
  auto fx = fixtures::make_planted_sec();
  SecResult r = enhance_seed_words(fx.corpus, fx.lexicon, fx.table, 0.0);
  CHECK(r.uncertain_indices.empty());
  CHECK(r.uncertain.size() == 0);
  CHECK(r.intersection.size() == 0);
  CHECK(r.additions.empty());
  // boundary keywords do not depend on gamma
  CHECK(r.boundary.word_list() == std::vector<std::string>{"martinis", "music"});
}

TEST_CASE("no boundary keywords means no additions") {
  auto fx = fixtures::make_planted_sec();
  // first four sentences: every keyword occurs under a single label aspect
  std::vector<TaggedSentence> corpus(fx.corpus.begin(), fx.corpus.begin() + 4);
  SecResult r = enhance_seed_words(corpus, fx.lexicon, fx.table, fx.gamma);
  CHECK(r.boundary.size() == 0);
  CHECK(r.intersection.size() == 0);
  CHECK(r.additions.empty());
}

TEST_CASE("enhancement rejects bad inputs") {
  auto fx = fixtures::make_planted_sec();
  CHECK_THROWS_AS(enhance_seed_words({}, fx.lexicon, fx.table, 1.0), Error);
  CHECK_THROWS_AS(enhance_seed_words(fx.corpus, fx.lexicon, fx.table, -0.5), Error);
}

TEST_CASE("enhancement invariants hold on the planted fixture") {
  auto fx = fixtures::make_planted_sec();
  SecResult r = enhance_seed_words(fx.corpus, fx.lexicon, fx.table, fx.gamma);

  for (const auto& [word, aspect] : r.additions) {
    CHECK(r.boundary.contains(word));
    CHECK(r.uncertain.contains(word));
    CHECK_FALSE(fx.lexicon.is_initial_seed(word));
    CHECK(aspect >= 0);
    CHECK(aspect < fx.lexicon.num_aspects());
  }
  for (const auto& [word, _] : r.intersection.words) {
    CHECK(r.boundary.contains(word));
    CHECK(r.uncertain.contains(word));
  }

  SecResult again = enhance_seed_words(fx.corpus, fx.lexicon, fx.table, fx.gamma);
  CHECK(again.temp_labels == r.temp_labels);
  CHECK(again.connections == r.connections);
  CHECK(again.additions == r.additions);
}

TEST_CASE("added seeds do not reduce the certain sentence count") {
  auto fx = fixtures::make_planted_sec();
  SecResult r = enhance_seed_words(fx.corpus, fx.lexicon, fx.table, fx.gamma);

  auto count_certain = [&](const AspectLexicon& lexicon) {
    int certain = 0;
    for (const auto& s : fx.corpus) {
      if (connection(similarity(s, lexicon, fx.table)) >= fx.gamma) ++certain;
    }
    return certain;
  };
  int before = count_certain(fx.lexicon);
  AspectLexicon enhanced = fx.lexicon.with_additions(r.additions);
  int after = count_certain(enhanced);
  CHECK(before == 7);
  // "martinis fancy" now overlaps the DRINKS seeds and becomes certain
  CHECK(after == 8);
  CHECK(after >= before);
}

TEST_CASE("enhanced lexicon survives a serialization round trip") {
  auto fx = fixtures::make_planted_sec();
  SecResult r = enhance_seed_words(fx.corpus, fx.lexicon, fx.table, fx.gamma);
  AspectLexicon enhanced = fx.lexicon.with_additions(r.additions);

  std::string text = serialize_seed_lexicon(enhanced.to_seed_lexicon());
  AspectLexicon reloaded(parse_seed_lexicon(text));

  REQUIRE(reloaded.num_aspects() == 3);
  CHECK(reloaded.aspect(2).name == "DRINKS");
  CHECK(reloaded.aspect(2).initial == std::vector<std::string>{"beer"});
  CHECK(reloaded.aspect(2).additional == std::vector<std::string>{"martinis"});
  CHECK(reloaded.aspect(2).all == std::vector<std::string>{"beer", "martinis"});
  CHECK(reloaded.aspect(0).additional.empty());
  // initial-only view drops the derived words again
  CHECK(reloaded.initial_only().aspect(2).all == std::vector<std::string>{"beer"});
}
