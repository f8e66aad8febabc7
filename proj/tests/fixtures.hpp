#pragma once

// Hand-built fixtures shared between the unit tests and the acceptance
// checks. All numbers below are chosen so every similarity, connection, and
// clarity value can be verified by hand.

#include <string>
#include <vector>

#include "aspectseed/corpus.hpp"
#include "aspectseed/embedding.hpp"
#include "aspectseed/seeds.hpp"

namespace fixtures {

inline aspectseed::TaggedSentence tagged(int id,
                                         std::vector<std::pair<std::string, aspectseed::Pos>> toks) {
  aspectseed::TaggedSentence s;
  s.id = id;
  for (auto& [surface, pos] : toks) s.tokens.push_back({surface, pos});
  return s;
}

// Planted seed-enhancement scenario: three aspects (FOOD, SERVICE, DRINKS)
// with one initial seed each, integer-valued embeddings, and ten sentences.
//
// With gamma = 10, sentences 4, 8, 9 are uncertain. "martinis" appears under
// the FOOD label (sentence 4) and the DRINKS label (3, 5, 9), so it is a
// boundary keyword, and it occurs in uncertain sentences, so it survives the
// intersection; its TF-IDF mass concentrates in the DRINKS pseudo-document,
// mapping it there. "music" straddles FOOD/SERVICE but never occurs in an
// uncertain sentence, so it is filtered out by the intersection.
struct PlantedSec {
  aspectseed::AspectLexicon lexicon;
  aspectseed::EmbeddingTable table;
  std::vector<aspectseed::TaggedSentence> corpus;
  double gamma = 10.0;
};

inline PlantedSec make_planted_sec() {
  using aspectseed::Pos;
  PlantedSec fx;

  aspectseed::SeedLexicon lex;
  lex.aspects = {
      {"FOOD", {"pizza"}, {}},
      {"SERVICE", {"waiter"}, {}},
      {"DRINKS", {"beer"}, {}},
  };
  lex.polarities = {
      {"POS", {"good"}, {}},
      {"NEG", {"bad"}, {}},
  };
  fx.lexicon = aspectseed::AspectLexicon(lex);

  fx.table = aspectseed::EmbeddingTable(3);
  auto put = [&](const std::string& word, double x, double y, double z) {
    int idx = fx.table.add_word(word);
    double* v = fx.table.row(idx);
    v[0] = x;
    v[1] = y;
    v[2] = z;
  };
  put("pizza", 8, 0, 0);
  put("waiter", 0, 8, 0);
  put("beer", 0, 0, 8);
  put("martinis", 0, 0, 4);
  put("music", 1, 1, 0);
  put("great", 1, 0, 0);
  put("rude", 0, 1, 0);
  put("cold", 0, 0, 1);
  put("nice", 1, 1, 1);
  put("day", 1, 1, 1);
  put("fancy", 4, 4, 1);
  put("good", 1, 0, 0);
  put("bad", 0, 1, 0);

  fx.corpus = {
      tagged(0, {{"pizza", Pos::Noun}, {"pizza", Pos::Noun}, {"great", Pos::Adj}}),
      tagged(1, {{"waiter", Pos::Noun}, {"rude", Pos::Adj}}),
      tagged(2, {{"beer", Pos::Noun}, {"cold", Pos::Adj}}),
      tagged(3, {{"martinis", Pos::Noun}, {"beer", Pos::Noun}, {"beer", Pos::Noun}}),
      tagged(4, {{"martinis", Pos::Noun}, {"pizza", Pos::Noun}, {"waiter", Pos::Noun}}),
      tagged(5, {{"martinis", Pos::Noun}, {"cold", Pos::Adj}, {"beer", Pos::Noun}}),
      tagged(6, {{"music", Pos::Noun}, {"pizza", Pos::Noun}}),
      tagged(7, {{"music", Pos::Noun}, {"waiter", Pos::Noun}}),
      tagged(8, {{"nice", Pos::Adj}, {"day", Pos::Noun}}),
      tagged(9, {{"martinis", Pos::Noun}, {"fancy", Pos::Adj}}),
  };
  return fx;
}

}  // namespace fixtures
