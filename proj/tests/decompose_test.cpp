#include <gtest/gtest.h>

#include <algorithm>

#include "ctxsearch/decompose.h"
#include "support/fixtures.h"

using namespace ctxsearch;

namespace {

const Ontology& ontology() {
  static const Ontology o = test::plantsOntology();
  return o;
}

std::vector<std::vector<std::string>> surface(const std::vector<Context>& contexts) {
  std::vector<std::vector<std::string>> out;
  for (const auto& c : contexts) out.push_back(test::surfaceTokens(c));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Decompose, RhubarbSentenceGivesFourContexts) {
  auto corpus = test::rhubarbCorpus(ontology());
  auto contexts = decompose(corpus.documents[0], ontology(), DecompositionMode::Contexts);
  std::vector<std::vector<std::string>> expected{
      test::words("rhubarb, a plant from the Polygonaceae family"),
      test::words("The usable parts of rhubarb are the medicinally used roots"),
      test::words("The usable parts of rhubarb are the edible stalks"),
      test::words("however its leaves are toxic")};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(surface(contexts), expected);
}

TEST(Decompose, ItemsUseEntitiesAndContextPositions) {
  auto corpus = test::rhubarbCorpus(ontology());
  auto contexts = decompose(corpus.documents[0], ontology(), DecompositionMode::Contexts);
  auto rhubarb = *ontology().findEntity("Rhubarb");
  for (const auto& c : contexts) {
    ASSERT_FALSE(c.items.empty());
    for (std::size_t i = 1; i < c.items.size(); ++i) {
      EXPECT_LT(c.items[i - 1].position, c.items[i].position);
    }
    // every context mentions rhubarb, directly or through "its"
    EXPECT_TRUE(std::any_of(c.items.begin(), c.items.end(), [&](const ContextItem& it) {
      return it.isEntity() && it.entity() == rhubarb;
    }));
  }
}

TEST(Decompose, SentenceAndSectionModes) {
  auto corpus = test::plantsCorpus(ontology());
  const auto& broccoli = corpus.documents[1];
  EXPECT_EQ(decompose(broccoli, ontology(), DecompositionMode::Sentences).size(), 2u);
  auto sections = decompose(broccoli, ontology(), DecompositionMode::Sections);
  ASSERT_EQ(sections.size(), 1u);
  EXPECT_EQ(test::surfaceTokens(sections[0]),
            test::words("Broccoli is a plant in the cabbage family. Its leaves are edible."));
}

TEST(Decompose, CorpusIdsAreDense) {
  auto corpus = test::plantsCorpus(ontology());
  for (auto mode : {DecompositionMode::Contexts, DecompositionMode::Sentences, DecompositionMode::Sections}) {
    auto contexts = decomposeCorpus(corpus, ontology(), mode);
    for (std::size_t i = 0; i < contexts.size(); ++i) {
      EXPECT_EQ(contexts[i].id, i);
      EXPECT_LT(contexts[i].docIndex, corpus.documents.size());
    }
  }
}

TEST(Decompose, BrokenParseFallsBackToWholeSentence) {
  auto corpus = parseCorpusString(
      R"js({"id":"x","title":"x","sections":[{"sentences":[{"text":"a b c","parse":"(S (NN a) (NN b)"},)js"
      R"js({"text":"d e","parse":"(S (NN d) (NN x))"}]}]})js" "\n",
      ontology());
  auto contexts = decompose(corpus.documents[0], ontology(), DecompositionMode::Contexts);
  ASSERT_EQ(contexts.size(), 2u);
  EXPECT_EQ(test::surfaceTokens(contexts[0]), test::words("a b c"));
  EXPECT_EQ(test::surfaceTokens(contexts[1]), test::words("d e"));
}

TEST(Decompose, ModeNames) {
  EXPECT_EQ(parseMode("sections"), DecompositionMode::Sections);
  EXPECT_EQ(modeName(DecompositionMode::Contexts), "contexts");
  EXPECT_ANY_THROW(parseMode("paragraphs"));
}

TEST(Decompose, MakeContextPositions) {
  auto c = makeContext(0, {"the", "usable", "parts", "of", "rhubarb", "are", "its", "edible", "stalks"},
                       {{{4, 4}, *ontology().findEntity("Rhubarb")}, {{8, 8}, *ontology().findEntity("Stalk")}});
  ASSERT_EQ(c.items.size(), 9u);
  EXPECT_EQ(c.items[7].position, 8u);
  EXPECT_EQ(c.items[7].word(), "edible");
  EXPECT_TRUE(c.items[8].isEntity());
}

// Property: on sentences whose parse is a single clause without
// enumerations or sub-clauses all three modes agree per sentence.
TEST(DecomposeProperty, SingleClauseSentencesAgreeAcrossModes) {
  auto corpus = parseCorpusString(
      R"js({"id":"x","title":"x","sections":[{"sentences":[)js"
      R"js({"text":"Broccoli grows","parse":"(S (NP (NNP Broccoli)) (VP (VBZ grows)))","links":[{"first_token":0,"last_token":0,"entity":"Broccoli"}]}]},)js"
      R"js({"sentences":[{"text":"Spinach wilts","parse":"(S (NP (NNP Spinach)) (VP (VBZ wilts)))","links":[{"first_token":0,"last_token":0,"entity":"Spinach"}]}]}]})js" "\n",
      ontology());
  auto a = decomposeCorpus(corpus, ontology(), DecompositionMode::Contexts);
  auto b = decomposeCorpus(corpus, ontology(), DecompositionMode::Sentences);
  auto c = decomposeCorpus(corpus, ontology(), DecompositionMode::Sections);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a[i].items, b[i].items);
    EXPECT_EQ(a[i].items, c[i].items);
  }
}
