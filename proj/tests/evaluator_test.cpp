#include <gtest/gtest.h>

#include "ctxsearch/error.h"
#include "ctxsearch/evaluator.h"
#include "support/fixtures.h"
#include "support/generators.h"
#include "support/oracle.h"

using namespace ctxsearch;

namespace {

const Ontology& ontology() {
  static const Ontology o = test::plantsOntology();
  return o;
}

const Index& indexFor(DecompositionMode mode) {
  static const Corpus corpus = test::plantsCorpus(ontology());
  static const Index contexts = test::buildIndex(corpus, ontology(), DecompositionMode::Contexts);
  static const Index sentences = test::buildIndex(corpus, ontology(), DecompositionMode::Sentences);
  static const Index sections = test::buildIndex(corpus, ontology(), DecompositionMode::Sections);
  switch (mode) {
    case DecompositionMode::Contexts: return contexts;
    case DecompositionMode::Sentences: return sentences;
    default: return sections;
  }
}

std::vector<std::string> names(const ResultSet& r) {
  std::vector<std::string> out;
  for (const auto& g : r.groups) out.push_back(ontology().entityName(g.entity));
  return out;
}

std::vector<std::string> run(std::string_view q, DecompositionMode mode = DecompositionMode::Contexts,
                             const EvalConfig& config = {}) {
  return names(evaluate(parseAndResolve(q, ontology()), indexFor(mode), ontology(), config));
}

}  // namespace

TEST(Evaluator, FigureOneContextsVersusSentences) {
  EXPECT_EQ(run(test::kFig1Query), std::vector<std::string>{"Broccoli"});
  auto sentences = run(test::kFig1Query, DecompositionMode::Sentences);
  std::sort(sentences.begin(), sentences.end());
  EXPECT_EQ(sentences, (std::vector<std::string>{"Broccoli", "Rhubarb"}));
}

TEST(Evaluator, BareNodes) {
  EXPECT_EQ(run("entity:Broccoli"), std::vector<std::string>{"Broccoli"});
  EXPECT_EQ(run("class:Continent"), (std::vector<std::string>{"Asia", "Europe"}));
}

TEST(Evaluator, OntologyArcsBothDirections) {
  EXPECT_EQ(run("class:Plant (native-to entity:Persia)"), std::vector<std::string>{"Spinach"});
  auto r = run("class:Location (native-to^-1 entity:Rhubarb)");
  EXPECT_EQ(r, std::vector<std::string>{"Europe"});
  EXPECT_EQ(run("class:Plant (cultivated-in class:Country (located-in entity:Asia))"),
            std::vector<std::string>{"Spinach"});
}

TEST(Evaluator, OccursWithSubqueryOnly) {
  EXPECT_EQ(run("class:Vegetable (occurs-with entity:Persia)"), std::vector<std::string>{"Spinach"});
}

TEST(Evaluator, RankingByWitnessScore) {
  auto r = evaluate(parseAndResolve("class:Vegetable (occurs-with edible)", ontology()),
                    indexFor(DecompositionMode::Contexts), ontology());
  ASSERT_EQ(r.total, 3u);
  for (std::size_t i = 1; i < r.groups.size(); ++i) {
    const auto& a = r.groups[i - 1];
    const auto& b = r.groups[i];
    EXPECT_TRUE(a.score > b.score || (a.score == b.score && a.entity < b.entity));
  }
  for (const auto& g : r.groups) {
    EXPECT_GE(g.score, 1u);
    ASSERT_FALSE(g.evidence.empty());
    EXPECT_EQ(g.evidence.front().kind, Evidence::Kind::Context);
  }
}

TEST(Evaluator, FactEvidence) {
  auto r = evaluate(parseAndResolve("class:Plant (native-to entity:Europe)", ontology()),
                    indexFor(DecompositionMode::Contexts), ontology());
  ASSERT_EQ(r.total, 2u);
  for (const auto& g : r.groups) {
    ASSERT_EQ(g.evidence.size(), 1u);
    EXPECT_EQ(g.evidence[0].kind, Evidence::Kind::Fact);
    EXPECT_EQ(g.evidence[0].object, *ontology().findEntity("Europe"));
  }
}

TEST(Evaluator, FavoriteFirstIsOffByDefault) {
  EvalConfig legacy;
  legacy.favoriteFirst = true;
  legacy.favoriteEntity = "Spinach";
  auto plain = run("class:Vegetable (occurs-with edible)");
  auto forced = run("class:Vegetable (occurs-with edible)", DecompositionMode::Contexts, legacy);
  EXPECT_EQ(forced.front(), "Spinach");
  auto a = plain, b = forced;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
}

TEST(Evaluator, TooBroadQueriesAbort) {
  EvalConfig tight;
  tight.maxIntermediatePostings = 2;
  EXPECT_THROW(run("class:Plant (occurs-with e*)", DecompositionMode::Contexts, tight), QueryTooBroad);
}

TEST(Evaluator, UnknownWordGivesEmptyResult) {
  EXPECT_TRUE(run("class:Plant (occurs-with zebra)").empty());
}

// Property: coarser decompositions never lose co-occurrences.
TEST(EvaluatorProperty, CoarserModesContainFinerResults) {
  for (const char* q : {test::kFig1Query.data(), "class:Vegetable (occurs-with edible)",
                        "class:Entity (occurs-with leaves)", "class:Plant (occurs-with p*)"}) {
    auto a = run(q, DecompositionMode::Contexts);
    auto b = run(q, DecompositionMode::Sentences);
    auto c = run(q, DecompositionMode::Sections);
    for (const auto& e : a) EXPECT_NE(std::find(b.begin(), b.end(), e), b.end()) << q;
    for (const auto& e : b) EXPECT_NE(std::find(c.begin(), c.end(), e), c.end()) << q;
  }
}

// Property: evaluate agrees with the naive scan on random small worlds.
TEST(EvaluatorProperty, MatchesNaiveScan) {
  test::Rng rng(21);
  for (int round = 0; round < 300; ++round) {
    auto world = test::randomWorld(rng);
    auto index = Index::build(world.contexts, world.ontology,
                              IndexConfig{1 + static_cast<std::size_t>(rng() % 4)});
    for (int q = 0; q < 3; ++q) {
      auto query = test::randomQuery(rng, world);
      auto got = evaluate(query, index, world.ontology).entities();
      auto want = test::naiveEvaluate(query.root, world.contexts, world.ontology);
      ASSERT_EQ(std::set<EntityId>(got.begin(), got.end()), want) << toString(query);
    }
  }
}
