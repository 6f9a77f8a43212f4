// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "ctxsearch/compare_modes.h"
#include "ctxsearch/decompose.h"
#include "ctxsearch/error.h"
#include "ctxsearch/evaluator.h"
#include "ctxsearch/metrics.h"
#include "ctxsearch/server.h"
#include "ctxsearch/service.h"
#include "httplib.h"
#include "support/fixtures.h"
#include "support/generators.h"
#include "support/oracle.h"
#include "support/soundness.h"

using namespace ctxsearch;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
void guarded(const std::string& name, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(false, name, std::string("exception: ") + e.what());
  }
}

void goldenDecomposition() {
  auto ontology = test::plantsOntology();
  auto start = Clock::now();
  auto corpus = test::rhubarbCorpus(ontology);
  auto contexts = decompose(corpus.documents.at(0), ontology, DecompositionMode::Contexts);
  double secs = secondsSince(start);
  std::vector<std::vector<std::string>> got, want{
      test::words("rhubarb, a plant from the Polygonaceae family"),
      test::words("The usable parts of rhubarb are the medicinally used roots"),
      test::words("The usable parts of rhubarb are the edible stalks"),
      test::words("however its leaves are toxic")};
  for (const auto& c : contexts) got.push_back(test::surfaceTokens(c));
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  std::ostringstream d;
  d << contexts.size() << " contexts, C1-C4 " << (got == want ? "match" : "differ") << ", " << secs << " s";
  report(got == want && secs < 1.0, "golden-decomposition", d.str());
}

void postingFixture() {
  auto ontology = test::plantsOntology();
  auto rhubarb = *ontology.findEntity("Rhubarb");
  auto stalk = *ontology.findEntity("Stalk");
  std::vector<Context> contexts{
      makeContext(0, {"the", "usable", "parts", "of", "rhubarb", "are", "its", "edible", "stalks"},
                  {{{4, 4}, rhubarb}, {{8, 8}, stalk}})};
  auto index = Index::build(contexts, ontology);
  const auto* block = index.block("edib");
  bool ok = block != nullptr;
  std::ostringstream d;
  if (ok) {
    std::vector<Posting> want{{0, *index.wordId("edible"), 1, 8}, {0, entityItem(rhubarb), 1, 5},
                              {0, entityItem(stalk), 1, 9}};
    ok = block->postings.postings() == want;
    for (const auto& p : block->postings.postings()) {
      d << "(" << (isEntityItem(p.itemId) ? "#" + ontology.entityName(itemEntity(p.itemId)) : "#" + index.word(p.itemId))
        << "," << p.score << "," << p.position << ") ";
    }
  } else {
    d << "no block 'edib'";
  }
  report(ok, "posting-fixture", d.str());
}

void semanticsAndIndexOracles() {
  test::Rng rng(20240601);
  const int instances = 1000;
  int evalAgree = 0, listChecks = 0, listAgree = 0;
  auto start = Clock::now();
  for (int i = 0; i < instances; ++i) {
    auto world = test::randomWorld(rng);
    auto index = Index::build(world.contexts, world.ontology,
                              IndexConfig{1 + static_cast<std::size_t>(rng() % 4)});
    auto query = test::randomQuery(rng, world);
    auto got = evaluate(query, index, world.ontology).entities();
    if (std::set<EntityId>(got.begin(), got.end()) ==
        test::naiveEvaluate(query.root, world.contexts, world.ontology)) {
      ++evalAgree;
    } else {
      std::cerr << "semantics mismatch: " << toString(query) << "\n";
    }

    // entities_in_contexts / filter_contexts_by_entities on fetched lists
    const auto& word = world.vocabulary[rng() % world.vocabulary.size()];
    std::vector<ContextList> lists{index.fetchWord(word), index.fetchPrefix(word.substr(0, 1)),
                                   index.entityOccurrences()};
    for (const auto& list : lists) {
      std::set<EntityId> chosen;
      for (std::uint32_t e = 0; e < world.ontology.numEntities(); ++e) {
        if (rng() % 3 == 0) chosen.insert(EntityId{e});
      }
      std::vector<EntityId> chosenVec(chosen.begin(), chosen.end());
      auto eic = entitiesInContexts(list, chosenVec);
      auto want = test::naiveEntitiesInContexts(list, chosen);
      bool ok = eic.size() == want.size();
      std::size_t k = 0;
      for (auto [e, s] : want) {
        if (!ok) break;
        ok = eic.ids[k] == e && eic.scores[k] == s;
        ++k;
      }
      ok = ok && filterContextsByEntities(list, EntityList::fromIds(chosenVec)).postings() ==
                     test::naiveFilterContextsByEntities(list, chosen);
      ++listChecks;
      listAgree += ok;
    }
  }
  double secs = secondsSince(start);
  std::ostringstream d;
  d << evalAgree << "/" << instances << " instances agree with the naive scan in " << secs << " s";
  report(evalAgree == instances && secs < 60.0, "semantics-oracle", d.str());
  std::ostringstream d2;
  d2 << listAgree << "/" << listChecks << " list operations agree with brute force";
  report(listAgree == listChecks, "index-problem-oracles", d2.str());
}

void motivation() {
  auto ontology = test::plantsOntology();
  auto corpus = test::plantsCorpus(ontology);
  auto query = parseAndResolve(test::kFig1Query, ontology);
  auto namesIn = [&](DecompositionMode mode) {
    std::set<std::string> out;
    for (const auto& g : evaluate(query, test::buildIndex(corpus, ontology, mode), ontology).groups) {
      out.insert(ontology.entityName(g.entity));
    }
    return out;
  };
  auto ctx = namesIn(DecompositionMode::Contexts);
  auto sent = namesIn(DecompositionMode::Sentences);
  Qrels qrels{{"fig1", {"Broccoli"}}};
  auto report1 = compareModes({{"fig1", std::string(test::kFig1Query)}}, qrels, corpus, ontology);
  auto fpCtx = report1.modes[0].metrics.fp;
  auto fpSent = report1.modes[1].metrics.fp;
  bool ok = ctx.contains("Broccoli") && !ctx.contains("Rhubarb") && sent.contains("Rhubarb") && fpCtx < fpSent;

  test::Rng rng(77);
  auto gen = test::distractorCorpus(rng, 8);
  auto genOntology = Ontology::parseString(gen.ontologyTsv);
  auto report2 = compareModes(gen.queries, gen.qrels, parseCorpusString(gen.corpusJsonl, genOntology), genOntology);
  auto a = report2.modes[0].metrics.fp, b = report2.modes[1].metrics.fp, c = report2.modes[2].metrics.fp;
  bool planted = a == 0 && b == gen.sentenceDistractors && c == gen.sentenceDistractors + gen.sectionDistractors;
  ok = ok && c > b && b > a && planted;
  std::ostringstream d;
  d << "fixture FP contexts=" << fpCtx << " sentences=" << fpSent << " (Rhubarb "
    << (ctx.contains("Rhubarb") ? "in" : "not in") << " contexts result); synthetic FP sections=" << c
    << " sentences=" << b << " contexts=" << a << ", t-test p=" << report2.contextsVsSentences.p;
  report(ok, "motivation", d.str());
}

void metricCorrectness() {
  Qrels qrels{{"t1", {"a", "b", "c"}}, {"t2", {"d", "e"}}, {"t3", {"f"}}, {"t4", {"g"}},
              {"t5", {"h", "i", "j", "k"}}};
  RunResult run{{"t1", {"a", "x", "b"}},
                {"t2", {"e", "d"}},
                {"t4", {"x1", "x2", "g"}},
                {"t5", {"h", "y1", "y2", "y3", "y4", "y5", "y6", "y7", "y8", "y9", "i", "y10"}}};
  auto r = metrics(run, qrels);
  auto near = [](double a, double b, double tol) { return std::fabs(a - b) <= tol; };
  const auto& t1 = r.topics[0];
  bool ok = near(t1.precision, 2.0 / 3, 1e-9) && near(t1.recall, 2.0 / 3, 1e-9) &&
            near(t1.rprec, 2.0 / 3, 1e-9) && near(t1.ap, 0.5556, 1e-4) && near(t1.ap, 5.0 / 9, 1e-9);
  ok = ok && near(r.topics[3].ap, 1.0 / 3, 1e-9) && near(r.topics[4].ap, 13.0 / 44, 1e-9) &&
       near(r.topics[4].f1, 0.25, 1e-9) && near(r.topics[3].ndcg, 0.5, 1e-9) && r.fp == 13 && r.fn == 4 &&
       near(r.map, (5.0 / 9 + 1 + 0 + 1.0 / 3 + 13.0 / 44) / 5, 1e-9) && r.topics[2].precision == 0.0;
  RunResult perfect;
  for (const auto& [topic, rel] : qrels) perfect[topic].assign(rel.begin(), rel.end());
  auto p = metrics(perfect, qrels);
  bool ones = p.fp == 0 && p.fn == 0;
  for (double v : {p.precision, p.recall, p.f1, p.rprec, p.map, p.ndcg}) ones = ones && near(v, 1.0, 1e-9);
  std::ostringstream d;
  d << "AP(a,x,b)=" << t1.ap << ", MAP=" << r.map << ", perfect run " << (ones ? "all ones" : "not all ones");
  report(ok && ones, "metric-correctness", d.str());
}

void suggestionSoundness() {
  auto ontology = test::plantsOntology();
  auto index = test::buildIndex(test::plantsCorpus(ontology), ontology, DecompositionMode::Contexts);
  auto stats = test::checkSuggestionSoundness(
      index, ontology, {"class:Entity", "class:Plant", std::string(test::kFig1Query)},
      {"", "p", "plan", "e", "edible lea", "le", "n", "c", "eu", "s", "i", "t", "a"});
  for (const auto& f : stats.failures) std::cerr << "unsound: " << f << "\n";
  std::ostringstream d;
  d << stats.sound << "/" << stats.offered << " applied suggestions non-empty over " << stats.states << " states";
  report(stats.offered > 0 && stats.sound == stats.offered, "suggestion-soundness", d.str());
}

struct Percentiles {
  double median = 0;
  double p99 = 0;
};

Percentiles percentiles(std::vector<double> ms) {
  std::sort(ms.begin(), ms.end());
  auto at = [&](double q) {
    auto i = static_cast<std::size_t>(std::ceil(q * static_cast<double>(ms.size()))) - 1;
    return ms[std::min(i, ms.size() - 1)];
  };
  return {at(0.5), at(0.99)};
}

void latency() {
  auto start = Clock::now();
  auto world = test::largeWorld(100000, 4242);
  auto index = Index::build(world.contexts, world.ontology);
  double buildSecs = secondsSince(start);
  SearchService service(std::move(index), std::move(world.ontology));
  world.contexts.clear();
  Server server(service, ServerConfig{"127.0.0.1", 0, "*", 4});
  int port = server.bind();
  std::thread thread([&] { server.run(); });

  test::Rng rng(99);
  const auto& ontology = service.ontology();
  auto word = [&] { return world.vocabulary[rng() % 500]; };
  auto cls = [&] { return world.classes[rng() % world.classes.size()]; };
  std::vector<std::string> searches, suggestQueries, typed;
  while (searches.size() < 300) {
    std::string q;
    switch (rng() % 4) {
      case 0: q = "class:" + cls() + " (occurs-with " + word() + ")"; break;
      case 1: q = "class:Entity (occurs-with " + word() + " " + word() + ")"; break;
      case 2: q = "class:" + cls() + " (occurs-with " + word().substr(0, 3) + "*)"; break;
      default:
        q = "class:" + cls() + " (" + world.relations[rng() % world.relations.size()] + " class:" + cls() + ")";
    }
    try {
      parseAndResolve(q, ontology);
      searches.push_back(q);
    } catch (const QueryError&) {
    }
  }
  for (int i = 0; i < 300; ++i) {
    switch (i % 3) {
      case 0:
        suggestQueries.push_back("");
        typed.push_back(word().substr(0, 2 + rng() % 3));
        break;
      case 1:
        suggestQueries.push_back("class:Entity (occurs-with " + word() + ")");
        typed.push_back(word().substr(0, 2));
        break;
      default:
        suggestQueries.push_back("class:" + cls());
        typed.push_back(rng() % 2 ? "cla" : "");
    }
  }

  httplib::Client client("127.0.0.1", port);
  client.set_keep_alive(true);
  client.set_read_timeout(30, 0);
  std::vector<double> searchMs, suggestMs;
  int errors = 0;
  auto timed = [&](const std::string& path, const httplib::Params& params, std::vector<double>& out) {
    auto t0 = Clock::now();
    auto res = client.Get(path, params, httplib::Headers{});
    out.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    if (!res || res->status != 200) ++errors;
  };
  for (std::size_t i = 0; i < searches.size(); ++i) {
    timed("/search", {{"q", searches[i]}}, searchMs);
    timed("/suggest", {{"q", suggestQueries[i]}, {"typed", typed[i]}}, suggestMs);
  }
  server.stop();
  thread.join();

  auto s = percentiles(searchMs);
  auto g = percentiles(suggestMs);
  std::ostringstream d;
  d << "100000 contexts (built in " << buildSecs << " s); /search median " << s.median << " ms p99 "
    << s.p99 << " ms; /suggest median " << g.median << " ms p99 " << g.p99 << " ms; " << errors
    << " non-200 responses";
  report(s.median < 50 && g.median < 50 && s.p99 < 400 && g.p99 < 400 && errors == 0, "desk-scale-latency",
         d.str());
}

}  // namespace

int main() {
  guarded("golden-decomposition", goldenDecomposition);
  guarded("posting-fixture", postingFixture);
  guarded("semantics-oracle", semanticsAndIndexOracles);
  guarded("motivation", motivation);
  guarded("metric-correctness", metricCorrectness);
  guarded("suggestion-soundness", suggestionSoundness);
  guarded("desk-scale-latency", latency);
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
