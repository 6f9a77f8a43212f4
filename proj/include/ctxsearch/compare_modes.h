#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctxsearch/corpus.h"
#include "ctxsearch/decompose.h"
#include "ctxsearch/evaluator.h"
#include "ctxsearch/index.h"
#include "ctxsearch/metrics.h"
#include "ctxsearch/ontology.h"
#include "json.hpp"

namespace ctxsearch {

struct TTest {
  std::size_t n = 0;
  double meanDifference = 0;
  double t = 0;
  double degreesOfFreedom = 0;
  double p = 1;
};

// Student's paired two-tailed t-test on a[i] - b[i]. With fewer than two
// pairs, or all differences equal to zero, p is 1; with a non-zero constant
// difference p is 0.
TTest pairedTTest(std::span<const double> a, std::span<const double> b);

struct ModeResult {
  DecompositionMode mode;
  IndexStats stats;
  RunResult run;
  MetricsReport metrics;
};

struct CompareReport {
  std::vector<ModeResult> modes;  // contexts, sentences, sections
  TTest contextsVsSentences;      // per-topic F1

  std::string toTsv() const;
  std::string toTable() const;
  nlohmann::json toJson() const;
};

struct CompareOptions {
  DecomposeOptions decompose;
  IndexConfig index;
  EvalConfig eval;
};

// Ranked entity names of every query (unpaged).
RunResult runQueries(const std::vector<std::pair<std::string, std::string>>& queries,
                     const Index& index, const Ontology& ontology, const EvalConfig& config = {});

CompareReport compareModes(const std::vector<std::pair<std::string, std::string>>& queries,
                           const Qrels& qrels, const Corpus& corpus, const Ontology& ontology,
                           const CompareOptions& options = {});

}  // namespace ctxsearch
