#include "ctxsearch/compare_modes.h"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "ctxsearch/error.h"
#include "ctxsearch/query.h"

namespace ctxsearch {

TTest pairedTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("paired t-test needs samples of equal size");
  TTest r;
  r.n = a.size();
  if (r.n == 0) return r;
  double sum = 0;
  for (std::size_t i = 0; i < r.n; ++i) sum += a[i] - b[i];
  r.meanDifference = sum / static_cast<double>(r.n);
  if (r.n < 2) return r;
  double ss = 0;
  for (std::size_t i = 0; i < r.n; ++i) {
    double d = a[i] - b[i] - r.meanDifference;
    ss += d * d;
  }
  r.degreesOfFreedom = static_cast<double>(r.n - 1);
  double sd = std::sqrt(ss / r.degreesOfFreedom);
  if (sd == 0) {
    if (r.meanDifference != 0) {
      r.t = std::copysign(std::numeric_limits<double>::infinity(), r.meanDifference);
      r.p = 0;
    }
    return r;
  }
  r.t = r.meanDifference / (sd / std::sqrt(static_cast<double>(r.n)));
  boost::math::students_t dist(r.degreesOfFreedom);
  r.p = 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  return r;
}

RunResult runQueries(const std::vector<std::pair<std::string, std::string>>& queries,
                     const Index& index, const Ontology& ontology, const EvalConfig& config) {
  RunResult run;
  for (const auto& [topic, text] : queries) {
    auto query = parseAndResolve(text, ontology);
    auto& ranked = run[topic];
    ranked.clear();
    for (const auto& g : evaluate(query, index, ontology, config).groups) {
      ranked.push_back(ontology.entityName(g.entity));
    }
  }
  return run;
}

CompareReport compareModes(const std::vector<std::pair<std::string, std::string>>& queries,
                           const Qrels& qrels, const Corpus& corpus, const Ontology& ontology,
                           const CompareOptions& options) {
  CompareReport report;
  for (auto mode : {DecompositionMode::Contexts, DecompositionMode::Sentences,
                    DecompositionMode::Sections}) {
    auto contexts = decomposeCorpus(corpus, ontology, mode, options.decompose);
    auto index = Index::build(contexts, ontology, options.index);
    ModeResult m{mode, index.stats(), runQueries(queries, index, ontology, options.eval), {}};
    m.metrics = metrics(m.run, qrels);
    report.modes.push_back(std::move(m));
  }
  std::vector<double> a, b;
  for (const auto& t : report.modes[0].metrics.topics) a.push_back(t.f1);
  for (const auto& t : report.modes[1].metrics.topics) b.push_back(t.f1);
  report.contextsVsSentences = pairedTTest(a, b);
  return report;
}

std::string CompareReport::toTsv() const {
  std::ostringstream out;
  out << "mode\tFP\tFN\tprecision\trecall\tF1\tP@10\tR-Prec\tMAP\tnDCG\n";
  out << std::setprecision(6);
  for (const auto& m : modes) {
    const auto& r = m.metrics;
    out << modeName(m.mode) << '\t' << r.fp << '\t' << r.fn << '\t' << r.precision << '\t'
        << r.recall << '\t' << r.f1 << '\t' << r.p10 << '\t' << r.rprec << '\t' << r.map << '\t'
        << r.ndcg << '\n';
  }
  return out.str();
}

std::string CompareReport::toTable() const {
  std::ostringstream out;
  out << std::left << std::setw(10) << "mode" << std::right;
  for (const char* h : {"FP", "FN", "Prec", "Rec", "F1", "P@10", "R-Prec", "MAP", "nDCG"}) {
    out << std::setw(8) << h;
  }
  out << '\n' << std::fixed << std::setprecision(2);
  for (const auto& m : modes) {
    const auto& r = m.metrics;
    out << std::left << std::setw(10) << modeName(m.mode) << std::right << std::setw(8) << r.fp
        << std::setw(8) << r.fn;
    for (double v : {r.precision, r.recall, r.f1, r.p10, r.rprec, r.map, r.ndcg}) {
      out << std::setw(8) << v;
    }
    out << '\n';
  }
  out << std::setprecision(4) << "paired t-test on F1, contexts vs sentences: n="
      << contextsVsSentences.n << " t=" << contextsVsSentences.t
      << " p=" << contextsVsSentences.p << '\n';
  return out.str();
}

nlohmann::json CompareReport::toJson() const {
  nlohmann::json js;
  js["modes"] = nlohmann::json::array();
  for (const auto& m : modes) {
    const auto& r = m.metrics;
    nlohmann::json topics = nlohmann::json::array();
    for (const auto& t : r.topics) {
      topics.push_back({{"topic", t.topic}, {"tp", t.tp}, {"fp", t.fp}, {"fn", t.fn},
                        {"precision", t.precision}, {"recall", t.recall}, {"f1", t.f1},
                        {"p10", t.p10}, {"rprec", t.rprec}, {"ap", t.ap}, {"ndcg", t.ndcg}});
    }
    js["modes"].push_back({{"mode", modeName(m.mode)},
                           {"contexts", m.stats.contexts},
                           {"fp", r.fp}, {"fn", r.fn}, {"precision", r.precision},
                           {"recall", r.recall}, {"f1", r.f1}, {"p10", r.p10},
                           {"rprec", r.rprec}, {"map", r.map}, {"ndcg", r.ndcg},
                           {"topics", topics}});
  }
  const auto& t = contextsVsSentences;
  js["ttest"] = {{"n", t.n}, {"mean_difference", t.meanDifference},
                 {"t", std::isfinite(t.t) ? nlohmann::json(t.t) : nlohmann::json(t.t > 0 ? "inf" : "-inf")},
                 {"df", t.degreesOfFreedom}, {"p", t.p}};
  return js;
}

}  // namespace ctxsearch
