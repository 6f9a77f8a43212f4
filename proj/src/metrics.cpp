#include "ctxsearch/metrics.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "ctxsearch/error.h"
#include "ctxsearch/text.h"

namespace ctxsearch {

namespace {

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename F>
void forEachPair(const std::string& tsv, const std::string& source, F&& f) {
  std::istringstream in(tsv);
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw LoadError(source, lineNo, "expected topic<TAB>value");
    auto topic = std::string(text::trim(std::string_view(line).substr(0, tab)));
    auto value = std::string(text::trim(std::string_view(line).substr(tab + 1)));
    if (topic.empty() || value.empty()) throw LoadError(source, lineNo, "empty field");
    f(std::move(topic), std::move(value));
  }
}

}  // namespace

TopicMetrics topicMetrics(const std::string& topic, const std::vector<std::string>& ranked,
                          const std::set<std::string>& relevant) {
  if (relevant.empty()) throw Error("topic " + topic + " has no relevant entities");
  std::unordered_set<std::string> seen;
  TopicMetrics m;
  m.topic = topic;
  const double R = static_cast<double>(relevant.size());
  double precisionSum = 0;
  double dcg = 0;
  std::size_t top10 = 0;
  std::size_t atR = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (!seen.insert(ranked[i]).second) {
      throw Error("duplicate entity " + ranked[i] + " in run for topic " + topic);
    }
    if (!relevant.contains(ranked[i])) continue;
    ++m.tp;
    precisionSum += static_cast<double>(m.tp) / static_cast<double>(i + 1);
    dcg += 1.0 / std::log2(static_cast<double>(i + 2));
    if (i < 10) ++top10;
    if (i < relevant.size()) ++atR;
  }
  m.fp = ranked.size() - m.tp;
  m.fn = relevant.size() - m.tp;
  m.precision = ranked.empty() ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(ranked.size());
  m.recall = static_cast<double>(m.tp) / R;
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.p10 = static_cast<double>(top10) / 10.0;
  m.rprec = static_cast<double>(atR) / R;
  m.ap = precisionSum / R;
  double ideal = 0;
  for (std::size_t i = 0; i < relevant.size(); ++i) ideal += 1.0 / std::log2(static_cast<double>(i + 2));
  m.ndcg = dcg / ideal;
  return m;
}

MetricsReport metrics(const RunResult& run, const Qrels& qrels) {
  for (const auto& [topic, ranked] : run) {
    if (!qrels.contains(topic)) throw Error("run topic " + topic + " has no relevance judgments");
  }
  MetricsReport report;
  static const std::vector<std::string> kEmpty;
  for (const auto& [topic, relevant] : qrels) {
    auto it = run.find(topic);
    auto m = topicMetrics(topic, it == run.end() ? kEmpty : it->second, relevant);
    report.fp += m.fp;
    report.fn += m.fn;
    report.precision += m.precision;
    report.recall += m.recall;
    report.f1 += m.f1;
    report.p10 += m.p10;
    report.rprec += m.rprec;
    report.map += m.ap;
    report.ndcg += m.ndcg;
    report.topics.push_back(std::move(m));
  }
  if (!report.topics.empty()) {
    const double n = static_cast<double>(report.topics.size());
    for (double* v : {&report.precision, &report.recall, &report.f1, &report.p10, &report.rprec,
                      &report.map, &report.ndcg}) {
      *v /= n;
    }
  }
  return report;
}

Qrels parseQrels(const std::string& tsv, const std::string& sourceName) {
  Qrels qrels;
  forEachPair(tsv, sourceName, [&](std::string topic, std::string entity) {
    qrels[std::move(topic)].insert(std::move(entity));
  });
  return qrels;
}

Qrels loadQrels(const std::filesystem::path& path) { return parseQrels(readFile(path), path.string()); }

std::vector<std::pair<std::string, std::string>> parseQueries(const std::string& tsv,
                                                              const std::string& sourceName) {
  std::vector<std::pair<std::string, std::string>> out;
  forEachPair(tsv, sourceName, [&](std::string topic, std::string query) {
    out.emplace_back(std::move(topic), std::move(query));
  });
  return out;
}

std::vector<std::pair<std::string, std::string>> loadQueries(const std::filesystem::path& path) {
  return parseQueries(readFile(path), path.string());
}

}  // namespace ctxsearch
