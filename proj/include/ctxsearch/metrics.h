#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ctxsearch {

// Topic -> relevant entity names (binary relevance).
using Qrels = std::map<std::string, std::set<std::string>>;
// Topic -> ranked entity names.
using RunResult = std::map<std::string, std::vector<std::string>>;

struct TopicMetrics {
  std::string topic;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double p10 = 0;
  double rprec = 0;
  double ap = 0;
  double ndcg = 0;
};

struct MetricsReport {
  std::vector<TopicMetrics> topics;  // qrels order
  // Summed over topics.
  std::size_t fp = 0;
  std::size_t fn = 0;
  // Macro averages.
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double p10 = 0;
  double rprec = 0;
  double map = 0;
  double ndcg = 0;
};

// Every qrels topic is scored; a topic missing from the run counts as an
// empty run (precision 0). Throws Error for a run topic without qrels, a
// duplicate entity in a run, or a topic with no relevant entities.
MetricsReport metrics(const RunResult& run, const Qrels& qrels);
TopicMetrics topicMetrics(const std::string& topic, const std::vector<std::string>& ranked,
                          const std::set<std::string>& relevant);

// `topic<TAB>entity` per line; '#' comments and blank lines skipped.
Qrels loadQrels(const std::filesystem::path& path);
Qrels parseQrels(const std::string& tsv, const std::string& sourceName = "<qrels>");
// `topic<TAB>query` per line, in file order.
std::vector<std::pair<std::string, std::string>> loadQueries(const std::filesystem::path& path);
std::vector<std::pair<std::string, std::string>> parseQueries(
    const std::string& tsv, const std::string& sourceName = "<queries>");

}  // namespace ctxsearch
