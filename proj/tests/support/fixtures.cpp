#include "support/fixtures.h"

#include <fstream>
#include <sstream>
#include <unistd.h>

#include "ctxsearch/text.h"

namespace ctxsearch::test {

std::filesystem::path dataPath(std::string_view name) {
  return std::filesystem::path(CTXSEARCH_TEST_DATA) / name;
}

std::string readText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Ontology plantsOntology() { return Ontology::load(dataPath("ontology.tsv")); }

Corpus plantsCorpus(const Ontology& ontology) { return loadCorpus(dataPath("plants.jsonl"), ontology); }

Corpus rhubarbCorpus(const Ontology& ontology) {
  return loadCorpus(dataPath("rhubarb.jsonl"), ontology);
}

Index buildIndex(const Corpus& corpus, const Ontology& ontology, DecompositionMode mode,
                 const IndexConfig& config) {
  return Index::build(decomposeCorpus(corpus, ontology, mode), ontology, config);
}

std::vector<std::string> surfaceTokens(const Context& context) {
  std::vector<std::string> out;
  for (const auto& span : context.active) {
    auto part = std::string_view(context.text).substr(span.begin, span.end - span.begin);
    for (auto& t : text::tokenize(part)) {
      if (!text::isPunctuation(t)) out.push_back(text::toLower(t));
    }
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  for (auto& t : text::tokenize(s)) {
    if (!text::isPunctuation(t)) out.push_back(text::toLower(t));
  }
  return out;
}

std::filesystem::path scratchDir(std::string_view name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("ctxsearch_" + std::string(name) + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace ctxsearch::test
