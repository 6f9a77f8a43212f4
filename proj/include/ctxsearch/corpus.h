#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ctxsearch/ontology.h"

namespace ctxsearch {

// Link annotation over an inclusive token range.
struct LinkAnnotation {
  std::size_t firstToken = 0;
  std::size_t lastToken = 0;
  EntityId entity;
};

struct Sentence {
  std::string text;
  std::vector<std::string> tokens;
  // Bracketed constituent parse; absent for unparsed sentences.
  std::optional<std::string> parse;
  std::vector<LinkAnnotation> links;
  bool listItem = false;

  bool unparsed() const { return !parse.has_value(); }
};

struct Section {
  std::string heading;
  std::vector<Sentence> sentences;
};

struct Document {
  std::string id;
  std::string title;
  std::vector<Section> sections;

  std::size_t numSentences() const;
};

struct CorpusOptions {
  // Append sentences marked "list_item" to the preceding sentence.
  bool appendListItems = false;
};

struct Corpus {
  std::vector<Document> documents;
  // Link annotations dropped at load (unknown entity or overlapping span).
  std::size_t droppedLinks = 0;
  std::vector<std::string> warnings;
};

// JSON-lines, one document per line. Malformed records and out-of-range
// spans throw LoadError; unknown entities and overlapping links are dropped
// with a warning.
Corpus loadCorpus(const std::filesystem::path& path, const Ontology& ontology,
                  const CorpusOptions& options = {});
Corpus parseCorpus(std::istream& in, const Ontology& ontology,
                   const CorpusOptions& options = {},
                   const std::string& sourceName = "<corpus>");
Corpus parseCorpusString(const std::string& jsonl, const Ontology& ontology,
                         const CorpusOptions& options = {});

}  // namespace ctxsearch
