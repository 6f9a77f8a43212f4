#include "ctxsearch/corpus.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "ctxsearch/error.h"
#include "ctxsearch/text.h"
#include "json.hpp"

namespace ctxsearch {

using nlohmann::json;

std::size_t Document::numSentences() const {
  std::size_t n = 0;
  for (const auto& s : sections) n += s.sentences.size();
  return n;
}

namespace {

void appendToPrevious(Sentence& prev, Sentence item) {
  std::size_t offset = prev.tokens.size();
  if (!prev.text.empty() && !item.text.empty()) prev.text += ' ';
  prev.text += item.text;
  for (auto& t : item.tokens) prev.tokens.push_back(std::move(t));
  for (auto link : item.links) {
    link.firstToken += offset;
    link.lastToken += offset;
    prev.links.push_back(link);
  }
  prev.parse.reset();
}

Sentence readSentence(const json& js, const Ontology& ontology, Corpus& corpus,
                      const std::string& where, const std::function<void(const std::string&)>& fail) {
  Sentence s;
  if (!js.is_object()) fail("sentence must be an object");
  if (!js.contains("text") || !js["text"].is_string()) fail("sentence without \"text\"");
  s.text = js["text"].get<std::string>();
  if (js.contains("tokens") && !js["tokens"].is_null()) {
    if (!js["tokens"].is_array()) fail("\"tokens\" must be an array");
    for (const auto& t : js["tokens"]) {
      if (!t.is_string()) fail("token must be a string");
      s.tokens.push_back(t.get<std::string>());
    }
  }
  if (s.tokens.empty()) s.tokens = text::tokenize(s.text);
  if (js.contains("parse") && !js["parse"].is_null()) {
    if (!js["parse"].is_string()) fail("\"parse\" must be a string or null");
    s.parse = js["parse"].get<std::string>();
  }
  if (js.contains("list_item")) s.listItem = js["list_item"].get<bool>();

  std::vector<LinkAnnotation> links;
  if (js.contains("links") && !js["links"].is_null()) {
    if (!js["links"].is_array()) fail("\"links\" must be an array");
    for (const auto& l : js["links"]) {
      if (!l.contains("first_token") || !l.contains("last_token") || !l.contains("entity") ||
          !l["first_token"].is_number_unsigned() || !l["last_token"].is_number_unsigned() ||
          !l["entity"].is_string()) {
        fail("link needs unsigned \"first_token\", \"last_token\" and string \"entity\"");
      }
      auto first = l["first_token"].get<std::size_t>();
      auto last = l["last_token"].get<std::size_t>();
      if (first > last || last >= s.tokens.size()) {
        fail("link span [" + std::to_string(first) + ", " + std::to_string(last) +
             "] out of range for " + std::to_string(s.tokens.size()) + " tokens");
      }
      auto name = l["entity"].get<std::string>();
      auto entity = ontology.findEntity(name);
      if (!entity) {
        ++corpus.droppedLinks;
        corpus.warnings.push_back(where + ": unknown entity '" + name + "', link dropped");
        continue;
      }
      links.push_back({first, last, *entity});
    }
  }
  // Non-overlap: keep links in input order, reject any that overlaps an
  // already accepted one.
  for (const auto& link : links) {
    bool overlaps = std::any_of(s.links.begin(), s.links.end(), [&](const LinkAnnotation& o) {
      return link.firstToken <= o.lastToken && o.firstToken <= link.lastToken;
    });
    if (overlaps) {
      ++corpus.droppedLinks;
      corpus.warnings.push_back(where + ": link [" + std::to_string(link.firstToken) + ", " +
                                std::to_string(link.lastToken) +
                                "] overlaps another link, dropped");
      continue;
    }
    s.links.push_back(link);
  }
  std::sort(s.links.begin(), s.links.end(),
            [](const LinkAnnotation& a, const LinkAnnotation& b) { return a.firstToken < b.firstToken; });
  return s;
}

}  // namespace

Corpus parseCorpus(std::istream& in, const Ontology& ontology, const CorpusOptions& options,
                   const std::string& sourceName) {
  Corpus corpus;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (text::trim(line).empty()) continue;
    auto fail = [&](const std::string& msg) { throw LoadError(sourceName, lineNo, msg); };
    json js;
    try {
      js = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(std::string("malformed JSON: ") + e.what());
    }
    if (!js.is_object()) fail("document must be a JSON object");
    Document doc;
    try {
      if (!js.contains("id")) fail("document without \"id\"");
      doc.id = js["id"].is_string() ? js["id"].get<std::string>() : js["id"].dump();
      doc.title = js.value("title", std::string());
      if (!js.contains("sections") || !js["sections"].is_array()) {
        fail("document without \"sections\" array");
      }
      std::size_t sectionNo = 0;
      for (const auto& sec : js["sections"]) {
        Section section;
        if (!sec.is_object()) fail("section must be an object");
        section.heading = sec.value("heading", std::string());
        if (sec.contains("sentences")) {
          if (!sec["sentences"].is_array()) fail("\"sentences\" must be an array");
          std::size_t sentenceNo = 0;
          for (const auto& sj : sec["sentences"]) {
            std::string where = sourceName + ":" + std::to_string(lineNo) + ": document '" +
                                doc.id + "' section " + std::to_string(sectionNo) +
                                " sentence " + std::to_string(sentenceNo++);
            Sentence s = readSentence(sj, ontology, corpus, where, fail);
            if (options.appendListItems && s.listItem && !section.sentences.empty()) {
              appendToPrevious(section.sentences.back(), std::move(s));
            } else {
              section.sentences.push_back(std::move(s));
            }
          }
        }
        doc.sections.push_back(std::move(section));
        ++sectionNo;
      }
    } catch (const json::exception& e) {
      fail(std::string("malformed record: ") + e.what());
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus loadCorpus(const std::filesystem::path& path, const Ontology& ontology,
                  const CorpusOptions& options) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open file");
  return parseCorpus(in, ontology, options, path.string());
}

Corpus parseCorpusString(const std::string& jsonl, const Ontology& ontology,
                         const CorpusOptions& options) {
  std::istringstream in(jsonl);
  return parseCorpus(in, ontology, options);
}

}  // namespace ctxsearch
