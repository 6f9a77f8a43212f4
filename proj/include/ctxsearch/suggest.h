#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxsearch/evaluator.h"
#include "ctxsearch/index.h"
#include "ctxsearch/ontology.h"
#include "ctxsearch/query.h"

namespace ctxsearch {

enum class SuggestionKind { Word, Class, Instance, Relation };

std::string_view kindName(SuggestionKind kind);

struct Suggestion {
  SuggestionKind kind = SuggestionKind::Word;
  std::string label;
  std::uint64_t score = 0;
  bool preselected = false;
  // Word: words to add to an occurs-with arc.
  std::vector<std::string> words;
  // Relation: target class of the arc to add.
  std::string targetClass;
};

struct Suggestions {
  std::vector<Suggestion> words;
  std::vector<Suggestion> classes;
  std::vector<Suggestion> instances;
  std::vector<Suggestion> relations;

  const Suggestion* preselected() const;
  bool empty() const {
    return words.empty() && classes.empty() && instances.empty() && relations.empty();
  }
};

enum class PreselectRule { ExactClass, ExactInstance, TopRelation, TopWord, TopClass, TopInstance };

struct SuggestConfig {
  std::size_t listLength = 8;
  std::vector<PreselectRule> preselectOrder{PreselectRule::ExactClass,  PreselectRule::ExactInstance,
                                            PreselectRule::TopRelation, PreselectRule::TopWord,
                                            PreselectRule::TopClass,    PreselectRule::TopInstance};
  EvalConfig eval;
};

// Context-sensitive suggestions for the node or occurs-with arc at `focus`.
// `typed` is the text being typed; for word suggestions its last token is a
// prefix and earlier tokens are complete words. Every suggestion, applied
// with applySuggestion, leads to a non-empty result.
Suggestions suggest(const QueryTree& query, const FocusPath& focus, std::string_view typed,
                    const Index& index, const Ontology& ontology, const SuggestConfig& config = {});

struct AppliedSuggestion {
  QueryTree query;
  FocusPath focus;
};

// Class/instance suggestions replace the focused node's reference; relation
// suggestions add an arc to a node of the target class and move the focus
// there; word suggestions add an occurs-with arc (or extend the focused
// one) and move the focus back to the root.
AppliedSuggestion applySuggestion(const QueryTree& query, const FocusPath& focus,
                                  const Suggestion& suggestion, const Ontology& ontology);

}  // namespace ctxsearch
