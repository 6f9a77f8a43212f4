#pragma once

#include <cstddef>
#include <vector>

#include "ctxsearch/corpus.h"
#include "ctxsearch/ontology.h"

namespace ctxsearch {

enum class Provenance { Link, NameMatch, Pronoun, TheClass };

// A recognized entity mention over an inclusive token range of one sentence.
// `sentence` counts sentences from the start of the document.
struct TokenAnnotation {
  std::size_t sentence = 0;
  std::size_t firstToken = 0;
  std::size_t lastToken = 0;
  EntityId entity;
  Provenance provenance = Provenance::Link;

  bool operator==(const TokenAnnotation&) const = default;
};

// Link annotations plus later mentions, in the same section, of the full
// name or a capitalized name part of an already linked entity. Longest match
// wins; among equally long matches the most recently linked entity wins.
// Result is sorted by (sentence, firstToken).
std::vector<TokenAnnotation> recognizeEntities(const Document& document, const Ontology& ontology);

// Adds pronoun annotations (he/she/it and their forms, resolved to the last
// recognized entity of matching gender in the current section) and "the
// <class>" annotations for the document's own entity. Returns the input
// annotations merged with the new ones, sorted.
std::vector<TokenAnnotation> resolveAnaphora(const Document& document,
                                             std::vector<TokenAnnotation> annotations,
                                             const Ontology& ontology);

}  // namespace ctxsearch
