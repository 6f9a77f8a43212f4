#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctxsearch/context.h"
#include "ctxsearch/corpus.h"
#include "ctxsearch/entity_recognition.h"
#include "ctxsearch/ontology.h"
#include "ctxsearch/sci.h"

namespace ctxsearch {

enum class DecompositionMode { Contexts, Sentences, Sections };

DecompositionMode parseMode(std::string_view name);
std::string_view modeName(DecompositionMode mode);

struct DecomposeOptions {
  SciRules rules;
};

// Contexts of one document. Ids are 0-based within the document; docIndex is
// left at 0. In Contexts mode each sentence goes through entity recognition,
// anaphora resolution, SCI and SCR; an unparsed sentence (or one whose parse
// does not match its tokens) becomes one whole-sentence context.
std::vector<Context> decompose(const Document& document, const Ontology& ontology,
                               DecompositionMode mode, const DecomposeOptions& options = {});

// All documents, with dense context ids in document order.
std::vector<Context> decomposeCorpus(const Corpus& corpus, const Ontology& ontology,
                                     DecompositionMode mode, const DecomposeOptions& options = {});

// One context over `tokens` with the given inclusive entity spans; no
// recognition or decomposition is applied.
Context makeContext(std::uint64_t id, const std::vector<std::string>& tokens,
                    const std::vector<std::pair<std::pair<std::size_t, std::size_t>, EntityId>>&
                        entities);

// Byte offsets of each token in `text`, searching left to right. Returns an
// empty vector if some token cannot be located.
std::vector<CharSpan> locateTokens(std::string_view text, const std::vector<std::string>& tokens);

}  // namespace ctxsearch
