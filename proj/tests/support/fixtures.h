#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ctxsearch/context.h"
#include "ctxsearch/corpus.h"
#include "ctxsearch/decompose.h"
#include "ctxsearch/index.h"
#include "ctxsearch/ontology.h"

namespace ctxsearch::test {

inline constexpr std::string_view kFig1Query =
    "class:Plant (native-to entity:Europe) (occurs-with edible leav*)";

std::filesystem::path dataPath(std::string_view name);
std::string readText(const std::filesystem::path& path);

Ontology plantsOntology();
Corpus plantsCorpus(const Ontology& ontology);
Corpus rhubarbCorpus(const Ontology& ontology);

Index buildIndex(const Corpus& corpus, const Ontology& ontology, DecompositionMode mode,
                 const IndexConfig& config = {});

// Lowercased tokens of the parts of the excerpt text that belong to the
// context, punctuation dropped.
std::vector<std::string> surfaceTokens(const Context& context);

// "the usable parts of rhubarb , ..." split on spaces, punctuation dropped.
std::vector<std::string> words(std::string_view text);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratchDir(std::string_view name);

}  // namespace ctxsearch::test
