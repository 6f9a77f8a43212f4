#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctxsearch/parse_tree.h"

namespace ctxsearch {

// Half-open range of sentence token indices.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const TokenSpan&) const = default;
};

enum class SciKind { Enum, Sub, Conc, Leaf };

// Sentence constituent tree: enumerations, sub-clauses and concatenations
// over leaves that partition the sentence left to right.
struct SciNode {
  SciKind kind = SciKind::Leaf;
  std::vector<SciNode> children;
  // Leaf only.
  TokenSpan span;
  // Sub only: tokens prepended to every context of the sub-clause.
  std::optional<TokenSpan> head;
  // Leaf made only of punctuation and conjunctions; an enumeration does not
  // turn it into a context of its own.
  bool filler = false;
  // Phrase tag of the parse node the enumeration was built from.
  std::string phrase;

  bool isLeaf() const { return kind == SciKind::Leaf; }
  // Leaf spans in left-to-right order.
  std::vector<TokenSpan> leafSpans() const;
};

// Word lists steering the sub-clause rules. Matching is case-insensitive.
struct SciRules {
  // An SBAR starting with one of these gets the nearest NP on its left as head.
  std::set<std::string> headTriggers{"which", "who", "whom", "whose", "that"};
  // A PP starting with one of these is a headless sub-clause.
  std::set<std::string> subPrepositions{"before", "after", "while", "during",
                                        "although", "though", "because", "since"};

  // Reads "head <word>" / "preposition <word>" lines, replacing the defaults
  // for each list that appears in the file.
  static SciRules load(const std::filesystem::path& path);
};

SciNode buildSciTree(const ParseNode& parse, const SciRules& rules = {});

// Contexts of a constituent tree as sequences of sentence token indices.
// Sub-clauses are detached and expanded on their own with their head in
// front; enumerations contribute the union of their items and concatenations
// the cross product.
std::vector<std::vector<std::size_t>> recombine(const SciNode& tree);

// Debug rendering, e.g. ENUM(CONC(...), LEAF[0,3)).
std::string describe(const SciNode& node);

}  // namespace ctxsearch
