#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctxsearch {

// Node of a constituent parse. Terminals are (POS token) pairs and carry the
// token together with its index in the sentence.
struct ParseNode {
  std::string tag;
  std::vector<ParseNode> children;
  std::optional<std::string> token;
  std::size_t tokenIndex = 0;

  bool isTerminal() const { return token.has_value(); }
  // Half-open range of sentence token indices covered by this node.
  std::size_t firstToken() const;
  std::size_t endToken() const;
  std::vector<std::string> leaves() const;
};

// Reads a Penn-style bracketed tree such as "(S (NP (NNP Anna)) (VP (VBZ sings)))".
// A wrapping "( ... )" with an empty root label is accepted. Throws
// SyntaxError with the byte offset of the problem.
ParseNode parseBracketed(std::string_view input);

std::string toBracketed(const ParseNode& node);

}  // namespace ctxsearch
