#include "ctxsearch/parse_tree.h"

#include <cctype>

#include "ctxsearch/error.h"

namespace ctxsearch {

std::size_t ParseNode::firstToken() const {
  const ParseNode* n = this;
  while (!n->isTerminal()) n = &n->children.front();
  return n->tokenIndex;
}

std::size_t ParseNode::endToken() const {
  const ParseNode* n = this;
  while (!n->isTerminal()) n = &n->children.back();
  return n->tokenIndex + 1;
}

std::vector<std::string> ParseNode::leaves() const {
  std::vector<std::string> out;
  std::vector<const ParseNode*> stack{this};
  while (!stack.empty()) {
    const ParseNode* n = stack.back();
    stack.pop_back();
    if (n->isTerminal()) {
      out.push_back(*n->token);
    } else {
      for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
    }
  }
  return out;
}

namespace {

class BracketParser {
 public:
  explicit BracketParser(std::string_view in) : in_(in) {}

  ParseNode parseTop() {
    skipSpace();
    ParseNode root = parseNode();
    skipSpace();
    if (pos_ != in_.size()) throw SyntaxError(pos_, "trailing input after parse tree");
    // "( (S ...) )" style wrapper.
    if (root.tag.empty() && root.children.size() == 1) root = std::move(root.children.front());
    return root;
  }

 private:
  void skipSpace() {
    while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
  }

  std::string atom() {
    std::size_t start = pos_;
    while (pos_ < in_.size() && !std::isspace(static_cast<unsigned char>(in_[pos_])) &&
           in_[pos_] != '(' && in_[pos_] != ')') {
      ++pos_;
    }
    return std::string(in_.substr(start, pos_ - start));
  }

  ParseNode parseNode() {
    if (pos_ >= in_.size() || in_[pos_] != '(') throw SyntaxError(pos_, "expected '('");
    std::size_t open = pos_;
    ++pos_;
    skipSpace();
    ParseNode node;
    node.tag = atom();
    skipSpace();
    if (pos_ >= in_.size()) throw SyntaxError(pos_, "unbalanced '(' opened at " + std::to_string(open));
    if (in_[pos_] != '(') {
      // Terminal.
      if (in_[pos_] == ')') throw SyntaxError(pos_, "empty constituent '" + node.tag + "'");
      if (node.tag.empty()) throw SyntaxError(open, "terminal without a tag");
      node.token = atom();
      node.tokenIndex = nextToken_++;
      skipSpace();
      if (pos_ >= in_.size() || in_[pos_] != ')') throw SyntaxError(pos_, "expected ')' after token");
      ++pos_;
      return node;
    }
    while (true) {
      skipSpace();
      if (pos_ >= in_.size()) throw SyntaxError(pos_, "unbalanced '(' opened at " + std::to_string(open));
      if (in_[pos_] == ')') {
        ++pos_;
        break;
      }
      node.children.push_back(parseNode());
    }
    if (node.children.empty()) throw SyntaxError(open, "constituent without children");
    return node;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::size_t nextToken_ = 0;
};

void write(const ParseNode& n, std::string& out) {
  out += '(';
  out += n.tag;
  if (n.isTerminal()) {
    out += ' ';
    out += *n.token;
  } else {
    for (const auto& c : n.children) {
      out += ' ';
      write(c, out);
    }
  }
  out += ')';
}

}  // namespace

ParseNode parseBracketed(std::string_view input) { return BracketParser(input).parseTop(); }

std::string toBracketed(const ParseNode& node) {
  std::string out;
  write(node, out);
  return out;
}

}  // namespace ctxsearch
