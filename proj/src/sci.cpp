#include "ctxsearch/sci.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ctxsearch/error.h"
#include "ctxsearch/text.h"

namespace ctxsearch {

namespace {

const std::set<std::string> kPunctuationTags{",", ".", ":", "``", "''", "-LRB-", "-RRB-",
                                             "#", "$", "HYPH", "NFP", "-NONE-"};

bool isFiller(const ParseNode& n) {
  if (n.isTerminal()) {
    return kPunctuationTags.contains(n.tag) || n.tag == "CC" || text::isPunctuation(*n.token);
  }
  return n.tag == "CONJP";
}

bool isConjunction(const ParseNode& n) { return n.tag == "CC" || n.tag == "CONJP"; }

bool isClause(const std::string& tag) { return tag == "S" || tag == "SINV" || tag == "SQ"; }

std::string firstWord(const ParseNode& n) {
  const ParseNode* cur = &n;
  while (!cur->isTerminal()) cur = &cur->children.front();
  return text::toLower(*cur->token);
}

TokenSpan spanOf(const ParseNode& n) { return {n.firstToken(), n.endToken()}; }

SciNode leaf(TokenSpan span, bool filler) {
  SciNode n;
  n.kind = SciKind::Leaf;
  n.span = span;
  n.filler = filler;
  return n;
}

// Flattens nested concatenations and merges runs of adjacent leaves.
std::vector<SciNode> concatenate(std::vector<SciNode> parts) {
  std::vector<SciNode> flat;
  for (auto& p : parts) {
    if (p.kind == SciKind::Conc) {
      for (auto& c : p.children) flat.push_back(std::move(c));
    } else {
      flat.push_back(std::move(p));
    }
  }
  std::vector<SciNode> merged;
  for (auto& p : flat) {
    if (p.isLeaf() && !merged.empty() && merged.back().isLeaf() &&
        merged.back().span.end == p.span.begin) {
      merged.back().span.end = p.span.end;
      merged.back().filler = merged.back().filler && p.filler;
    } else {
      merged.push_back(std::move(p));
    }
  }
  return merged;
}

class SciBuilder {
 public:
  explicit SciBuilder(const SciRules& rules) : rules_(rules) {}

  SciNode build(const ParseNode& n, std::optional<TokenSpan> leftNp) {
    if (n.isTerminal()) return leaf({n.tokenIndex, n.tokenIndex + 1}, isFiller(n));

    std::vector<const ParseNode*> content;
    bool hasConjunction = false;
    for (const auto& c : n.children) {
      if (isConjunction(c)) hasConjunction = true;
      if (!isFiller(c)) content.push_back(&c);
    }

    // Apposition "NP , NP": the second NP is a sub-clause headed by the first.
    std::optional<std::size_t> appositive;
    if (n.tag == "NP" && !hasConjunction && content.size() == 2 && content[0]->tag == "NP" &&
        content[1]->tag == "NP") {
      std::size_t a = content[0] - n.children.data();
      std::size_t b = content[1] - n.children.data();
      for (std::size_t i = a + 1; i < b; ++i) {
        if (n.children[i].isTerminal() && n.children[i].tag == ",") appositive = b;
      }
    }

    std::vector<SciNode> children;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      std::optional<TokenSpan> childLeftNp = leftNp;
      for (std::size_t j = i; j-- > 0;) {
        if (n.children[j].tag == "NP") {
          childLeftNp = spanOf(n.children[j]);
          break;
        }
      }
      SciNode child = build(n.children[i], childLeftNp);
      if (appositive && i == *appositive) {
        SciNode sub;
        sub.kind = SciKind::Sub;
        sub.head = spanOf(*content[0]);
        sub.children = concatenate({std::move(child)});
        child = std::move(sub);
      }
      children.push_back(std::move(child));
    }

    if (n.tag == "SBAR") {
      SciNode sub;
      sub.kind = SciKind::Sub;
      if (rules_.headTriggers.contains(firstWord(n)) && leftNp) sub.head = leftNp;
      sub.children = concatenate(std::move(children));
      return sub;
    }
    if (n.tag == "PP" &&
        (rules_.subPrepositions.contains(firstWord(n)) || n.firstToken() == 0)) {
      SciNode sub;
      sub.kind = SciKind::Sub;
      sub.children = concatenate(std::move(children));
      return sub;
    }

    if (!appositive && content.size() >= 2) {
      auto allTagged = [&](auto pred) {
        return std::all_of(content.begin(), content.end(),
                           [&](const ParseNode* c) { return pred(c->tag); });
      };
      std::string phrase;
      if (allTagged([](const std::string& t) { return t == "NP"; })) phrase = "NP";
      else if (allTagged([](const std::string& t) { return t == "VP"; })) phrase = "VP";
      else if (allTagged(isClause)) phrase = "S";
      if (!phrase.empty()) {
        SciNode en;
        en.kind = SciKind::Enum;
        en.phrase = phrase;
        for (auto& c : children) {
          if (c.kind == SciKind::Enum && c.phrase == phrase) {
            for (auto& cc : c.children) en.children.push_back(std::move(cc));
          } else {
            en.children.push_back(std::move(c));
          }
        }
        return en;
      }
    }

    auto parts = concatenate(std::move(children));
    if (parts.size() == 1) return std::move(parts.front());
    SciNode conc;
    conc.kind = SciKind::Conc;
    conc.children = std::move(parts);
    return conc;
  }

 private:
  const SciRules& rules_;
};

using TokenSeq = std::vector<std::size_t>;

constexpr std::size_t kMaxContexts = 1024;

void appendSpan(TokenSeq& seq, TokenSpan span) {
  for (std::size_t i = span.begin; i < span.end; ++i) seq.push_back(i);
}

class Recombiner {
 public:
  std::vector<TokenSeq> run(const SciNode& root) {
    std::vector<TokenSeq> out =
        root.kind == SciKind::Sub ? expandSub(root) : expand(root);
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      auto sub = expandSub(*pending_[i]);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    std::vector<TokenSeq> unique;
    for (auto& c : out) {
      if (c.empty()) continue;
      if (std::find(unique.begin(), unique.end(), c) == unique.end()) unique.push_back(std::move(c));
    }
    return unique;
  }

 private:
  std::vector<TokenSeq> expandSub(const SciNode& sub) {
    auto body = concat(sub.children);
    if (sub.head) {
      for (auto& c : body) {
        TokenSeq withHead;
        appendSpan(withHead, *sub.head);
        withHead.insert(withHead.end(), c.begin(), c.end());
        c = std::move(withHead);
      }
    }
    return body;
  }

  std::vector<TokenSeq> concat(const std::vector<SciNode>& children) {
    std::vector<TokenSeq> acc{TokenSeq{}};
    for (const auto& c : children) {
      auto part = expand(c);
      if (part.empty()) continue;
      if (acc.size() * part.size() > kMaxContexts) {
        // Runaway cross product: keep the constituent whole.
        TokenSeq whole;
        for (auto span : c.leafSpans()) appendSpan(whole, span);
        part = {whole};
      }
      std::vector<TokenSeq> next;
      next.reserve(acc.size() * part.size());
      for (const auto& a : acc) {
        for (const auto& p : part) {
          TokenSeq joined = a;
          joined.insert(joined.end(), p.begin(), p.end());
          next.push_back(std::move(joined));
        }
      }
      acc = std::move(next);
    }
    return acc;
  }

  std::vector<TokenSeq> expand(const SciNode& n) {
    switch (n.kind) {
      case SciKind::Leaf: {
        TokenSeq seq;
        appendSpan(seq, n.span);
        return {seq};
      }
      case SciKind::Sub:
        pending_.push_back(&n);
        return {};
      case SciKind::Enum: {
        std::vector<TokenSeq> out;
        for (const auto& c : n.children) {
          if (c.isLeaf() && c.filler) continue;
          auto part = expand(c);
          out.insert(out.end(), part.begin(), part.end());
        }
        return out;
      }
      case SciKind::Conc:
        return concat(n.children);
    }
    return {};
  }

  std::vector<const SciNode*> pending_;
};

void describeInto(const SciNode& n, std::string& out) {
  switch (n.kind) {
    case SciKind::Leaf:
      out += (n.filler ? "FILL[" : "LEAF[") + std::to_string(n.span.begin) + "," +
             std::to_string(n.span.end) + ")";
      return;
    case SciKind::Enum: out += "ENUM("; break;
    case SciKind::Conc: out += "CONC("; break;
    case SciKind::Sub:
      out += "SUB";
      if (n.head) {
        out += "<" + std::to_string(n.head->begin) + "," + std::to_string(n.head->end) + ")>";
      }
      out += "(";
      break;
  }
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += ", ";
    describeInto(n.children[i], out);
  }
  out += ")";
}

}  // namespace

std::vector<TokenSpan> SciNode::leafSpans() const {
  std::vector<TokenSpan> out;
  std::vector<const SciNode*> stack{this};
  while (!stack.empty()) {
    const SciNode* n = stack.back();
    stack.pop_back();
    if (n->isLeaf()) {
      out.push_back(n->span);
    } else {
      for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
    }
  }
  return out;
}

SciRules SciRules::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open file");
  SciRules rules;
  std::set<std::string> heads, preps;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields{std::string(t)};
    std::string kind, word;
    fields >> kind >> word;
    if (word.empty()) throw LoadError(path.string(), lineNo, "expected '<kind> <word>'");
    if (kind == "head") heads.insert(text::toLower(word));
    else if (kind == "preposition") preps.insert(text::toLower(word));
    else throw LoadError(path.string(), lineNo, "unknown list '" + kind + "'");
  }
  if (!heads.empty()) rules.headTriggers = std::move(heads);
  if (!preps.empty()) rules.subPrepositions = std::move(preps);
  return rules;
}

SciNode buildSciTree(const ParseNode& parse, const SciRules& rules) {
  return SciBuilder(rules).build(parse, std::nullopt);
}

std::vector<std::vector<std::size_t>> recombine(const SciNode& tree) {
  return Recombiner().run(tree);
}

std::string describe(const SciNode& node) {
  std::string out;
  describeInto(node, out);
  return out;
}

}  // namespace ctxsearch
