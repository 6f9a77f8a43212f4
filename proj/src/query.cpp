#include "ctxsearch/query.h"

#include <cctype>
#include <charconv>

#include "ctxsearch/error.h"
#include "ctxsearch/text.h"

namespace ctxsearch {

using nlohmann::json;

namespace {

constexpr std::string_view kClassPrefix = "class:";
constexpr std::string_view kEntityPrefix = "entity:";
constexpr std::string_view kOccursWith = "occurs-with";
constexpr std::string_view kReverseSuffix = "^-1";

struct Token {
  enum class Kind { Open, Close, Atom, End } kind;
  std::string_view text;
  std::size_t position;
};

class QueryParser {
 public:
  explicit QueryParser(std::string_view in) : in_(in) { advance(); }

  QueryTree parse() {
    if (current_.kind == Token::Kind::End) throw SyntaxError(0, "empty query");
    QueryTree q{parseNode()};
    if (current_.kind != Token::Kind::End) {
      throw SyntaxError(current_.position, "unexpected '" + std::string(current_.text) + "'");
    }
    return q;
  }

 private:
  void advance() {
    while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
    if (pos_ == in_.size()) {
      current_ = {Token::Kind::End, {}, pos_};
      return;
    }
    char c = in_[pos_];
    if (c == '(' || c == ')') {
      current_ = {c == '(' ? Token::Kind::Open : Token::Kind::Close, in_.substr(pos_, 1), pos_};
      ++pos_;
      return;
    }
    std::size_t start = pos_;
    while (pos_ < in_.size() && !std::isspace(static_cast<unsigned char>(in_[pos_])) &&
           in_[pos_] != '(' && in_[pos_] != ')') {
      ++pos_;
    }
    current_ = {Token::Kind::Atom, in_.substr(start, pos_ - start), start};
  }

  static bool isRef(std::string_view atom) {
    return text::startsWith(atom, kClassPrefix) || text::startsWith(atom, kEntityPrefix);
  }

  QueryNode parseNode() {
    if (current_.kind != Token::Kind::Atom || !isRef(current_.text)) {
      throw SyntaxError(current_.position, "expected 'class:NAME' or 'entity:NAME'");
    }
    QueryNode node;
    bool isClass = text::startsWith(current_.text, kClassPrefix);
    node.ref.kind = isClass ? NodeRef::Kind::Class : NodeRef::Kind::Instance;
    node.ref.name = std::string(current_.text.substr(isClass ? kClassPrefix.size() : kEntityPrefix.size()));
    if (node.ref.name.empty()) throw SyntaxError(current_.position, "empty name");
    advance();
    while (current_.kind == Token::Kind::Open) node.arcs.push_back(parseArc());
    return node;
  }

  Arc parseArc() {
    std::size_t open = current_.position;
    advance();
    if (current_.kind != Token::Kind::Atom) {
      throw SyntaxError(current_.position, "expected relation name or 'occurs-with'");
    }
    Arc arc;
    if (current_.text == kOccursWith) {
      arc.kind = Arc::Kind::OccursWith;
      advance();
      while (current_.kind == Token::Kind::Atom) {
        if (isRef(current_.text)) {
          OwItem item{OwItem::Kind::Subquery, {}, {}};
          item.subquery.push_back(parseNode());
          arc.items.push_back(std::move(item));
          continue;
        }
        std::string_view atom = current_.text;
        if (atom.back() == '*') {
          if (atom.size() < 2) throw SyntaxError(current_.position, "empty prefix");
          arc.items.push_back({OwItem::Kind::Prefix, text::normalizeWord(atom.substr(0, atom.size() - 1)), {}});
        } else {
          arc.items.push_back({OwItem::Kind::Word, text::normalizeWord(atom), {}});
        }
        advance();
      }
      if (arc.items.empty()) throw SyntaxError(current_.position, "occurs-with needs at least one item");
    } else {
      arc.kind = Arc::Kind::Ontology;
      std::string_view name = current_.text;
      if (name.size() > kReverseSuffix.size() &&
          name.substr(name.size() - kReverseSuffix.size()) == kReverseSuffix) {
        arc.reversed = true;
        name.remove_suffix(kReverseSuffix.size());
      }
      arc.relation = std::string(name);
      advance();
      arc.target.push_back(parseNode());
    }
    if (current_.kind != Token::Kind::Close) {
      throw SyntaxError(current_.position, "expected ')' closing the arc opened at " + std::to_string(open));
    }
    advance();
    return arc;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  Token current_{Token::Kind::End, {}, 0};
};

std::string printable(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (c == ' ') c = '_';
  }
  return out;
}

void print(const QueryNode& node, std::string& out) {
  out += node.ref.isClass() ? kClassPrefix : kEntityPrefix;
  out += printable(node.ref.name);
  for (const auto& arc : node.arcs) {
    out += " (";
    if (arc.kind == Arc::Kind::Ontology) {
      out += arc.relation;
      if (arc.reversed) out += kReverseSuffix;
      out += ' ';
      print(arc.target.front(), out);
    } else {
      out += kOccursWith;
      for (const auto& item : arc.items) {
        out += ' ';
        switch (item.kind) {
          case OwItem::Kind::Word: out += item.text; break;
          case OwItem::Kind::Prefix: out += item.text + "*"; break;
          case OwItem::Kind::Subquery: print(item.subquery.front(), out); break;
        }
      }
    }
    out += ')';
  }
}

json nodeToJson(const QueryNode& node) {
  json js;
  js[node.ref.isClass() ? "class" : "entity"] = node.ref.name;
  if (!node.arcs.empty()) {
    json arcs = json::array();
    for (const auto& arc : node.arcs) {
      if (arc.kind == Arc::Kind::Ontology) {
        arcs.push_back({{"relation", arc.relation},
                        {"reversed", arc.reversed},
                        {"target", nodeToJson(arc.target.front())}});
      } else {
        json items = json::array();
        for (const auto& item : arc.items) {
          switch (item.kind) {
            case OwItem::Kind::Word: items.push_back({{"word", item.text}}); break;
            case OwItem::Kind::Prefix: items.push_back({{"prefix", item.text}}); break;
            case OwItem::Kind::Subquery:
              items.push_back({{"node", nodeToJson(item.subquery.front())}});
              break;
          }
        }
        arcs.push_back({{"occurs-with", items}});
      }
    }
    js["arcs"] = arcs;
  }
  return js;
}

QueryNode nodeFromJson(const json& js) {
  if (!js.is_object()) throw QueryError("query node must be a JSON object");
  QueryNode node;
  if (js.contains("class")) {
    node.ref.kind = NodeRef::Kind::Class;
    node.ref.name = js.at("class").get<std::string>();
  } else if (js.contains("entity")) {
    node.ref.kind = NodeRef::Kind::Instance;
    node.ref.name = js.at("entity").get<std::string>();
  } else {
    throw QueryError("query node needs \"class\" or \"entity\"");
  }
  if (node.ref.name.empty()) throw QueryError("empty node name");
  if (js.contains("arcs")) {
    for (const auto& a : js.at("arcs")) {
      Arc arc;
      if (a.contains("occurs-with")) {
        arc.kind = Arc::Kind::OccursWith;
        for (const auto& it : a.at("occurs-with")) {
          if (it.contains("word")) {
            arc.items.push_back({OwItem::Kind::Word, text::normalizeWord(it.at("word").get<std::string>()), {}});
          } else if (it.contains("prefix")) {
            auto p = it.at("prefix").get<std::string>();
            if (p.empty()) throw QueryError("empty prefix");
            arc.items.push_back({OwItem::Kind::Prefix, text::normalizeWord(p), {}});
          } else if (it.contains("node")) {
            OwItem item{OwItem::Kind::Subquery, {}, {}};
            item.subquery.push_back(nodeFromJson(it.at("node")));
            arc.items.push_back(std::move(item));
          } else {
            throw QueryError("occurs-with item needs \"word\", \"prefix\" or \"node\"");
          }
        }
        if (arc.items.empty()) throw QueryError("occurs-with needs at least one item");
      } else if (a.contains("relation")) {
        arc.kind = Arc::Kind::Ontology;
        arc.relation = a.at("relation").get<std::string>();
        arc.reversed = a.value("reversed", false);
        arc.target.push_back(nodeFromJson(a.at("target")));
      } else {
        throw QueryError("arc needs \"relation\" or \"occurs-with\"");
      }
      node.arcs.push_back(std::move(arc));
    }
  }
  return node;
}

bool compatible(const NodeRef& ref, ClassId cls, const Ontology& o) {
  if (ref.isClass()) {
    ClassId c{ref.id};
    return o.isSubclassOf(c, cls) || o.isSubclassOf(cls, c);
  }
  EntityId e{ref.id};
  if (o.isInstanceOf(e, cls)) return true;
  for (ClassId d : o.directClasses(e)) {
    if (o.isSubclassOf(cls, d)) return true;
  }
  return false;
}

std::string describeRef(const NodeRef& ref) {
  return std::string(ref.isClass() ? kClassPrefix : kEntityPrefix) + ref.name;
}

void resolveNode(QueryNode& node, const Ontology& o) {
  if (node.ref.isClass()) {
    auto c = o.findClass(node.ref.name);
    if (!c) throw QueryError("unknown class '" + node.ref.name + "'");
    node.ref.id = c->value;
    node.ref.name = o.className(*c);
  } else {
    auto e = o.findEntity(node.ref.name);
    if (!e) throw QueryError("unknown instance '" + node.ref.name + "'");
    node.ref.id = e->value;
    node.ref.name = o.entityName(*e);
  }
  for (auto& arc : node.arcs) {
    if (arc.kind == Arc::Kind::Ontology) {
      const Relation* rel = o.findRelation(arc.relation);
      if (rel == nullptr) throw QueryError("unknown relation '" + arc.relation + "'");
      auto& child = arc.target.front();
      resolveNode(child, o);
      ClassId from = arc.reversed ? rel->targetClass : rel->sourceClass;
      ClassId to = arc.reversed ? rel->sourceClass : rel->targetClass;
      if (!compatible(node.ref, from, o)) {
        throw QueryError("type violation: " + describeRef(node.ref) + " does not match '" +
                         o.className(from) + "', the source type of " + arc.relation +
                         (arc.reversed ? "^-1" : ""));
      }
      if (!compatible(child.ref, to, o)) {
        throw QueryError("type violation: " + describeRef(child.ref) + " does not match '" +
                         o.className(to) + "', the target type of " + arc.relation +
                         (arc.reversed ? "^-1" : ""));
      }
    } else {
      for (auto& item : arc.items) {
        if (item.kind == OwItem::Kind::Subquery) resolveNode(item.subquery.front(), o);
      }
    }
  }
}

void collectPaths(const QueryNode& node, std::vector<std::size_t>& prefix,
                  std::vector<FocusPath>& out) {
  out.push_back({prefix});
  for (std::size_t a = 0; a < node.arcs.size(); ++a) {
    const auto& arc = node.arcs[a];
    prefix.push_back(a);
    if (arc.kind == Arc::Kind::Ontology) {
      collectPaths(arc.target.front(), prefix, out);
    } else {
      for (std::size_t i = 0; i < arc.items.size(); ++i) {
        if (arc.items[i].kind != OwItem::Kind::Subquery) continue;
        prefix.push_back(i);
        collectPaths(arc.items[i].subquery.front(), prefix, out);
        prefix.pop_back();
      }
    }
    prefix.pop_back();
  }
}

}  // namespace

QueryTree parseQuery(std::string_view text) { return QueryParser(text).parse(); }

std::string toString(const QueryNode& node) {
  std::string out;
  print(node, out);
  return out;
}

std::string toString(const QueryTree& query) { return toString(query.root); }

json toJson(const QueryTree& query) { return nodeToJson(query.root); }

QueryTree queryFromJson(const json& js) {
  try {
    return QueryTree{nodeFromJson(js)};
  } catch (const json::exception& e) {
    throw QueryError(std::string("malformed query JSON: ") + e.what());
  }
}

void resolve(QueryTree& query, const Ontology& ontology) { resolveNode(query.root, ontology); }

QueryTree parseAndResolve(std::string_view text, const Ontology& ontology) {
  QueryTree q = parseQuery(text);
  resolve(q, ontology);
  return q;
}

FocusPath FocusPath::parse(std::string_view text) {
  FocusPath path;
  text = text::trim(text);
  if (text.empty()) return path;
  for (const auto& part : text::split(text, '.')) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw QueryError("invalid focus path '" + std::string(text) + "'");
    }
    path.steps.push_back(value);
  }
  return path;
}

std::string FocusPath::toString() const {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(steps[i]);
  }
  return out;
}

FocusTarget locate(const QueryTree& query, const FocusPath& focus) {
  const QueryNode* node = &query.root;
  const auto& s = focus.steps;
  std::size_t k = 0;
  while (k < s.size()) {
    if (s[k] >= node->arcs.size()) {
      throw QueryError("focus path '" + focus.toString() + "' names a missing arc");
    }
    const Arc& arc = node->arcs[s[k]];
    std::size_t arcIndex = s[k];
    ++k;
    if (arc.kind == Arc::Kind::Ontology) {
      node = &arc.target.front();
      continue;
    }
    if (k == s.size()) return {FocusKind::OccursWithArc, node, &arc, arcIndex};
    if (s[k] >= arc.items.size() || arc.items[s[k]].kind != OwItem::Kind::Subquery) {
      throw QueryError("focus path '" + focus.toString() +
                       "' does not lead to a class or instance node");
    }
    node = &arc.items[s[k]].subquery.front();
    ++k;
  }
  return {FocusKind::Node, node, nullptr, 0};
}

QueryNode& nodeAt(QueryTree& query, const FocusPath& focus) {
  auto target = locate(query, focus);
  if (target.kind != FocusKind::Node) {
    throw QueryError("focus path '" + focus.toString() + "' names an occurs-with arc, not a node");
  }
  return const_cast<QueryNode&>(*target.node);
}

FocusPath changeFocus(const QueryTree& query, const FocusPath& focus) {
  locate(query, focus);
  return focus;
}

QueryTree changeRoot(const QueryTree& query, const FocusPath& focus) {
  if (locate(query, focus).kind != FocusKind::Node) {
    throw QueryError("cannot re-root at an occurs-with arc or word");
  }
  // Walk down, remembering each node on the way and how it links to the next.
  struct Step {
    QueryNode node;  // with the arc towards the next node removed
    Arc via;         // that removed arc
    std::size_t item = 0;
  };
  std::vector<Step> chain;
  QueryNode current = query.root;
  const auto& s = focus.steps;
  std::size_t k = 0;
  while (k < s.size()) {
    Arc arc = current.arcs[s[k]];
    current.arcs.erase(current.arcs.begin() + static_cast<std::ptrdiff_t>(s[k]));
    ++k;
    QueryNode next;
    std::size_t item = 0;
    if (arc.kind == Arc::Kind::Ontology) {
      next = arc.target.front();
    } else {
      item = s[k++];
      next = arc.items[item].subquery.front();
    }
    chain.push_back({std::move(current), std::move(arc), item});
    current = std::move(next);
  }
  if (chain.empty()) return QueryTree{std::move(current)};
  // Build from the top: the old root loses its arc, each following node gets
  // a reversed arc to the previous one.
  QueryNode upper = std::move(chain.front().node);
  for (std::size_t j = 0; j < chain.size(); ++j) {
    QueryNode lower = (j + 1 < chain.size()) ? std::move(chain[j + 1].node) : std::move(current);
    Arc back = chain[j].via;
    if (back.kind == Arc::Kind::Ontology) {
      back.reversed = !back.reversed;
      back.target.clear();
      back.target.push_back(std::move(upper));
    } else {
      back.items[chain[j].item].subquery.clear();
      back.items[chain[j].item].subquery.push_back(std::move(upper));
    }
    lower.arcs.push_back(std::move(back));
    upper = std::move(lower);
  }
  return QueryTree{std::move(upper)};
}

std::vector<FocusPath> nodePaths(const QueryTree& query) {
  std::vector<FocusPath> out;
  std::vector<std::size_t> prefix;
  collectPaths(query.root, prefix, out);
  return out;
}

}  // namespace ctxsearch
