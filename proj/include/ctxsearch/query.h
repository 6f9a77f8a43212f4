#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ctxsearch/ontology.h"
#include "json.hpp"

namespace ctxsearch {

struct QueryNode;

struct NodeRef {
  enum class Kind { Class, Instance };
  Kind kind = Kind::Class;
  std::string name;
  // Filled in by resolve().
  std::uint32_t id = 0;

  bool isClass() const { return kind == Kind::Class; }
  bool operator==(const NodeRef& o) const { return kind == o.kind && name == o.name; }
};

struct OwItem {
  enum class Kind { Word, Prefix, Subquery };
  Kind kind = Kind::Word;
  // Word or prefix text (normalized, without the trailing '*').
  std::string text;
  std::vector<QueryNode> subquery;  // exactly one node iff kind == Subquery

  bool operator==(const OwItem&) const = default;
};

struct Arc {
  enum class Kind { Ontology, OccursWith };
  Kind kind = Kind::Ontology;
  // Ontology arcs.
  std::string relation;
  bool reversed = false;
  std::vector<QueryNode> target;  // exactly one node for ontology arcs
  // Occurs-with arcs.
  std::vector<OwItem> items;

  bool operator==(const Arc&) const = default;
};

struct QueryNode {
  NodeRef ref;
  std::vector<Arc> arcs;

  bool operator==(const QueryNode&) const = default;
};

// A rooted query tree; arcs point away from the root.
struct QueryTree {
  QueryNode root;
  bool operator==(const QueryTree&) const = default;
};

// Grammar:
//   node   := ref arc*
//   ref    := "class:"NAME | "entity:"NAME
//   arc    := "(" RELNAME node ")" | "(occurs-with" owitem+ ")"
//   owitem := WORD | PREFIX"*" | node
// RELNAME may carry the suffix "^-1" for reverse traversal. Throws
// SyntaxError with a byte position.
QueryTree parseQuery(std::string_view text);

// Canonical text form; parseQuery(toString(q)) == q.
std::string toString(const QueryTree& query);
std::string toString(const QueryNode& node);

nlohmann::json toJson(const QueryTree& query);
QueryTree queryFromJson(const nlohmann::json& js);

// Resolves names to ids and checks relation typing: a node's class must
// equal, contain or be contained in the relation's source class (target
// class for reverse traversal), and likewise for the arc's target node.
// Throws QueryError.
void resolve(QueryTree& query, const Ontology& ontology);
QueryTree parseAndResolve(std::string_view text, const Ontology& ontology);

// Path to a node or an occurs-with arc. Steps alternate between an arc index
// and, for occurs-with arcs, the index of a subquery item. Written as dotted
// indices; the empty string is the root.
struct FocusPath {
  std::vector<std::size_t> steps;

  static FocusPath parse(std::string_view text);
  std::string toString() const;
  bool operator==(const FocusPath&) const = default;
};

enum class FocusKind { Node, OccursWithArc };

struct FocusTarget {
  FocusKind kind;
  const QueryNode* node = nullptr;   // the focused node, or the arc's owner
  const Arc* arc = nullptr;          // OccursWithArc only
  std::size_t arcIndex = 0;          // OccursWithArc only
};

// Throws QueryError for a path that does not lead to a class/instance node
// or an occurs-with arc.
FocusTarget locate(const QueryTree& query, const FocusPath& focus);
QueryNode& nodeAt(QueryTree& query, const FocusPath& focus);
// Validates `focus` and returns it; focus only steers suggestions.
FocusPath changeFocus(const QueryTree& query, const FocusPath& focus);

// Re-orients the tree so the node at `focus` becomes the root. Ontology arcs
// on the way flip their traversal direction; an occurs-with arc becomes an
// occurs-with arc of the new root with the former parent as subquery item.
QueryTree changeRoot(const QueryTree& query, const FocusPath& focus);

// Every class/instance node path in the tree, root first.
std::vector<FocusPath> nodePaths(const QueryTree& query);

}  // namespace ctxsearch
