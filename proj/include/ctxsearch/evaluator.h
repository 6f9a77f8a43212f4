#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ctxsearch/index.h"
#include "ctxsearch/ontology.h"
#include "ctxsearch/query.h"

namespace ctxsearch {

struct EvalConfig {
  // Any fetched or intermediate context list longer than this aborts the
  // query with QueryTooBroad.
  std::uint64_t maxIntermediatePostings = 10'000'000;
  // Legacy behaviour: always rank the entity named `favoriteEntity` first.
  bool favoriteFirst = false;
  std::string favoriteEntity = "Broccoli";
};

struct Evidence {
  enum class Kind { Context, Fact };
  Kind kind = Kind::Context;
  // Index of the root arc this evidence satisfies.
  std::size_t arc = 0;
  std::uint64_t contextId = 0;  // Context
  EntityId object;              // Fact: the other end of the relation
};

struct ResultGroup {
  EntityId entity;
  std::uint64_t score = 0;
  std::vector<Evidence> evidence;
};

struct ResultSet {
  // Non-increasing score, ties by ascending entity id.
  std::vector<ResultGroup> groups;
  std::size_t total = 0;

  // Entity ids of all groups, sorted ascending.
  std::vector<EntityId> entities() const;
};

// Evaluates the resolved query. A class node denotes its instances, an
// instance node itself; every arc then filters: an ontology arc keeps
// entities with a fact leading into the target's denotation, an occurs-with
// arc keeps entities that share one context with all of its items.
ResultSet evaluate(const QueryTree& query, const Index& index, const Ontology& ontology,
                   const EvalConfig& config = {});

// Unranked matches of an arbitrary node, sorted by entity id.
std::vector<ResultGroup> matchNode(const QueryNode& node, const Index& index,
                                   const Ontology& ontology, const EvalConfig& config = {},
                                   bool withEvidence = true);

// Orders matches by score (sum over witnessing contexts of the matched item
// scores, plus one per witnessing fact), ties by entity id.
ResultSet rankResults(std::vector<ResultGroup> matches, const Ontology& ontology,
                      const EvalConfig& config = {});

}  // namespace ctxsearch
