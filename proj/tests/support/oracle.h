#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "ctxsearch/context.h"
#include "ctxsearch/context_list.h"
#include "ctxsearch/ontology.h"
#include "ctxsearch/query.h"

namespace ctxsearch::test {

// Reference semantics by scanning every context and fact. No index.
std::set<EntityId> naiveEvaluate(const QueryNode& node, const std::vector<Context>& contexts,
                                 const Ontology& ontology);

// Brute-force counterparts of the context-list operations.
std::map<EntityId, std::uint64_t> naiveEntitiesInContexts(
    const ContextList& list, const std::optional<std::set<EntityId>>& restrictTo);
std::vector<Posting> naiveFilterContextsByEntities(const ContextList& list,
                                                   const std::set<EntityId>& entities);

}  // namespace ctxsearch::test
