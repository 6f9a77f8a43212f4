#include "ctxsearch/evaluator.h"

#include <algorithm>

#include "ctxsearch/error.h"

namespace ctxsearch {

namespace {

class Evaluator {
 public:
  Evaluator(const Index& index, const Ontology& ontology, const EvalConfig& config)
      : index_(index), ontology_(ontology), config_(config) {}

  std::vector<ResultGroup> run(const QueryNode& node, bool withEvidence) {
    std::vector<ResultGroup> acc;
    if (node.ref.isClass()) {
      for (EntityId e : ontology_.instancesOf(ClassId{node.ref.id})) acc.push_back({e, 0, {}});
    } else {
      acc.push_back({EntityId{node.ref.id}, 0, {}});
    }
    for (std::size_t a = 0; a < node.arcs.size() && !acc.empty(); ++a) {
      const Arc& arc = node.arcs[a];
      if (arc.kind == Arc::Kind::Ontology) {
        applyOntologyArc(arc, a, acc, withEvidence);
      } else {
        applyOccursWith(arc, a, acc, withEvidence);
      }
    }
    return acc;
  }

  std::vector<EntityId> ids(const QueryNode& node) {
    std::vector<EntityId> out;
    for (const auto& g : run(node, false)) out.push_back(g.entity);
    return out;
  }

 private:
  void checkLimit(const ContextList& list) const {
    if (list.size() > config_.maxIntermediatePostings) {
      throw QueryTooBroad("intermediate result of " + std::to_string(list.size()) +
                          " postings exceeds the limit of " +
                          std::to_string(config_.maxIntermediatePostings) +
                          "; refine your query");
    }
  }

  void applyOntologyArc(const Arc& arc, std::size_t arcIndex, std::vector<ResultGroup>& acc,
                        bool withEvidence) {
    const RelationLists* rel = index_.relation(arc.relation);
    if (rel == nullptr) throw QueryError("unknown relation '" + arc.relation + "'");
    const auto& pairs = arc.reversed ? rel->reverse : rel->forward;
    std::vector<EntityId> targets = ids(arc.target.front());
    std::vector<ResultGroup> kept;
    for (auto& g : acc) {
      auto lo = std::lower_bound(pairs.begin(), pairs.end(), std::pair{g.entity, EntityId{0}});
      std::uint64_t facts = 0;
      for (auto it = lo; it != pairs.end() && it->first == g.entity; ++it) {
        if (!std::binary_search(targets.begin(), targets.end(), it->second)) continue;
        ++facts;
        if (withEvidence) {
          g.evidence.push_back({Evidence::Kind::Fact, arcIndex, 0, it->second});
        }
      }
      if (facts == 0) continue;
      g.score += facts;
      kept.push_back(std::move(g));
    }
    acc = std::move(kept);
  }

  void applyOccursWith(const Arc& arc, std::size_t arcIndex, std::vector<ResultGroup>& acc,
                       bool withEvidence) {
    std::vector<ContextList> lists;
    std::vector<const QueryNode*> subqueries;
    for (const auto& item : arc.items) {
      switch (item.kind) {
        case OwItem::Kind::Word: lists.push_back(index_.fetchWord(item.text)); break;
        case OwItem::Kind::Prefix: lists.push_back(index_.fetchPrefix(item.text)); break;
        case OwItem::Kind::Subquery: subqueries.push_back(&item.subquery.front()); break;
      }
      if (!lists.empty()) checkLimit(lists.back());
    }
    ContextList contexts = lists.empty() ? index_.entityOccurrences() : intersect(lists);
    checkLimit(contexts);
    for (const QueryNode* sub : subqueries) {
      if (contexts.empty()) break;
      contexts = filterContextsByEntities(contexts, EntityList::fromIds(ids(*sub)));
    }

    std::vector<EntityId> alive;
    alive.reserve(acc.size());
    for (const auto& g : acc) alive.push_back(g.entity);
    EntityList present = entitiesInContexts(contexts, std::span<const EntityId>(alive));

    // Per context: matched word scores plus one per subquery item, credited
    // to every surviving entity in it.
    std::vector<std::uint64_t> gained(acc.size(), 0);
    std::vector<std::vector<std::uint64_t>> witnessed(acc.size());
    std::size_t i = 0;
    std::vector<std::size_t> members;
    while (i < contexts.size()) {
      std::size_t j = i;
      std::uint64_t wordScore = 0;
      members.clear();
      for (; j < contexts.size() && contexts.contextIds[j] == contexts.contextIds[i]; ++j) {
        auto item = contexts.itemIds[j];
        if (!isEntityItem(item)) {
          wordScore += contexts.scores[j];
          continue;
        }
        EntityId e = itemEntity(item);
        if (!present.contains(e)) continue;
        auto pos = static_cast<std::size_t>(std::lower_bound(alive.begin(), alive.end(), e) -
                                            alive.begin());
        if (std::find(members.begin(), members.end(), pos) == members.end()) {
          members.push_back(pos);
        }
      }
      for (auto m : members) {
        gained[m] += wordScore + subqueries.size();
        witnessed[m].push_back(contexts.contextIds[i]);
      }
      i = j;
    }

    std::vector<ResultGroup> kept;
    for (std::size_t k = 0; k < acc.size(); ++k) {
      if (!present.contains(acc[k].entity)) continue;
      acc[k].score += gained[k];
      if (withEvidence) {
        for (auto cid : witnessed[k]) {
          acc[k].evidence.push_back({Evidence::Kind::Context, arcIndex, cid, {}});
        }
      }
      kept.push_back(std::move(acc[k]));
    }
    acc = std::move(kept);
  }

  const Index& index_;
  const Ontology& ontology_;
  const EvalConfig& config_;
};

}  // namespace

std::vector<EntityId> ResultSet::entities() const {
  std::vector<EntityId> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(g.entity);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ResultGroup> matchNode(const QueryNode& node, const Index& index,
                                   const Ontology& ontology, const EvalConfig& config,
                                   bool withEvidence) {
  return Evaluator(index, ontology, config).run(node, withEvidence);
}

ResultSet rankResults(std::vector<ResultGroup> matches, const Ontology& ontology,
                      const EvalConfig& config) {
  std::sort(matches.begin(), matches.end(), [](const ResultGroup& a, const ResultGroup& b) {
    return a.score != b.score ? a.score > b.score : a.entity < b.entity;
  });
  if (config.favoriteFirst) {
    if (auto fav = ontology.findEntity(config.favoriteEntity)) {
      auto it = std::find_if(matches.begin(), matches.end(),
                             [&](const ResultGroup& g) { return g.entity == *fav; });
      if (it != matches.end()) std::rotate(matches.begin(), it, it + 1);
    }
  }
  ResultSet rs;
  rs.total = matches.size();
  rs.groups = std::move(matches);
  return rs;
}

ResultSet evaluate(const QueryTree& query, const Index& index, const Ontology& ontology,
                   const EvalConfig& config) {
  return rankResults(matchNode(query.root, index, ontology, config, true), ontology, config);
}

}  // namespace ctxsearch
