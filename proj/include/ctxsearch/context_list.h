#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ctxsearch/ontology.h"

namespace ctxsearch {

// Item ids at or above this value denote entities, so sorting by item id puts
// entities after words.
inline constexpr std::uint64_t kEntityBase = std::uint64_t{1} << 40;

inline constexpr std::uint64_t entityItem(EntityId e) { return kEntityBase + e.value; }
inline constexpr bool isEntityItem(std::uint64_t item) { return item >= kEntityBase; }
inline constexpr EntityId itemEntity(std::uint64_t item) {
  return EntityId{static_cast<std::uint32_t>(item - kEntityBase)};
}

struct Posting {
  std::uint64_t contextId = 0;
  std::uint64_t itemId = 0;
  std::uint64_t score = 0;
  std::uint64_t position = 0;

  auto operator<=>(const Posting&) const = default;
};

// Postings in four parallel columns, sorted by (context id, item id,
// position). Entity postings that witnessed a filter are flagged.
class ContextList {
 public:
  std::vector<std::uint64_t> contextIds;
  std::vector<std::uint64_t> itemIds;
  std::vector<std::uint64_t> scores;
  std::vector<std::uint64_t> positions;
  std::vector<std::uint8_t> witness;

  std::size_t size() const { return contextIds.size(); }
  bool empty() const { return contextIds.empty(); }
  Posting operator[](std::size_t i) const {
    return {contextIds[i], itemIds[i], scores[i], positions[i]};
  }
  void push(const Posting& p, bool isWitness = false);
  void reserve(std::size_t n);
  std::vector<Posting> postings() const;
  static ContextList fromPostings(std::vector<Posting> postings);

  // Distinct context ids, ascending.
  std::vector<std::uint64_t> contexts() const;
  bool isSorted() const;

  bool operator==(const ContextList& o) const {
    return contextIds == o.contextIds && itemIds == o.itemIds && scores == o.scores &&
           positions == o.positions;
  }
};

// Entities with aggregated scores, sorted by id and unique.
struct EntityList {
  std::vector<EntityId> ids;
  std::vector<std::uint64_t> scores;

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
  bool contains(EntityId e) const;
  static EntityList fromIds(std::vector<EntityId> ids);
};

// Entities occurring in the contexts of `list`, each scored by the sum of its
// posting scores; optionally only those in the sorted `restrictTo`.
EntityList entitiesInContexts(const ContextList& list,
                              std::optional<std::span<const EntityId>> restrictTo = std::nullopt);

// Postings of the contexts that contain at least one entity of `entities`;
// the matching entity postings are flagged as witnesses.
ContextList filterContextsByEntities(const ContextList& list, const EntityList& entities);

// Postings of the contexts present in every input. Word postings of all
// inputs are merged; duplicate postings collapse.
ContextList intersect(std::span<const ContextList> lists);

// Sorted union of several lists, duplicate postings collapsed.
ContextList merge(std::span<const ContextList> lists);

}  // namespace ctxsearch
