#include "ctxsearch/context_list.h"

#include <algorithm>

namespace ctxsearch {

void ContextList::push(const Posting& p, bool isWitness) {
  contextIds.push_back(p.contextId);
  itemIds.push_back(p.itemId);
  scores.push_back(p.score);
  positions.push_back(p.position);
  witness.push_back(isWitness ? 1 : 0);
}

void ContextList::reserve(std::size_t n) {
  contextIds.reserve(n);
  itemIds.reserve(n);
  scores.reserve(n);
  positions.reserve(n);
  witness.reserve(n);
}

std::vector<Posting> ContextList::postings() const {
  std::vector<Posting> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i]);
  return out;
}

ContextList ContextList::fromPostings(std::vector<Posting> postings) {
  std::sort(postings.begin(), postings.end(), [](const Posting& a, const Posting& b) {
    return std::tie(a.contextId, a.itemId, a.position, a.score) <
           std::tie(b.contextId, b.itemId, b.position, b.score);
  });
  postings.erase(std::unique(postings.begin(), postings.end()), postings.end());
  ContextList out;
  out.reserve(postings.size());
  for (const auto& p : postings) out.push(p);
  return out;
}

std::vector<std::uint64_t> ContextList::contexts() const {
  std::vector<std::uint64_t> out;
  for (auto c : contextIds) {
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  return out;
}

bool ContextList::isSorted() const {
  for (std::size_t i = 1; i < size(); ++i) {
    auto a = std::tie(contextIds[i - 1], itemIds[i - 1], positions[i - 1]);
    auto b = std::tie(contextIds[i], itemIds[i], positions[i]);
    if (b < a) return false;
  }
  return true;
}

bool EntityList::contains(EntityId e) const {
  return std::binary_search(ids.begin(), ids.end(), e);
}

EntityList EntityList::fromIds(std::vector<EntityId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  EntityList out;
  out.scores.assign(ids.size(), 1);
  out.ids = std::move(ids);
  return out;
}

EntityList entitiesInContexts(const ContextList& list,
                              std::optional<std::span<const EntityId>> restrictTo) {
  std::vector<std::pair<EntityId, std::uint64_t>> hits;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (!isEntityItem(list.itemIds[i])) continue;
    EntityId e = itemEntity(list.itemIds[i]);
    if (restrictTo && !std::binary_search(restrictTo->begin(), restrictTo->end(), e)) continue;
    hits.emplace_back(e, list.scores[i]);
  }
  std::sort(hits.begin(), hits.end());
  EntityList out;
  for (const auto& [e, s] : hits) {
    if (!out.ids.empty() && out.ids.back() == e) {
      out.scores.back() += s;
    } else {
      out.ids.push_back(e);
      out.scores.push_back(s);
    }
  }
  return out;
}

ContextList filterContextsByEntities(const ContextList& list, const EntityList& entities) {
  ContextList out;
  if (entities.empty()) return out;
  std::size_t i = 0;
  while (i < list.size()) {
    std::size_t j = i;
    bool keep = false;
    while (j < list.size() && list.contextIds[j] == list.contextIds[i]) {
      if (isEntityItem(list.itemIds[j]) && entities.contains(itemEntity(list.itemIds[j]))) {
        keep = true;
      }
      ++j;
    }
    if (keep) {
      for (std::size_t k = i; k < j; ++k) {
        bool w = isEntityItem(list.itemIds[k]) && entities.contains(itemEntity(list.itemIds[k]));
        out.push(list[k], w || list.witness[k]);
      }
    }
    i = j;
  }
  return out;
}

ContextList intersect(std::span<const ContextList> lists) {
  if (lists.empty()) return {};
  if (lists.size() == 1) return lists.front();
  std::vector<std::uint64_t> common = lists.front().contexts();
  for (std::size_t l = 1; l < lists.size() && !common.empty(); ++l) {
    auto other = lists[l].contexts();
    std::vector<std::uint64_t> next;
    std::set_intersection(common.begin(), common.end(), other.begin(), other.end(),
                          std::back_inserter(next));
    common = std::move(next);
  }
  if (common.empty()) return {};
  std::vector<Posting> gathered;
  for (const auto& list : lists) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      while (c < common.size() && common[c] < list.contextIds[i]) ++c;
      if (c == common.size()) break;
      if (common[c] == list.contextIds[i]) gathered.push_back(list[i]);
    }
  }
  return ContextList::fromPostings(std::move(gathered));
}

ContextList merge(std::span<const ContextList> lists) {
  if (lists.size() == 1) return lists.front();
  std::vector<Posting> all;
  for (const auto& list : lists) {
    for (std::size_t i = 0; i < list.size(); ++i) all.push_back(list[i]);
  }
  return ContextList::fromPostings(std::move(all));
}

}  // namespace ctxsearch
