#include <gtest/gtest.h>

#include <set>

#include "ctxsearch/context_list.h"
#include "support/generators.h"
#include "support/oracle.h"

using namespace ctxsearch;

namespace {

EntityId E(std::uint32_t v) { return EntityId{v}; }

ContextList list(std::vector<Posting> p) { return ContextList::fromPostings(std::move(p)); }

}  // namespace

TEST(ContextList, EntitiesSortAfterWords) {
  auto l = list({{1, entityItem(E(0)), 1, 5}, {1, 7, 1, 8}, {0, 3, 1, 1}});
  EXPECT_TRUE(l.isSorted());
  EXPECT_EQ(l.itemIds, (std::vector<std::uint64_t>{3, 7, entityItem(E(0))}));
  EXPECT_EQ(l.contexts(), (std::vector<std::uint64_t>{0, 1}));
}

TEST(ContextList, EntitiesInContextsSumsScores) {
  auto l = list({{0, entityItem(E(2)), 2, 1}, {1, entityItem(E(2)), 3, 1}, {1, entityItem(E(5)), 1, 2}});
  auto all = entitiesInContexts(l);
  EXPECT_EQ(all.ids, (std::vector<EntityId>{E(2), E(5)}));
  EXPECT_EQ(all.scores, (std::vector<std::uint64_t>{5, 1}));
  std::vector<EntityId> only{E(5)};
  EXPECT_EQ(entitiesInContexts(l, only).ids, only);
}

TEST(ContextList, FilterKeepsWholeContextsAndFlagsWitnesses) {
  auto l = list({{0, 1, 1, 1}, {0, entityItem(E(1)), 1, 2}, {1, 1, 1, 1}, {1, entityItem(E(2)), 1, 2}});
  auto f = filterContextsByEntities(l, EntityList::fromIds({E(2)}));
  EXPECT_EQ(f.contexts(), (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(f.size(), 2u);
  EXPECT_EQ(f.witness, (std::vector<std::uint8_t>{0, 1}));
  EXPECT_TRUE(filterContextsByEntities(l, EntityList{}).empty());
}

TEST(ContextList, IntersectAndMerge) {
  auto a = list({{0, 1, 1, 1}, {2, 1, 1, 1}, {3, 1, 1, 1}});
  auto b = list({{2, 4, 1, 2}, {3, 4, 1, 3}, {5, 4, 1, 1}});
  std::vector<ContextList> both{a, b};
  auto i = intersect(both);
  EXPECT_EQ(i.contexts(), (std::vector<std::uint64_t>{2, 3}));
  EXPECT_EQ(i.size(), 4u);
  auto m = merge(both);
  EXPECT_EQ(m.size(), 6u);
  EXPECT_TRUE(m.isSorted());
  EXPECT_TRUE(intersect(std::span<const ContextList>{}).empty());
}

// Property: both index operations agree with brute force on random lists.
TEST(ContextListProperty, OperationsMatchBruteForce) {
  test::Rng rng(11);
  for (int round = 0; round < 2000; ++round) {
    auto l = test::randomContextList(rng, 30, 20, 12, 120);
    std::set<EntityId> chosen;
    for (std::uint32_t e = 0; e < 12; ++e) {
      if (rng() % 3 == 0) chosen.insert(E(e));
    }
    std::vector<EntityId> chosenVec(chosen.begin(), chosen.end());

    auto got = entitiesInContexts(l);
    auto want = test::naiveEntitiesInContexts(l, std::nullopt);
    ASSERT_EQ(got.size(), want.size());
    std::size_t k = 0;
    for (auto [e, s] : want) {
      ASSERT_EQ(got.ids[k], e);
      ASSERT_EQ(got.scores[k], s);
      ++k;
    }
    auto restricted = entitiesInContexts(l, chosenVec);
    auto wantRestricted = test::naiveEntitiesInContexts(l, chosen);
    ASSERT_EQ(restricted.size(), wantRestricted.size());

    auto filtered = filterContextsByEntities(l, EntityList::fromIds(chosenVec));
    ASSERT_EQ(filtered.postings(), test::naiveFilterContextsByEntities(l, chosen));
    ASSERT_TRUE(filtered.isSorted());
  }
}

// Property: intersect keeps exactly the postings of common contexts.
TEST(ContextListProperty, IntersectMatchesBruteForce) {
  test::Rng rng(12);
  for (int round = 0; round < 1000; ++round) {
    std::vector<ContextList> lists;
    for (int i = 0; i < 3; ++i) lists.push_back(test::randomContextList(rng, 15, 10, 5, 40));
    std::set<std::uint64_t> common;
    for (auto c : lists[0].contexts()) common.insert(c);
    for (const auto& l : lists) {
      auto cs = l.contexts();
      std::set<std::uint64_t> next;
      for (auto c : cs) {
        if (common.contains(c)) next.insert(c);
      }
      common = next;
    }
    std::vector<Posting> want;
    for (const auto& l : lists) {
      for (const auto& p : l.postings()) {
        if (common.contains(p.contextId)) want.push_back(p);
      }
    }
    ASSERT_EQ(intersect(lists), ContextList::fromPostings(want));
  }
}
