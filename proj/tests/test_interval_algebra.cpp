#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tilr/interval_algebra.hpp"

using namespace tilr;
using R = BaseRelation;

TEST(Classify, BasicCases) {
  EXPECT_EQ(classify({1, 2}, {3, 4}), R::kBefore);
  EXPECT_EQ(classify({1, 3}, {3, 5}), R::kMeets);
  EXPECT_EQ(classify({1, 4}, {2, 3}), R::kContains);
  EXPECT_EQ(classify({2, 2}, {2, 2}), R::kEqual);
  EXPECT_EQ(classify({1, 5}, {3, 8}), R::kOverlaps);
  EXPECT_EQ(classify({3, 8}, {1, 5}), R::kOverlappedBy);
  EXPECT_EQ(classify({1, 3}, {1, 5}), R::kStarts);
  EXPECT_EQ(classify({3, 5}, {1, 5}), R::kFinishes);
}

TEST(Classify, PointIntervalsFollowPrecedence) {
  // [2,2] vs [2,5] satisfies both the MEETS and STARTS endpoint tests.
  EXPECT_EQ(classify({2, 2}, {2, 5}), R::kStarts);
  EXPECT_EQ(classify({5, 5}, {2, 5}), R::kFinishes);
  EXPECT_EQ(classify({3, 3}, {2, 5}), R::kDuring);
  EXPECT_EQ(classify({1, 1}, {2, 2}), R::kBefore);
}

TEST(Classify, MatchesEndpointOracleAndIsInverseCoherent) {
  const auto iv = oracle::all_intervals(0, 6);
  for (const auto& a : iv)
    for (const auto& b : iv) {
      const auto held = oracle::holding(a, b);
      ASSERT_FALSE(held.empty());
      const R r = classify(a, b);
      EXPECT_EQ(r, held.front()) << a.start << "," << a.end << " vs " << b.start << "," << b.end;
      EXPECT_EQ(classify(b, a), inverse(r));
      if (a.start < a.end && b.start < b.end) EXPECT_EQ(held.size(), 1u);
    }
}

TEST(Inverse, Sets) {
  EXPECT_EQ(inverse(R::kBefore), R::kAfter);
  EXPECT_EQ(inverse(R::kEqual), R::kEqual);
  EXPECT_EQ(inverse_set(RelationSet{R::kMeets, R::kDuring}), (RelationSet{R::kMetBy, R::kContains}));
  for (R r : kAllBaseRelations) EXPECT_EQ(inverse(inverse(r)), r);
}

TEST(Compose, KnownEntries) {
  EXPECT_EQ(compose(R::kBefore, R::kBefore), RelationSet(R::kBefore));
  EXPECT_EQ(compose(R::kMeets, R::kMeets), RelationSet(R::kBefore));
  for (R r : kAllBaseRelations) {
    EXPECT_EQ(compose(r, R::kEqual), RelationSet(r));
    EXPECT_EQ(compose(R::kEqual, r), RelationSet(r));
  }
}

TEST(Compose, MatchesEnumerationOracle) {
  const auto table = oracle::composition_table(0, 8);
  for (R a : kAllBaseRelations)
    for (R b : kAllBaseRelations) {
      EXPECT_EQ(compose(a, b).mask(), table[index_of(a)][index_of(b)])
          << relation_name(a) << " o " << relation_name(b);
    }
}

TEST(Compose, InverseIdentity) {
  for (R a : kAllBaseRelations)
    for (R b : kAllBaseRelations) {
      EXPECT_EQ(inverse_set(compose(a, b)), compose(inverse(b), inverse(a)));
    }
}

TEST(ComposeSets, EdgeCases) {
  EXPECT_EQ(compose_sets(R::kBefore, R::kBefore), RelationSet(R::kBefore));
  EXPECT_TRUE(compose_sets(RelationSet::empty_set(), RelationSet::full()).empty());
  EXPECT_TRUE(compose_sets(RelationSet::full(), RelationSet::empty_set()).empty());
  EXPECT_TRUE(compose_sets(RelationSet::full(), RelationSet::full()).is_full());
}

TEST(RelationSet, Operations) {
  EXPECT_EQ(intersect({R::kBefore, R::kMeets}, {R::kMeets, R::kOverlaps}), RelationSet(R::kMeets));
  EXPECT_EQ(unite(R::kBefore, R::kAfter), (RelationSet{R::kBefore, R::kAfter}));
  const RelationSet s{R::kDuring, R::kFinishes};
  EXPECT_EQ(intersect(s, RelationSet::full()), s);
  EXPECT_EQ(RelationSet::full().size(), 13);
  EXPECT_TRUE(s.subset_of(RelationSet::full()));
  EXPECT_FALSE(RelationSet::full().subset_of(s));
}

TEST(RelationSet, TextRoundTrip) {
  for (R r : kAllBaseRelations) EXPECT_EQ(parse_relation(relation_name(r)), r);
  EXPECT_EQ(parse_relation("SOMETIME"), std::nullopt);
  const RelationSet s{R::kMetBy, R::kBefore, R::kEqual};
  EXPECT_EQ(s.to_string(), "{BEFORE,MET_BY,EQUAL}");
  EXPECT_EQ(RelationSet::parse(s.to_string()), s);
  EXPECT_EQ(RelationSet::parse("{}"), RelationSet::empty_set());
  EXPECT_EQ(RelationSet::parse("{BEFORE,NOPE}"), std::nullopt);
}
