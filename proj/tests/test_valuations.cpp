#include "bidfair/bidfair.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bidfair;

TEST(Marginal, AdditiveUnitDemandAndRows) {
  const AdditiveValuation add({5, 2});
  EXPECT_EQ(marginal(add, 1, ItemSet(2, {0})), Rational(2));
  const UnitDemandValuation ud({5, 2});
  EXPECT_EQ(marginal(ud, 1, ItemSet(2, {0})), Rational(0));
  // 2x2 grid, rows {0,1} and {2,3}.
  const RowSubstitutesValuation rows(4, {{1, {0, 1}}, {1, {2, 3}}});
  EXPECT_EQ(marginal(rows, 1, ItemSet(4, {0})), Rational(0));
  EXPECT_EQ(marginal(rows, 2, ItemSet(4, {0})), Rational(1));
  EXPECT_THROW(marginal(add, 0, ItemSet(2, {0})), std::invalid_argument);
}

TEST(Valuations, RejectMalformedInput) {
  EXPECT_THROW(AdditiveValuation({1, -1}), std::invalid_argument);
  EXPECT_THROW(XOSValuation(2, {}), std::invalid_argument);
  EXPECT_THROW(XOSValuation(2, {{1}}), std::invalid_argument);
  EXPECT_THROW(RowSubstitutesValuation(3, {{1, {0, 1}}, {1, {1, 2}}}), std::invalid_argument);
  EXPECT_THROW(RowSubstitutesValuation(2, {{-1, {0}}}), std::invalid_argument);
  EXPECT_THROW(WeightedCoverageValuation({1}, {{0, 1}}), std::invalid_argument);
  EXPECT_THROW(ScaledValuation(std::make_shared<AdditiveValuation>(std::vector<Rational>{1}), 0),
               std::invalid_argument);
}

TEST(Valuations, EvaluateStructuredClasses) {
  const XOSValuation xos(3, {{1, 1, 0}, {0, 0, 3}});
  EXPECT_EQ(xos.value(ItemSet(3, {0, 1, 2})), Rational(3));
  EXPECT_EQ(xos.value(ItemSet(3, {0, 1})), Rational(2));
  const WeightedCoverageValuation cov({2, 3, 5}, {{0, 1}, {1, 2}});
  EXPECT_EQ(cov.value(ItemSet(2, {0, 1})), Rational(10));
  EXPECT_EQ(cov.value(ItemSet(2, {1})), Rational(8));
  const TableValuation table(2, {{ItemSet(2, {0}), 4}});
  EXPECT_EQ(table.value(ItemSet(2, {0})), Rational(4));
  EXPECT_EQ(table.value(ItemSet(2, {1})), Rational(0));
}

TEST(Valuations, QueryCounter) {
  const AdditiveValuation v({1, 2, 3});
  v.reset_query_count();
  (void)v.value(ItemSet(3, {0}));
  (void)v.value(ItemSet(3, {1}));
  EXPECT_EQ(v.query_count(), 2U);
  // Exhaustive checks issue exactly 2^m queries.
  v.reset_query_count();
  EXPECT_TRUE(is_submodular(v, ItemSet::full(3)));
  EXPECT_EQ(v.query_count(), 8U);
}

TEST(IsSubmodular, StructuredClasses) {
  EXPECT_TRUE(is_submodular(AdditiveValuation({3, 1, 4, 1, 5}), ItemSet::full(5)));
  EXPECT_TRUE(is_submodular(UnitDemandValuation({3, 1, 4, 1, 5}), ItemSet::full(5)));
  const auto run = gen_altruistic_negative(1);
  EXPECT_TRUE(is_submodular(*run.instance.agent(0).valuation, run.instance.items()));
  const auto orig = gen_original_negative(1);
  EXPECT_TRUE(is_submodular(*orig.instance.agent(0).valuation, orig.instance.items()));
  const auto mod = gen_modified_negative(1);
  EXPECT_TRUE(is_submodular(*mod.instance.agent(0).valuation, mod.instance.items()));
}

// Columns {0, 2} and {1, 3}: item 0 adds nothing to {1} but adds 1 to {1, 2}.
TEST(IsSubmodular, XosColumnsAreNot) {
  const XOSValuation cols(4, {{1, 0, 1, 0}, {0, 1, 0, 1}});
  const ItemSet all = ItemSet::full(4);
  EXPECT_FALSE(is_submodular(cols, all));
  EXPECT_FALSE(oracle::submodular_brute(cols, all));
  const auto run = gen_xos_hard(16, 2);
  const auto& v = *run.instance.agent(0).valuation;
  // e1_1, e1_2, e2_1, e2_2: a 2x2 sub-grid.
  ItemSet sub(run.instance.ground_size());
  for (const char* name : {"e1_1", "e1_2", "e2_1", "e2_2"}) sub.insert(run.instance.item_index(name));
  EXPECT_FALSE(is_submodular(v, sub));
}

TEST(IsSubmodular, AgreesWithDefinitionOnRandomCoverage) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Instance inst = gen_random_submodular(seed, 1, 6, 5);
    const auto& v = *inst.agent(0).valuation;
    EXPECT_TRUE(is_submodular(v, inst.items()));
    EXPECT_TRUE(oracle::submodular_brute(v, inst.items()));
    EXPECT_TRUE(is_monotone_normalized(v, inst.items()));
  }
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<Rational>> clauses(3, std::vector<Rational>(5));
    for (auto& c : clauses)
      for (auto& x : c) x = Rational(static_cast<long>(rng() % 4));
    const XOSValuation v(5, clauses);
    EXPECT_EQ(is_submodular(v, ItemSet::full(5)), oracle::submodular_brute(v, ItemSet::full(5))) << seed;
  }
}

TEST(IsSubmodular, SizeGuard) {
  const AdditiveValuation v(std::vector<Rational>(13, Rational(1)));
  EXPECT_THROW(is_submodular(v, ItemSet::full(13)), SizeGuardError);
  EXPECT_NO_THROW(is_submodular(v, ItemSet::full(13), SizeGuard{13}));
}

TEST(IsMonotoneNormalized, Fixtures) {
  EXPECT_TRUE(is_monotone_normalized(AdditiveValuation({1, 0, 2}), ItemSet::full(3)));
  const TableValuation nonzero_empty(2, {{ItemSet(2), 1}, {ItemSet(2, {0}), 1}, {ItemSet(2, {1}), 1}, {ItemSet::full(2), 1}});
  EXPECT_FALSE(is_monotone_normalized(nonzero_empty, ItemSet::full(2)));
  const TableValuation decreasing(2, {{ItemSet(2, {0}), 2}, {ItemSet::full(2), 1}});
  EXPECT_FALSE(is_monotone_normalized(decreasing, ItemSet::full(2)));
}
