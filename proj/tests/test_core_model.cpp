#include "bidfair/bidfair.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace bidfair;

namespace {

ValuationPtr additive(std::vector<Rational> v) { return std::make_shared<AdditiveValuation>(std::move(v)); }

Instance equal_instance(std::size_t n, std::vector<Rational> values) {
  std::vector<std::string> names;
  for (std::size_t e = 0; e < values.size(); ++e) names.push_back("e" + std::to_string(e + 1));
  auto v = additive(values);
  std::vector<Agent> agents;
  for (std::size_t i = 0; i < n; ++i) agents.push_back({"a" + std::to_string(i + 1), Entitlement(Rational(1, n)), v});
  return Instance(names, agents);
}

}  // namespace

TEST(Rational, ParsesAndFormatsCanonically) {
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-2"), Rational(-2));
  EXPECT_EQ(format_rational(Rational(6, 4)), "3/2");
  EXPECT_EQ(format_rational(Rational(5)), "5/1");
  EXPECT_THROW(parse_rational("0.5"), ParseError);
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("1/-2"), ParseError);
  EXPECT_THROW(parse_rational(""), ParseError);
}

TEST(ItemSet, SetAlgebraAndOrder) {
  ItemSet a(5, {0, 2});
  ItemSet b(5, {2, 3});
  EXPECT_EQ((a | b).items(), (std::vector<ItemId>{0, 2, 3}));
  EXPECT_EQ((a & b).items(), (std::vector<ItemId>{2}));
  EXPECT_EQ((a - b).items(), (std::vector<ItemId>{0}));
  EXPECT_TRUE(a.intersects(b));
  EXPECT_EQ(a.first(), 0U);
  EXPECT_EQ(a.next(0), 2U);
  EXPECT_EQ(ItemSet(5).first(), ItemSet::npos);
  EXPECT_EQ(ItemSet::from_mask({1, 3, 4}, 5, 0b101).items(), (std::vector<ItemId>{1, 4}));
}

TEST(Entitlement, RejectsOutOfRange) {
  EXPECT_THROW(Entitlement(Rational(0)), InstanceError);
  EXPECT_THROW(Entitlement(Rational(3, 2)), InstanceError);
  EXPECT_NO_THROW(Entitlement(Rational(1)));
}

TEST(Instance, ValidatesStructure) {
  auto v = additive({1, 1});
  EXPECT_THROW(Instance({"x", "x"}, {{"a", Entitlement(Rational(1)), v}}), InstanceError);
  EXPECT_THROW(Instance({"x", "y"}, {{"a", Entitlement(Rational(1, 2)), v}}), InstanceError);
  EXPECT_THROW(Instance({"x", "y"}, {{"a", Entitlement(Rational(1, 2)), v}, {"a", Entitlement(Rational(1, 2)), v}}),
               InstanceError);
  EXPECT_THROW(Instance({"x"}, {{"a", Entitlement(Rational(1)), v}}), InstanceError);
  const Instance ok({"x", "y"}, {{"a", Entitlement(Rational(1, 3)), v}, {"b", Entitlement(Rational(2, 3)), v}});
  EXPECT_EQ(ok.agent_index("b"), 1U);
  EXPECT_EQ(ok.item_index("y"), 1U);
  EXPECT_FALSE(ok.equal_entitlements());
}

TEST(ReduceInstance, EqualEntitlementsRescale) {
  const Instance inst = equal_instance(3, {1, 2, 3});
  const Instance r = reduce_instance(inst, 0, 0);
  ASSERT_EQ(r.agent_count(), 2U);
  EXPECT_EQ(r.agent(0).entitlement.value(), Rational(1, 2));
  EXPECT_EQ(r.agent(1).entitlement.value(), Rational(1, 2));
  EXPECT_EQ(r.items().items(), (std::vector<ItemId>{1, 2}));
}

TEST(ReduceInstance, ScalesByInverseComplement) {
  auto v = additive({1, 1});
  const Instance inst({"x", "y"}, {{"a", Entitlement(Rational(1, 2)), v},
                                   {"b", Entitlement(Rational(1, 4)), v},
                                   {"c", Entitlement(Rational(1, 4)), v}});
  const Instance r = reduce_instance(inst, 0, 1);
  EXPECT_EQ(r.agent(0).entitlement.value(), Rational(1, 2));
  EXPECT_EQ(r.agent(1).entitlement.value(), Rational(1, 2));
}

TEST(ReduceInstance, Errors) {
  auto v = additive({1, 1});
  const Instance solo({"x", "y"}, {{"a", Entitlement(Rational(1)), v}});
  EXPECT_THROW(reduce_instance(solo, 0, 0), InstanceError);
  const Instance inst = equal_instance(2, {1, 1});
  EXPECT_THROW(reduce_instance(inst, 5, 0), InstanceError);
  EXPECT_THROW(reduce_instance(reduce_instance(inst, 0, 0), 0, 0), InstanceError);
}

// A survivor j with b_j <= b_i never loses APS when agent i leaves with one item.
TEST(ReduceInstance, ApsMonotoneForSmallerSurvivors) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = gen_random_submodular(seed, 2 + seed % 2, 3 + seed % 4, 6, seed % 2 == 0);
    for (AgentIndex i = 0; i < inst.agent_count(); ++i) {
      const Rational bi = inst.agent(i).entitlement.value();
      inst.items().for_each([&](ItemId e) {
        const Instance r = reduce_instance(inst, i, e);
        for (AgentIndex j = 0, rj = 0; j < inst.agent_count(); ++j) {
          if (j == i) continue;
          const Agent& a = inst.agent(j);
          if (a.entitlement.value() <= bi) {
            const auto before = aps_exact(*a.valuation, a.entitlement.value(), inst.items()).value;
            const auto after = aps_exact(*a.valuation, r.agent(rj).entitlement.value(), r.items()).value;
            EXPECT_GE(after, before) << "seed " << seed;
            ++checked;
          }
          ++rj;
        }
      });
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(TruncateValuation, CapsValues) {
  auto t = truncate_valuation(additive({3, 2}), 4);
  EXPECT_EQ(t->value(ItemSet(2, {0, 1})), Rational(4));
  EXPECT_EQ(t->value(ItemSet(2, {1})), Rational(2));
  auto z = truncate_valuation(additive({3, 2}), 0);
  EXPECT_EQ(z->value(ItemSet(2, {0, 1})), Rational(0));
  EXPECT_THROW(truncate_valuation(additive({1}), -1), std::invalid_argument);
}

TEST(TruncateValuation, PreservesSubmodularityAndFixesShares) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Instance inst = gen_random_submodular(seed, 2, 5, 6, true);
    const auto& v = inst.agent(0).valuation;
    const Rational b = inst.agent(0).entitlement.value();
    const Rational aps = aps_exact(*v, b, inst.items()).value;
    const Rational mms = mms_exact(*v, 2, inst.items()).value;
    auto vt = truncate_valuation(v, aps);
    EXPECT_TRUE(is_submodular(*vt, inst.items()));
    EXPECT_EQ(aps_exact(*vt, b, inst.items()).value, aps);
    EXPECT_EQ(mms_exact(*truncate_valuation(v, mms), 2, inst.items()).value, mms);
    const Rational lower = aps / 2;
    EXPECT_EQ(aps_exact(*truncate_valuation(v, lower), b, inst.items()).value, lower);
  }
}

TEST(ResidualInstance, NoRoundsIsIdentity) {
  const Instance inst = equal_instance(2, {1, 1, 1});
  const auto r = residual_instance(inst, GameState::initial(inst));
  EXPECT_EQ(r.gamma, Rational(1));
  EXPECT_EQ(r.instance.agent_count(), 2U);
  EXPECT_EQ(r.instance.items(), inst.items());
  EXPECT_EQ(r.instance.agent(1).entitlement.value(), Rational(1, 2));
}

TEST(ResidualInstance, DropsSpentAgent) {
  const Instance inst = equal_instance(3, {1, 1, 1, 1});
  GameState s = GameState::initial(inst);
  s.budgets[0] = 0;
  s.active[0] = false;
  s.remaining.erase(0);
  s.bundles[0].insert(0);
  const auto r = residual_instance(inst, s);
  EXPECT_EQ(r.gamma, Rational(2, 3));
  ASSERT_EQ(r.instance.agent_count(), 2U);
  EXPECT_EQ(r.instance.agent(0).entitlement.value(), Rational(1, 2));
  EXPECT_EQ(r.origin, (std::vector<AgentIndex>{1, 2}));
  EXPECT_FALSE(r.instance.items().contains(0));
}

TEST(ResidualInstance, NoActiveBudgetIsAnError) {
  const Instance inst = equal_instance(1, {1});
  GameState s = GameState::initial(inst);
  s.active[0] = false;
  EXPECT_THROW(residual_instance(inst, s), GameError);
}

// An opponent spends her whole budget on one item of the k=1 original construction; p's
// APS in the residual instance, with v_p truncated at her APS, is unchanged.
TEST(ResidualInstance, ApsPreservedOnSylvesterPrefix) {
  const auto run = gen_original_negative(1);
  const Instance& inst = run.instance;
  const auto& v = inst.agent(0).valuation;
  const Rational aps = aps_exact(*v, Rational(1, 2), inst.items()).value;
  EXPECT_EQ(aps, Rational(2));
  EXPECT_EQ(aps, oracle::aps_scan(*v, Rational(1, 2), inst.items()));

  GameState s = GameState::initial(inst);
  const ItemId taken = inst.item_index("e2_1");
  s.remaining.erase(taken);
  s.bundles[1].insert(taken);
  s.budgets[1] = 0;
  s.spent[1] = Rational(1, 2);
  s.active[1] = false;
  const auto res = residual_instance(inst, s, {{0, aps}});
  EXPECT_EQ(res.gamma, Rational(1, 2));
  ASSERT_EQ(res.instance.agent_count(), 1U);
  const Rational b_hat = res.instance.agent(0).entitlement.value();
  EXPECT_EQ(b_hat, Rational(1));
  const Rational residual = aps_exact(*res.instance.agent(0).valuation, b_hat, res.instance.items()).value;
  EXPECT_EQ(residual, oracle::aps_scan(*res.instance.agent(0).valuation, b_hat, res.instance.items()));
  EXPECT_EQ(residual, aps);
}

TEST(Allocation, Validity) {
  const Instance inst = equal_instance(2, {1, 1, 1});
  Allocation a = Allocation::empty(inst);
  a.bundles[0].insert(0);
  a.bundles[1].insert(1);
  EXPECT_TRUE(a.valid_for(inst));
  a.bundles[1].insert(0);
  EXPECT_FALSE(a.valid_for(inst));
}
