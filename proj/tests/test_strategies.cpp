#include "bidfair/bidfair.hpp"

#include <gtest/gtest.h>

using namespace bidfair;

namespace {

ValuationPtr additive(std::vector<Rational> v) { return std::make_shared<AdditiveValuation>(std::move(v)); }
ValuationPtr unit_demand(std::vector<Rational> v) { return std::make_shared<UnitDemandValuation>(std::move(v)); }

std::vector<std::string> item_names(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t e = 0; e < m; ++e) names.push_back("e" + std::to_string(e + 1));
  return names;
}

Instance equal_instance(std::size_t n, const ValuationPtr& v) {
  std::vector<Agent> agents;
  for (std::size_t i = 0; i < n; ++i) agents.push_back({"a" + std::to_string(i + 1), Entitlement(Rational(1, n)), v});
  return Instance(item_names(v->ground_size()), agents);
}

}  // namespace

TEST(Proportional, DefaultRho) {
  for (long n = 1; n <= 8; ++n) EXPECT_EQ(ProportionalApsStrategy::default_rho(Rational(1, n)), Rational(n, 3 * n - 2));
  EXPECT_EQ(ProportionalApsStrategy::default_rho(1), Rational(1));
}

TEST(Proportional, SingleAgentTakesAllPositiveValue) {
  const auto v = additive({3, 2, 1, 0});
  const Instance inst = equal_instance(1, v);
  const Rational aps = aps_exact(*v, 1, inst.items()).value;
  std::vector<StrategyPtr> s;
  s.push_back(make_proportional_aps(v, 1, ProportionalApsStrategy::default_rho(1), aps));
  const auto r = run_game(inst, s, GameConfig{});
  EXPECT_EQ(v->value(r.allocation.bundles[0]), Rational(6));
  EXPECT_GE(v->value(r.allocation.bundles[0]), aps);
}

TEST(Proportional, ZeroShareIsZeroStrategy) {
  const auto v = additive({1, 1});
  const Instance inst = equal_instance(2, v);
  std::vector<StrategyPtr> s;
  s.push_back(make_proportional_aps(v, Rational(1, 2), Rational(1, 2), 0));
  s.push_back(std::make_unique<FractionBidder>(v, Rational(1, 4)));
  const auto r = run_game(inst, s, GameConfig{});
  for (const auto& rec : r.transcript.rounds)
    if (rec.bids[0]) EXPECT_EQ(*rec.bids[0], Rational(0));
}

TEST(Proportional, AdversarialRowRunAtKOne) {
  const auto run = gen_original_negative(1);
  EXPECT_EQ(run.strategies[0].rho, Rational(1, 2));
  EXPECT_EQ(run.share, Rational(2));
  const auto out = execute(run);
  EXPECT_TRUE(out.matches);
  EXPECT_EQ(out.p_value, Rational(1));
  EXPECT_EQ(out.p_value, run.strategies[0].rho * run.share);
}

TEST(Proportional, LargeItemPhaseBidsWholeBudget) {
  const auto v = additive({5, 1, 1, 1});
  const Instance inst = equal_instance(2, v);
  auto p = std::make_unique<ProportionalApsStrategy>(v, Rational(1, 2), Rational(1, 4), Rational(4));
  // Threshold 2 * 1/4 * 4 = 2: item 0 (truncated value 4) is large.
  auto* raw = p.get();
  std::vector<StrategyPtr> s;
  s.push_back(std::move(p));
  s.push_back(std::make_unique<FractionBidder>(v, 1));
  GameConfig cfg;
  cfg.tie_break = TieBreakPolicy::adversarial_against(0);
  const auto r = run_game(inst, s, cfg);
  ASSERT_FALSE(raw->log().empty());
  EXPECT_TRUE(raw->log()[0].large_phase);
  EXPECT_EQ(raw->log()[0].bid, Rational(1, 2));
  // The opponent ties, wins item 0 with its full budget and leaves; p is then in phase one.
  EXPECT_EQ(r.transcript.rounds[0].winner, 1U);
  ASSERT_TRUE(raw->phase_start().has_value());
  EXPECT_EQ(*raw->phase_start(), 1U);
  EXPECT_EQ(raw->gamma(), Rational(1, 2));
  EXPECT_FALSE(raw->log()[1].large_phase);
}

TEST(Proportional, PhaseOneBidFormula) {
  const auto v = additive({2, 1, 1});
  const Instance inst = equal_instance(2, v);
  // b = 1/2, rho = 1, share 2: bid = (1/2) * m / 4 = m / 8.
  auto p = std::make_unique<ProportionalApsStrategy>(v, Rational(1, 2), Rational(1), Rational(2));
  auto* raw = p.get();
  std::vector<StrategyPtr> s;
  s.push_back(std::move(p));
  s.push_back(std::make_unique<ZeroStrategy>());
  const auto r = run_game(inst, s, GameConfig{});
  ASSERT_GE(raw->log().size(), 2U);
  EXPECT_EQ(raw->log()[0].bid, Rational(1, 4));
  // Truncated at 2: after taking item 0 no marginal value is left.
  EXPECT_EQ(raw->log()[1].bid, Rational(0));
  EXPECT_EQ(r.transcript.rounds[0].items, (std::vector<ItemId>{0}));
}

TEST(Proportional, PhaseOneBidsWeaklyDecrease) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = gen_random_submodular(seed, 3, 6, 6, seed % 2 == 0);
    const auto& a = inst.agent(0);
    const Rational b = a.entitlement.value();
    const Rational aps = aps_exact(*a.valuation, b, inst.items()).value;
    auto p = std::make_unique<ProportionalApsStrategy>(a.valuation, b, ProportionalApsStrategy::default_rho(b), aps);
    auto* raw = p.get();
    std::vector<StrategyPtr> s;
    s.push_back(std::move(p));
    s.push_back(std::make_unique<RandomBidder>(inst.agent(1).valuation, seed));
    s.push_back(std::make_unique<FractionBidder>(inst.agent(2).valuation, Rational(1, 3)));
    GameConfig cfg;
    cfg.tie_break = TieBreakPolicy::adversarial_against(0);
    const auto r = run_game(inst, s, cfg);
    std::optional<Rational> prev;
    for (const auto& rec : raw->log()) {
      if (rec.large_phase) continue;
      if (prev) EXPECT_LE(rec.bid, *prev) << "seed " << seed << " round " << rec.round;
      prev = rec.bid;
    }
    EXPECT_GE(a.valuation->value(r.allocation.bundles[0]), ProportionalApsStrategy::default_rho(b) * aps) << seed;
  }
}

// Scaling v and the share by c leaves bids and picks unchanged against fixed opponents.
TEST(Proportional, ScaleInvariance) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Instance inst = gen_random_submodular(seed, 2, 6, 6);
    const auto& a = inst.agent(0);
    const Rational b = a.entitlement.value();
    const Rational aps = aps_exact(*a.valuation, b, inst.items()).value;
    auto transcript = [&](const Rational& c) {
      std::vector<StrategyPtr> s;
      s.push_back(make_proportional_aps(scale_valuation(a.valuation, c), b, ProportionalApsStrategy::default_rho(b),
                                        c * aps));
      s.push_back(std::make_unique<RandomBidder>(inst.agent(1).valuation, seed));
      return run_game(inst, s, GameConfig{}).transcript;
    };
    EXPECT_EQ(transcript(1), transcript(Rational(5, 2))) << seed;
  }
}

TEST(Altruistic, SingleItemSingleAgent) {
  const auto v = additive({5});
  const Instance inst = equal_instance(1, v);
  std::vector<StrategyPtr> s;
  s.push_back(make_altruistic_proportional_mms(v, 1, 5));
  const auto r = run_game(inst, s, GameConfig::altruistic(Rational(10, 27)));
  EXPECT_EQ(*r.transcript.rounds[0].bids[0], Rational(1));
  EXPECT_EQ(v->value(r.allocation.bundles[0]), Rational(5));
}

TEST(Altruistic, RowRunAtKTwo) {
  const auto run = gen_altruistic_negative(2);
  EXPECT_EQ(run.instance.agent_count(), 6U);
  EXPECT_EQ(run.share, Rational(5, 2));
  const auto out = execute(run);
  EXPECT_EQ(out.p_value, Rational(1));
  EXPECT_EQ(run.expected_ratio(), Rational(2, 5));
  EXPECT_TRUE(verify_transcript(out.game.transcript, run.instance, run.config));
}

TEST(Altruistic, BidsScaledMarginal) {
  // Share 4 at b = 1/2: v is scaled by 1/8 and truncated at 1/2.
  const auto v = additive({2, 2, 2, 2});
  const Instance inst = equal_instance(2, v);
  std::vector<StrategyPtr> s;
  s.push_back(make_altruistic_proportional_mms(v, Rational(1, 2), 4));
  s.push_back(std::make_unique<ZeroStrategy>());
  const auto r = run_game(inst, s, GameConfig::altruistic(Rational(10, 27)));
  EXPECT_EQ(*r.transcript.rounds[0].bids[0], Rational(1, 4));
  // Spent 1/4 > 10/54 after round 1: inactive.
  EXPECT_FALSE(r.transcript.rounds[1].bids[0].has_value());
}

TEST(UnitDemand, WinsEarlyAndMeetsAps) {
  const auto v = unit_demand({5, 4, 3, 2});
  const Instance inst = equal_instance(3, v);
  const Rational aps = aps_unit_demand({5, 4, 3, 2}, Rational(1, 3));
  for (int profile = 0; profile < 3; ++profile) {
    std::vector<StrategyPtr> s;
    s.push_back(make_unit_demand_full_budget(v));
    for (AgentIndex i = 1; i < 3; ++i) {
      if (profile == 0) s.push_back(make_unit_demand_full_budget(v));
      if (profile == 1) s.push_back(std::make_unique<FractionBidder>(v, 1));
      if (profile == 2) s.push_back(std::make_unique<RandomBidder>(v, i));
    }
    GameConfig cfg;
    cfg.tie_break = TieBreakPolicy::adversarial_against(0);
    const auto r = run_game(inst, s, cfg);
    std::size_t won = 0;
    for (const auto& rec : r.transcript.rounds)
      if (rec.winner == 0) {
        won = rec.round;
        break;
      }
    EXPECT_GE(won, 1U);
    EXPECT_LE(won, 3U);
    EXPECT_GE(v->value(r.allocation.bundles[0]), aps);
  }
}

TEST(UnitDemand, FullEntitlementTakesBest) {
  const auto v = unit_demand({1, 7, 3});
  const Instance inst = equal_instance(1, v);
  std::vector<StrategyPtr> s;
  s.push_back(make_unit_demand_full_budget(v));
  const auto r = run_game(inst, s, GameConfig{});
  EXPECT_EQ(r.transcript.rounds.size(), 1U);
  EXPECT_EQ(r.allocation.bundles[0].items(), (std::vector<ItemId>{1}));
}

TEST(UnitDemand, TooFewItemsMeansZeroShare) {
  EXPECT_EQ(aps_unit_demand({5, 4}, Rational(1, 3)), Rational(0));
  EXPECT_EQ(aps_exact(UnitDemandValuation({5, 4}), Rational(1, 3), ItemSet::full(2)).value, Rational(0));
}

TEST(Scripted, ReplaysClampsAndRejects) {
  const auto v = additive({1, 1, 1});
  const Instance inst = equal_instance(2, v);
  std::vector<StrategyPtr> s;
  s.push_back(make_scripted({Rational(1), Rational(1, 10)}, {{2}, {}}));
  s.push_back(std::make_unique<ZeroStrategy>());
  const auto r = run_game(inst, s, GameConfig{});
  EXPECT_EQ(*r.transcript.rounds[0].bids[0], Rational(1, 2));
  EXPECT_EQ(r.transcript.rounds[0].items, (std::vector<ItemId>{2}));
  EXPECT_TRUE(r.transcript.violations.empty());

  std::vector<StrategyPtr> bad;
  bad.push_back(make_scripted({Rational(1, 4), Rational(1, 4)}, {{0}, {0}}));
  bad.push_back(std::make_unique<ZeroStrategy>());
  EXPECT_THROW(run_game(inst, bad, GameConfig{}), GameError);
}

TEST(Scripted, ConstructionScriptsReproduce) {
  for (const auto& run : {gen_altruistic_negative(1), gen_original_negative(2), gen_modified_negative(1)}) {
    const auto out = execute(run);
    EXPECT_TRUE(out.matches) << run.name;
    EXPECT_TRUE(out.game.transcript.violations.empty()) << run.name;
    EXPECT_TRUE(verify_transcript(out.game.transcript, run.instance, run.config)) << run.name;
  }
}

TEST(Shadow, CopiesTargetWithPremium) {
  const auto v = additive({3, 2, 1});
  const Instance inst = equal_instance(2, v);
  std::vector<StrategyPtr> s;
  s.push_back(std::make_unique<FractionBidder>(v, Rational(1, 4)));
  s.push_back(std::make_unique<ShadowBidder>(std::make_unique<FractionBidder>(v, Rational(1, 4)), 0, Rational(1, 100)));
  const auto r = run_game(inst, s, GameConfig{});
  EXPECT_EQ(r.transcript.rounds[0].winner, 1U);
  EXPECT_EQ(*r.transcript.rounds[0].bids[1], Rational(1, 8) + Rational(1, 100));
  EXPECT_EQ(r.transcript.rounds[0].items, (std::vector<ItemId>{0}));
}

TEST(ColumnSniper, TakesFromTargetsColumn) {
  const auto run = gen_xos_hard(16, 2);
  const auto out = execute(run);
  const auto& rounds = out.game.transcript.rounds;
  auto column = [&](ItemId e) {
    const std::string& name = run.instance.item_names()[e];
    return name.substr(name.find('_'));
  };
  int sniped = 0;
  for (std::size_t r = 0; r + 1 < rounds.size(); ++r) {
    if (rounds[r].winner != 0 || rounds[r + 1].winner <= 8) continue;
    EXPECT_EQ(column(rounds[r].items[0]), column(rounds[r + 1].items[0]));
    ++sniped;
  }
  EXPECT_GT(sniped, 0);
}
