// One random coverage instance: exact shares, then a game where every agent plays the
// proportional strategy with her exact APS.

#include "bidfair/bidfair.hpp"

#include <iostream>

int main(int argc, char** argv) {
  using namespace bidfair;
  const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 42;
  const Instance inst = gen_random_submodular(seed, 3, 7, 8, false);

  std::vector<StrategyPtr> strategies;
  std::vector<Rational> shares;
  for (const auto& a : inst.agents()) {
    const Rational b = a.entitlement.value();
    shares.push_back(aps_exact(*a.valuation, b, inst.items()).value);
    strategies.push_back(make_proportional_aps(a.valuation, b, ProportionalApsStrategy::default_rho(b), shares.back()));
  }
  const auto game = run_game(inst, strategies, GameConfig{});

  for (AgentIndex i = 0; i < inst.agent_count(); ++i) {
    const auto& a = inst.agent(i);
    const Rational value = a.valuation->value(game.allocation.bundles[i]);
    std::cout << a.id << "  b=" << format_rational(a.entitlement.value()) << "  APS=" << format_rational(shares[i])
              << "  value=" << format_rational(value) << "  items=" << game.allocation.bundles[i].size() << "\n";
  }
  std::cout << game.transcript.rounds.size() << " rounds, transcript "
            << (verify_transcript(game.transcript, inst, GameConfig{}) ? "verifies" : "FAILS") << "\n";
}
