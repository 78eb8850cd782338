#pragma once

#include "bidfair/game.hpp"
#include "bidfair/instance.hpp"
#include "bidfair/strategies.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bidfair {

/// The conditional allocator broke its promise, or the refinement loop ran past its bound.
class ContractViolation : public std::runtime_error {
 public:
  ContractViolation(const std::string& what, Transcript t)
      : std::runtime_error(what), transcript(std::move(t)) {}
  Transcript transcript;
};

enum class ShareMode {
  aps,  ///< standard game, rho_i = 1/(3 - 2 b_i)
  mms,  ///< altruistic game with rho = 10/27
};

inline Rational altruistic_rho() { return Rational(10, 27); }

/// Fraction of her guess each agent is promised by the conditional allocator.
inline std::vector<Rational> conditional_targets(const Instance& inst, ShareMode mode) {
  std::vector<Rational> rho;
  for (const auto& a : inst.agents())
    rho.push_back(mode == ShareMode::aps ? ProportionalApsStrategy::default_rho(a.entitlement.value())
                                         : altruistic_rho());
  return rho;
}

/// Every agent plays her proportional strategy with guess t_i in place of her share;
/// ties are broken lexicographically. If t_i <= share_i then v_i(A_i) >= rho_i * t_i.
inline GameResult conditional_allocate(const Instance& inst, const std::vector<Rational>& guesses,
                                       ShareMode mode) {
  if (guesses.size() != inst.agent_count()) throw std::invalid_argument("one guess per agent required");
  for (const auto& t : guesses)
    if (t < 0) throw std::invalid_argument("guesses must be nonnegative");
  std::vector<StrategyPtr> strategies;
  for (AgentIndex i = 0; i < inst.agent_count(); ++i) {
    const Agent& a = inst.agent(i);
    if (mode == ShareMode::aps)
      strategies.push_back(make_proportional_aps(a.valuation, a.entitlement.value(),
                                                 ProportionalApsStrategy::default_rho(a.entitlement.value()),
                                                 guesses[i]));
    else
      strategies.push_back(make_altruistic_proportional_mms(a.valuation, a.entitlement.value(), guesses[i]));
  }
  const GameConfig cfg = mode == ShareMode::aps ? GameConfig{} : GameConfig::altruistic(altruistic_rho());
  return run_game(inst, strategies, cfg);
}

/// max over agents and positive-value items of v_i(M)/v_i(e); 1 if no item has positive value.
/// For submodular valuations this bounds the ratio of largest to smallest positive bundle value.
inline Rational ratio_bound(const Instance& inst) {
  Rational k = 1;
  for (const auto& a : inst.agents()) {
    const Rational total = a.valuation->value(inst.items());
    inst.items().for_each([&](ItemId e) {
      const Rational x = a.valuation->value(ItemSet(inst.ground_size(), {e}));
      if (x > 0) k = max(k, total / x);
    });
  }
  return k;
}

/// n * max(1, ceil(ln K / eps)) + 1. Each agent is lowered at most ceil(ln K / eps) times
/// for K > 1 and at most once for K = 1; the extra call is the final successful one.
inline std::uint64_t iteration_bound(std::size_t n, const Rational& K, const Rational& eps) {
  const long double ln_k = std::log(K.convert_to<long double>());
  const long double steps = std::ceil(ln_k / eps.convert_to<long double>());
  return static_cast<std::uint64_t>(n) * std::max<std::uint64_t>(1, static_cast<std::uint64_t>(steps)) + 1;
}

struct IterationInfo {
  std::uint64_t iteration = 0;  ///< 1-based conditional call number
  const std::vector<Rational>& guesses;
  const GameResult& result;
};

struct UnconditionalResult {
  GameResult game;
  std::vector<Rational> guesses;
  std::vector<Rational> targets;
  std::uint64_t calls = 0;
};

/// Geometric guess refinement: start from t_i = v_i(M), run the conditional allocator, and
/// while the lowest-index agent with v_i(A_i) < rho_i * t_i still has t_i >= v_i(M)/K,
/// lower her guess by the factor (1 - eps). `observer` sees every conditional call.
inline UnconditionalResult unconditional_allocate(const Instance& inst, const Rational& eps,
                                                  std::optional<Rational> K, ShareMode mode,
                                                  const std::function<void(const IterationInfo&)>& observer = {}) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const Rational k = K ? *K : ratio_bound(inst);
  if (k < 1) throw std::invalid_argument("K must be at least 1");
  const std::uint64_t bound = iteration_bound(inst.agent_count(), k, eps);

  UnconditionalResult out{{}, {}, conditional_targets(inst, mode), 0};
  std::vector<Rational> floor;
  for (const auto& a : inst.agents()) {
    out.guesses.push_back(a.valuation->value(inst.items()));
    floor.push_back(out.guesses.back() / k);
  }
  for (;;) {
    out.game = conditional_allocate(inst, out.guesses, mode);
    ++out.calls;
    if (observer) observer(IterationInfo{out.calls, out.guesses, out.game});
    std::optional<AgentIndex> violator;
    for (AgentIndex i = 0; i < inst.agent_count() && !violator; ++i) {
      const Rational got = inst.agent(i).valuation->value(out.game.allocation.bundles[i]);
      if (got < out.targets[i] * out.guesses[i] && out.guesses[i] >= floor[i]) violator = i;
    }
    if (!violator) return out;
    if (out.calls >= bound)
      throw ContractViolation("guess refinement exceeded " + std::to_string(bound) + " conditional calls",
                              out.game.transcript);
    out.guesses[*violator] *= 1 - eps;
  }
}

}  // namespace bidfair
