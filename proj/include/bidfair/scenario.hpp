#pragma once

#include "bidfair/game.hpp"
#include "bidfair/strategies.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace bidfair {

/// Serializable description of a strategy, instantiated against an instance and an agent.
struct StrategySpec {
  enum class Kind {
    zero,
    proportional_aps,         ///< rho, share
    altruistic_mms,           ///< share
    unit_demand_full_budget,
    scripted,                 ///< bids, picks
    random,                   ///< seed, steps
    fraction,                 ///< fraction of remaining budget
    shadow,                   ///< target, premium, inner[0] = the target's strategy
    xos_type1,                ///< constant bid, canonical first item
    xos_type2,                ///< target, window, columns
  };

  Kind kind = Kind::zero;
  Rational rho;
  Rational share;
  Rational amount;  ///< fraction, constant bid, or shadow premium
  std::vector<Rational> bids;
  std::vector<std::vector<ItemId>> picks;
  std::uint64_t seed = 0;
  unsigned steps = 8;
  AgentIndex target = 0;
  std::size_t window = 0;
  std::vector<std::vector<ItemId>> columns;
  std::vector<StrategySpec> inner;

  static StrategySpec proportional(Rational rho, Rational share) {
    StrategySpec s;
    s.kind = Kind::proportional_aps;
    s.rho = std::move(rho);
    s.share = std::move(share);
    return s;
  }
  static StrategySpec altruistic(Rational share) {
    StrategySpec s;
    s.kind = Kind::altruistic_mms;
    s.share = std::move(share);
    return s;
  }
  static StrategySpec scripted(std::vector<Rational> bids, std::vector<std::vector<ItemId>> picks) {
    StrategySpec s;
    s.kind = Kind::scripted;
    s.bids = std::move(bids);
    s.picks = std::move(picks);
    return s;
  }

  friend bool operator==(const StrategySpec&, const StrategySpec&) = default;
};

/// Always bids a constant amount (capped by budget) and takes the canonical first item.
class ConstantBidder final : public Strategy {
 public:
  explicit ConstantBidder(Rational amount) : amount_(std::move(amount)) {}
  Rational bid(const PublicView& view, AgentIndex self) override {
    return min(amount_, view.state.budgets[self]);
  }
  std::vector<ItemId> pick(const PublicView& view, AgentIndex, const Rational&) override {
    return detail::first_remaining(view);
  }

 private:
  Rational amount_;
};

/// Column sniper: for `window` rounds after the target wins an item, bids its whole budget
/// and takes the first available item from that item's column.
class ColumnSniper final : public Strategy {
 public:
  ColumnSniper(AgentIndex target, std::size_t window, std::vector<std::vector<ItemId>> columns)
      : target_(target), window_(window), columns_(std::move(columns)) {}

  Rational bid(const PublicView& view, AgentIndex self) override {
    return open_column(view) ? view.state.budgets[self] : Rational(0);
  }

  std::vector<ItemId> pick(const PublicView& view, AgentIndex, const Rational&) override {
    if (const auto* col = open_column(view))
      for (ItemId e : *col)
        if (view.state.remaining.contains(e)) return {e};
    return detail::first_remaining(view);
  }

 private:
  const std::vector<ItemId>* open_column(const PublicView& view) const {
    const std::size_t now = view.current_round();
    for (auto it = view.history.rbegin(); it != view.history.rend(); ++it) {
      if (now - it->round > window_) return nullptr;
      if (it->winner != target_) continue;
      for (const auto& col : columns_)
        if (std::find(col.begin(), col.end(), it->items.front()) != col.end()) {
          for (ItemId e : col)
            if (view.state.remaining.contains(e)) return &col;
          return nullptr;
        }
      return nullptr;
    }
    return nullptr;
  }

  AgentIndex target_;
  std::size_t window_;
  std::vector<std::vector<ItemId>> columns_;
};

inline StrategyPtr instantiate(const StrategySpec& spec, const Instance& inst, AgentIndex self) {
  const Agent& a = inst.agent(self);
  using K = StrategySpec::Kind;
  switch (spec.kind) {
    case K::zero:
      return std::make_unique<ZeroStrategy>();
    case K::proportional_aps:
      return make_proportional_aps(a.valuation, a.entitlement.value(), spec.rho, spec.share);
    case K::altruistic_mms:
      return make_altruistic_proportional_mms(a.valuation, a.entitlement.value(), spec.share);
    case K::unit_demand_full_budget:
      return make_unit_demand_full_budget(a.valuation);
    case K::scripted:
      return make_scripted(spec.bids, spec.picks);
    case K::random:
      return std::make_unique<RandomBidder>(a.valuation, spec.seed, spec.steps);
    case K::fraction:
      return std::make_unique<FractionBidder>(a.valuation, spec.amount);
    case K::shadow:
      if (spec.inner.size() != 1) throw GameError("shadow strategy needs exactly one inner strategy");
      if (spec.target >= inst.agent_count()) throw GameError("shadow target out of range");
      return std::make_unique<ShadowBidder>(instantiate(spec.inner.front(), inst, spec.target),
                                            spec.target, spec.amount);
    case K::xos_type1:
      return std::make_unique<ConstantBidder>(spec.amount);
    case K::xos_type2:
      return std::make_unique<ColumnSniper>(spec.target, spec.window, spec.columns);
  }
  throw GameError("unknown strategy kind");
}

inline std::vector<StrategyPtr> instantiate_all(const std::vector<StrategySpec>& specs, const Instance& inst) {
  if (specs.size() != inst.agent_count()) throw GameError("one strategy spec per agent required");
  std::vector<StrategyPtr> out;
  for (AgentIndex i = 0; i < specs.size(); ++i) out.push_back(instantiate(specs[i], inst, i));
  return out;
}

/// A constructed instance together with the run that realizes its bound.
struct ScriptedRun {
  std::string name;
  Instance instance;
  AgentIndex p = 0;
  GameConfig config;
  std::vector<StrategySpec> strategies;
  std::string share_kind;         ///< "mms" or "aps"
  Rational share;                 ///< p's share, known in closed form
  Rational expected_value;        ///< p's final value, or an upper bound on it
  bool value_is_upper_bound = false;

  Rational expected_ratio() const { return expected_value / share; }
};

struct RunOutcome {
  GameResult game;
  Rational p_value;
  bool matches = false;  ///< p_value equals (or stays within) the expectation
};

inline RunOutcome execute(const ScriptedRun& run) {
  auto strategies = instantiate_all(run.strategies, run.instance);
  RunOutcome out{run_game(run.instance, strategies, run.config), 0, false};
  out.p_value = run.instance.agent(run.p).valuation->value(out.game.allocation.bundles[run.p]);
  out.matches = run.value_is_upper_bound ? out.p_value <= run.expected_value
                                         : out.p_value == run.expected_value;
  return out;
}

}  // namespace bidfair
