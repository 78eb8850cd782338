#pragma once

#include "bidfair/game.hpp"
#include "bidfair/valuation.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace bidfair {

namespace detail {

struct BestItem {
  ItemId item = ItemSet::npos;
  Rational value;
};

/// Remaining item with the largest marginal over `held`; earliest in canonical order on ties.
inline BestItem best_marginal(const Valuation& v, const ItemSet& remaining, const ItemSet& held) {
  BestItem best;
  const Rational base = v.value(held);
  remaining.for_each([&](ItemId e) {
    Rational m = v.value(held.with(e)) - base;
    if (best.item == ItemSet::npos || m > best.value) best = {e, std::move(m)};
  });
  return best;
}

/// Remaining item with the largest singleton value; earliest in canonical order on ties.
inline BestItem best_single(const Valuation& v, const ItemSet& remaining) {
  BestItem best;
  remaining.for_each([&](ItemId e) {
    Rational x = v.value(ItemSet(v.ground_size(), {e}));
    if (best.item == ItemSet::npos || x > best.value) best = {e, std::move(x)};
  });
  return best;
}

inline std::vector<ItemId> first_remaining(const PublicView& view) {
  const ItemId e = view.state.remaining.first();
  if (e == ItemSet::npos) throw GameError("pick requested with no items left");
  return {e};
}

}  // namespace detail

/// Bids 0 every round; takes the canonical first item when forced to win.
class ZeroStrategy final : public Strategy {
 public:
  Rational bid(const PublicView&, AgentIndex) override { return 0; }
  std::vector<ItemId> pick(const PublicView& view, AgentIndex, const Rational&) override {
    return detail::first_remaining(view);
  }
};

/// The proportional bidding strategy for the standard game, parameterized by a share value.
///
/// Large-item phase: while some remaining item is worth more than 2*rho*share under the
/// truncated valuation, bid the whole budget and take the most valuable item on a win.
/// Proportional phase: bid gamma * min((1/2rho) * (b_hat/share) * best marginal, b_hat_r)
/// where b_hat and b_hat_r are the agent's starting and current budgets in the residual
/// instance taken when the phase began, and gamma is the total active budget then.
class ProportionalApsStrategy final : public Strategy {
 public:
  struct BidRecord {
    std::size_t round = 0;
    bool large_phase = false;
    Rational formula;  ///< uncapped bid in the original budget unit
    Rational bid;
  };

  ProportionalApsStrategy(ValuationPtr v, Rational b, Rational rho, Rational share)
      : b_(std::move(b)), rho_(std::move(rho)), share_(std::move(share)) {
    if (rho_ <= 0) throw std::invalid_argument("proportional: rho must be positive");
    if (share_ > 0) v_ = truncate_valuation(std::move(v), share_);
  }

  /// 1/(3 - 2b), the fraction guaranteed in the standard game.
  static Rational default_rho(const Rational& b) { return Rational(1) / (3 - 2 * b); }

  Rational bid(const PublicView& view, AgentIndex self) override {
    if (!v_) return 0;
    const auto& st = view.state;
    const Rational budget = st.budgets[self];
    BidRecord rec;
    rec.round = view.current_round();
    if (!phase_start_ && has_large_item(st.remaining)) {
      rec.large_phase = true;
      rec.formula = budget;
      rec.bid = budget;
    } else {
      if (!phase_start_) {
        phase_start_ = st.round;
        gamma_ = st.active_budget();
        start_budget_ = budget;
      }
      const auto best = detail::best_marginal(*v_, st.remaining, st.bundles[self]);
      // gamma * (1/2rho) * (b_hat/share) * m with b_hat = start_budget/gamma.
      rec.formula = start_budget_ * best.value / (2 * rho_ * share_);
      rec.bid = min(rec.formula, budget);
    }
    large_now_ = rec.large_phase;
    log_.push_back(rec);
    return rec.bid;
  }

  std::vector<ItemId> pick(const PublicView& view, AgentIndex self, const Rational&) override {
    if (!v_) return detail::first_remaining(view);
    const auto best = large_now_ ? detail::best_single(*v_, view.state.remaining)
                                 : detail::best_marginal(*v_, view.state.remaining, view.state.bundles[self]);
    return {best.item};
  }

  /// Rounds completed when the proportional phase began, if it has.
  std::optional<std::size_t> phase_start() const { return phase_start_; }
  const Rational& gamma() const { return gamma_; }
  const std::vector<BidRecord>& log() const { return log_; }
  const Rational& rho() const { return rho_; }
  const Rational& share() const { return share_; }

 private:
  bool has_large_item(const ItemSet& remaining) const {
    const Rational threshold = 2 * rho_ * share_;
    bool found = false;
    remaining.for_each([&](ItemId e) {
      if (!found && v_->value(ItemSet(v_->ground_size(), {e})) > threshold) found = true;
    });
    return found;
  }

  ValuationPtr v_;
  Rational b_;
  Rational rho_;
  Rational share_;
  std::optional<std::size_t> phase_start_;
  Rational gamma_ = 1;
  Rational start_budget_;
  bool large_now_ = false;
  std::vector<BidRecord> log_;
};

inline StrategyPtr make_proportional_aps(ValuationPtr v, Rational b, Rational rho, Rational share) {
  return std::make_unique<ProportionalApsStrategy>(std::move(v), std::move(b), std::move(rho),
                                                   std::move(share));
}

/// Proportional strategy for the altruistic game. The valuation is scaled so the share
/// equals b and truncated there; the bid is the best remaining marginal, capped by budget.
class AltruisticProportionalStrategy final : public Strategy {
 public:
  AltruisticProportionalStrategy(ValuationPtr v, Rational b, const Rational& share) {
    if (share > 0) v_ = truncate_valuation(scale_valuation(std::move(v), b / share), b);
  }

  Rational bid(const PublicView& view, AgentIndex self) override {
    if (!v_) return 0;
    const auto& st = view.state;
    return min(detail::best_marginal(*v_, st.remaining, st.bundles[self]).value, st.budgets[self]);
  }

  std::vector<ItemId> pick(const PublicView& view, AgentIndex self, const Rational&) override {
    if (!v_) return detail::first_remaining(view);
    return {detail::best_marginal(*v_, view.state.remaining, view.state.bundles[self]).item};
  }

 private:
  ValuationPtr v_;
};

inline StrategyPtr make_altruistic_proportional_mms(ValuationPtr v, Rational b, const Rational& share) {
  return std::make_unique<AltruisticProportionalStrategy>(std::move(v), std::move(b), share);
}

/// Bids the whole budget until the first win, taking the most valuable item; then bids 0.
/// In multi-pick mode this still takes a single item.
class UnitDemandFullBudgetStrategy final : public Strategy {
 public:
  explicit UnitDemandFullBudgetStrategy(ValuationPtr v) : v_(std::move(v)) {}

  Rational bid(const PublicView& view, AgentIndex self) override {
    return view.state.bundles[self].empty() ? view.state.budgets[self] : Rational(0);
  }

  std::vector<ItemId> pick(const PublicView& view, AgentIndex, const Rational&) override {
    return {detail::best_single(*v_, view.state.remaining).item};
  }

 private:
  ValuationPtr v_;
};

inline StrategyPtr make_unit_demand_full_budget(ValuationPtr v) {
  return std::make_unique<UnitDemandFullBudgetStrategy>(std::move(v));
}

/// Replays fixed bids and picks indexed by global round. Rounds past the script bid 0.
/// An empty pick entry (or a round past the script) takes the canonical first item.
class ScriptedStrategy final : public Strategy {
 public:
  ScriptedStrategy(std::vector<Rational> bids, std::vector<std::vector<ItemId>> picks)
      : bids_(std::move(bids)), picks_(std::move(picks)) {}

  Rational bid(const PublicView& view, AgentIndex self) override {
    const std::size_t r = view.current_round() - 1;
    if (r >= bids_.size()) return 0;
    return min(bids_[r], view.state.budgets[self]);
  }

  std::vector<ItemId> pick(const PublicView& view, AgentIndex, const Rational&) override {
    const std::size_t r = view.current_round() - 1;
    if (r >= picks_.size() || picks_[r].empty()) return detail::first_remaining(view);
    for (ItemId e : picks_[r])
      if (!view.state.remaining.contains(e))
        throw GameError("scripted pick of unavailable item in round " + std::to_string(r + 1));
    return picks_[r];
  }

 private:
  std::vector<Rational> bids_;
  std::vector<std::vector<ItemId>> picks_;
};

inline StrategyPtr make_scripted(std::vector<Rational> bids, std::vector<std::vector<ItemId>> picks) {
  return std::make_unique<ScriptedStrategy>(std::move(bids), std::move(picks));
}

/// Bids a uniformly random multiple of budget/steps; picks its best marginal item.
class RandomBidder final : public Strategy {
 public:
  RandomBidder(ValuationPtr v, std::uint64_t seed, unsigned steps = 8)
      : v_(std::move(v)), rng_(seed), steps_(steps == 0 ? 1 : steps) {}

  Rational bid(const PublicView& view, AgentIndex self) override {
    const auto k = static_cast<unsigned>(rng_() % (steps_ + 1));
    return view.state.budgets[self] * Rational(k) / Rational(steps_);
  }

  std::vector<ItemId> pick(const PublicView& view, AgentIndex self, const Rational&) override {
    return {detail::best_marginal(*v_, view.state.remaining, view.state.bundles[self]).item};
  }

 private:
  ValuationPtr v_;
  std::mt19937_64 rng_;
  unsigned steps_;
};

/// Bids a fixed fraction of the remaining budget; picks its best marginal item.
/// fraction = 1 is the full-budget greedy bidder.
class FractionBidder final : public Strategy {
 public:
  FractionBidder(ValuationPtr v, Rational fraction) : v_(std::move(v)), fraction_(std::move(fraction)) {}

  Rational bid(const PublicView& view, AgentIndex self) override {
    return view.state.budgets[self] * fraction_;
  }

  std::vector<ItemId> pick(const PublicView& view, AgentIndex self, const Rational&) override {
    return {detail::best_marginal(*v_, view.state.remaining, view.state.bundles[self]).item};
  }

 private:
  ValuationPtr v_;
  Rational fraction_;
};

/// Runs a private copy of a target agent's strategy, bids what the target would bid plus
/// `premium` (capped by own budget), and on a win takes the item the target would take.
class ShadowBidder final : public Strategy {
 public:
  ShadowBidder(StrategyPtr copy, AgentIndex target, Rational premium = 0)
      : copy_(std::move(copy)), target_(target), premium_(std::move(premium)) {}

  Rational bid(const PublicView& view, AgentIndex self) override {
    if (!view.state.active[target_]) return 0;
    return min(copy_->bid(view, target_) + premium_, view.state.budgets[self]);
  }

  std::vector<ItemId> pick(const PublicView& view, AgentIndex, const Rational& bid) override {
    if (!view.state.active[target_]) return detail::first_remaining(view);
    auto items = copy_->pick(view, target_, bid);
    items.resize(1);
    return items;
  }

 private:
  StrategyPtr copy_;
  AgentIndex target_;
  Rational premium_;
};

}  // namespace bidfair
