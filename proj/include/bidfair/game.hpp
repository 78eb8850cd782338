#pragma once

#include "bidfair/instance.hpp"
#include "bidfair/item_set.hpp"
#include "bidfair/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bidfair {

class GameError : public std::runtime_error {
 public:
  explicit GameError(const std::string& what) : std::runtime_error(what) {}
};

enum class GameMode {
  standard,    ///< one item per round, inactive once the budget is exhausted
  altruistic,  ///< additionally inactive once spending crosses rho * entitlement
  multi_pick,  ///< the winner may take k >= 1 items and pays k times her bid
};

/// When an altruistic agent's cumulative spend makes her inactive.
enum class SpendThreshold {
  strictly_greater,  ///< spend > rho * b
  at_least,          ///< spend >= rho * b
};

/// How a round is decided among agents tied at the highest bid.
struct TieBreakPolicy {
  enum class Kind { lexicographic, scripted, seeded_random, adversarial };

  Kind kind = Kind::lexicographic;
  /// scripted: preference order per round (round r uses entry r-1); lexicographic past the end.
  std::vector<std::vector<AgentIndex>> preferences;
  /// seeded_random: one draw from mt19937_64 per round with two or more tied agents.
  std::uint64_t seed = 0;
  /// adversarial: this agent only wins when every tied agent is her.
  AgentIndex against = 0;

  static TieBreakPolicy lexicographic() { return {}; }
  static TieBreakPolicy scripted(std::vector<std::vector<AgentIndex>> prefs) {
    TieBreakPolicy p;
    p.kind = Kind::scripted;
    p.preferences = std::move(prefs);
    return p;
  }
  static TieBreakPolicy seeded_random(std::uint64_t seed) {
    TieBreakPolicy p;
    p.kind = Kind::seeded_random;
    p.seed = seed;
    return p;
  }
  static TieBreakPolicy adversarial_against(AgentIndex agent) {
    TieBreakPolicy p;
    p.kind = Kind::adversarial;
    p.against = agent;
    return p;
  }

  friend bool operator==(const TieBreakPolicy&, const TieBreakPolicy&) = default;
};

struct GameConfig {
  GameMode mode = GameMode::standard;
  Rational rho = 1;  ///< altruistic spend fraction, in (0, 1]
  SpendThreshold threshold = SpendThreshold::strictly_greater;
  TieBreakPolicy tie_break;

  static GameConfig altruistic(Rational rho, TieBreakPolicy tb = {}) {
    GameConfig c;
    c.mode = GameMode::altruistic;
    c.rho = std::move(rho);
    c.tie_break = std::move(tb);
    return c;
  }

  void validate() const {
    if (mode == GameMode::altruistic && (rho <= 0 || rho > 1))
      throw GameError("altruistic rho must lie in (0, 1]");
  }

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

/// Mutable state of one game at a round boundary.
struct GameState {
  std::size_t round = 0;  ///< rounds completed so far
  ItemSet remaining;
  std::vector<ItemSet> bundles;
  std::vector<Rational> budgets;
  std::vector<Rational> spent;
  std::vector<bool> active;

  static GameState initial(const Instance& inst) {
    GameState s;
    s.remaining = inst.items();
    for (const auto& a : inst.agents()) {
      s.bundles.emplace_back(inst.ground_size());
      s.budgets.push_back(a.entitlement.value());
      s.spent.emplace_back(0);
      s.active.push_back(true);
    }
    return s;
  }

  bool any_active() const { return std::find(active.begin(), active.end(), true) != active.end(); }
  bool finished() const { return remaining.empty() || !any_active(); }

  Rational active_budget() const {
    Rational total = 0;
    for (std::size_t i = 0; i < budgets.size(); ++i)
      if (active[i]) total += budgets[i];
    return total;
  }
};

struct RoundRecord {
  std::size_t round = 0;                       ///< 1-based
  std::vector<std::optional<Rational>> bids;   ///< nullopt for agents inactive this round
  AgentIndex winner = 0;
  std::vector<ItemId> items;
  Rational payment;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

/// A strategy asked for something illegal; the engine applied a corrected value instead.
struct BidViolation {
  std::size_t round = 0;
  AgentIndex agent = 0;
  std::string reason;

  friend bool operator==(const BidViolation&, const BidViolation&) = default;
};

struct Transcript {
  GameConfig config;
  std::vector<RoundRecord> rounds;
  Allocation allocation;
  std::vector<BidViolation> violations;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// Everything a strategy may observe: budgets, bundles, remaining items, and past bids.
struct PublicView {
  const GameState& state;
  std::span<const RoundRecord> history;
  std::span<const Rational> entitlements;
  const GameConfig& config;

  std::size_t current_round() const { return state.round + 1; }
};

/// A bidding strategy for one agent in one game. Stateful; never share across games.
class Strategy {
 public:
  virtual ~Strategy() = default;
  /// Bid in [0, own remaining budget].
  virtual Rational bid(const PublicView& view, AgentIndex self) = 0;
  /// Items taken on winning with `bid`: exactly one outside multi-pick mode.
  virtual std::vector<ItemId> pick(const PublicView& view, AgentIndex self, const Rational& bid) = 0;
};

using StrategyPtr = std::unique_ptr<Strategy>;

namespace detail {

class TieBreaker {
 public:
  explicit TieBreaker(const TieBreakPolicy& p) : policy_(p), rng_(p.seed) {}

  /// `tied` is sorted by agent index and non-empty.
  AgentIndex choose(std::size_t round, const std::vector<AgentIndex>& tied) {
    switch (policy_.kind) {
      case TieBreakPolicy::Kind::lexicographic:
        return tied.front();
      case TieBreakPolicy::Kind::scripted:
        if (round >= 1 && round - 1 < policy_.preferences.size())
          for (AgentIndex a : policy_.preferences[round - 1])
            if (std::binary_search(tied.begin(), tied.end(), a)) return a;
        return tied.front();
      case TieBreakPolicy::Kind::seeded_random:
        if (tied.size() == 1) return tied.front();
        return tied[static_cast<std::size_t>(rng_() % tied.size())];
      case TieBreakPolicy::Kind::adversarial:
        for (AgentIndex a : tied)
          if (a != policy_.against) return a;
        return tied.front();
    }
    return tied.front();
  }

 private:
  const TieBreakPolicy& policy_;
  std::mt19937_64 rng_;
};

inline void settle_round(GameState& s, const GameConfig& cfg, std::span<const Rational> entitlements,
                         AgentIndex winner, const std::vector<ItemId>& items, const Rational& payment) {
  for (ItemId e : items) {
    s.remaining.erase(e);
    s.bundles[winner].insert(e);
  }
  s.budgets[winner] -= payment;
  s.spent[winner] += payment;
  ++s.round;
  if (s.budgets[winner] == 0) s.active[winner] = false;
  if (cfg.mode == GameMode::altruistic) {
    const Rational limit = cfg.rho * entitlements[winner];
    const bool crossed = cfg.threshold == SpendThreshold::strictly_greater ? s.spent[winner] > limit
                                                                          : s.spent[winner] >= limit;
    if (crossed) s.active[winner] = false;
  }
}

inline std::vector<Rational> entitlements_of(const Instance& inst) {
  std::vector<Rational> b;
  for (const auto& a : inst.agents()) b.push_back(a.entitlement.value());
  return b;
}

}  // namespace detail

struct GameResult {
  Allocation allocation;
  Transcript transcript;
};

/// Plays the bidding game to completion. Each round every active agent bids, the highest
/// bid wins (ties per config), the winner takes her pick and pays. The game ends when no
/// items remain or no agent is active; leftover items stay unallocated.
///
/// Out-of-range bids are clamped into [0, budget] and logged as violations. Picks of
/// unavailable items throw GameError. In multi-pick mode a pick list longer than the
/// budget affords at the bid is cut to the affordable prefix and logged.
inline GameResult run_game(const Instance& inst, std::span<Strategy* const> strategies,
                           const GameConfig& config) {
  config.validate();
  if (strategies.size() != inst.agent_count()) throw GameError("one strategy per agent required");
  const auto entitlements = detail::entitlements_of(inst);
  GameState state = GameState::initial(inst);
  Transcript t;
  t.config = config;
  detail::TieBreaker ties(config.tie_break);

  while (!state.finished()) {
    PublicView view{state, t.rounds, entitlements, config};
    const std::size_t round = view.current_round();
    RoundRecord rec;
    rec.round = round;
    rec.bids.resize(inst.agent_count());
    std::optional<Rational> top;
    for (AgentIndex i = 0; i < inst.agent_count(); ++i) {
      if (!state.active[i]) continue;
      Rational b = strategies[i]->bid(view, i);
      if (b < 0 || b > state.budgets[i]) {
        t.violations.push_back({round, i, "bid " + format_rational(b) + " outside [0, " +
                                              format_rational(state.budgets[i]) + "]"});
        b = b < 0 ? Rational(0) : state.budgets[i];
      }
      if (!top || b > *top) top = b;
      rec.bids[i] = std::move(b);
    }
    std::vector<AgentIndex> tied;
    for (AgentIndex i = 0; i < inst.agent_count(); ++i)
      if (rec.bids[i] && *rec.bids[i] == *top) tied.push_back(i);
    rec.winner = ties.choose(round, tied);
    const Rational& bid = *rec.bids[rec.winner];

    std::vector<ItemId> picks = strategies[rec.winner]->pick(view, rec.winner, bid);
    if (picks.empty()) throw GameError("round " + std::to_string(round) + ": empty pick");
    ItemSet chosen(inst.ground_size());
    for (ItemId e : picks) {
      if (!state.remaining.contains(e) || chosen.contains(e))
        throw GameError("round " + std::to_string(round) + ": agent " +
                        inst.agent(rec.winner).id + " picked an unavailable item");
      chosen.insert(e);
    }
    if (config.mode != GameMode::multi_pick && picks.size() != 1)
      throw GameError("round " + std::to_string(round) + ": exactly one item per round");
    if (config.mode == GameMode::multi_pick && bid > 0) {
      std::size_t k = picks.size();
      while (k > 1 && bid * Rational(k) > state.budgets[rec.winner]) --k;
      if (k < picks.size()) {
        t.violations.push_back({round, rec.winner, "pick list cut to affordable " + std::to_string(k)});
        picks.resize(k);
      }
    }
    rec.items = picks;
    rec.payment = bid * Rational(picks.size());
    detail::settle_round(state, config, entitlements, rec.winner, rec.items, rec.payment);
    t.rounds.push_back(std::move(rec));
  }
  t.allocation = Allocation{state.bundles};
  return GameResult{t.allocation, std::move(t)};
}

inline GameResult run_game(const Instance& inst, const std::vector<StrategyPtr>& strategies,
                           const GameConfig& config) {
  std::vector<Strategy*> raw;
  for (const auto& s : strategies) raw.push_back(s.get());
  return run_game(inst, std::span<Strategy* const>(raw), config);
}

/// Replays a transcript against the game rules. Returns the first problem found.
inline std::optional<std::string> transcript_problem(const Transcript& t, const Instance& inst,
                                                     const GameConfig& config) {
  if (!(t.config == config)) return "transcript config differs from the expected config";
  try {
    config.validate();
  } catch (const GameError& e) {
    return std::string(e.what());
  }
  const auto entitlements = detail::entitlements_of(inst);
  GameState state = GameState::initial(inst);
  detail::TieBreaker ties(config.tie_break);
  for (const auto& rec : t.rounds) {
    const std::string where = "round " + std::to_string(rec.round) + ": ";
    if (state.finished()) return where + "played after the game ended";
    if (rec.round != state.round + 1) return where + "out of sequence";
    if (rec.bids.size() != inst.agent_count()) return where + "wrong number of bids";
    std::optional<Rational> top;
    for (AgentIndex i = 0; i < inst.agent_count(); ++i) {
      if (rec.bids[i].has_value() != static_cast<bool>(state.active[i]))
        return where + "bid presence does not match activity of agent " + inst.agent(i).id;
      if (!rec.bids[i]) continue;
      if (*rec.bids[i] < 0 || *rec.bids[i] > state.budgets[i])
        return where + "bid of " + inst.agent(i).id + " outside [0, budget]";
      if (!top || *rec.bids[i] > *top) top = *rec.bids[i];
    }
    std::vector<AgentIndex> tied;
    for (AgentIndex i = 0; i < inst.agent_count(); ++i)
      if (rec.bids[i] && *rec.bids[i] == *top) tied.push_back(i);
    if (rec.winner >= inst.agent_count() || !rec.bids[rec.winner] || *rec.bids[rec.winner] != *top)
      return where + "winner did not submit a highest bid";
    if (ties.choose(rec.round, tied) != rec.winner) return where + "winner inconsistent with tie-break";
    if (rec.items.empty()) return where + "no item taken";
    if (config.mode != GameMode::multi_pick && rec.items.size() != 1)
      return where + "more than one item outside multi-pick mode";
    ItemSet chosen(inst.ground_size());
    for (ItemId e : rec.items) {
      if (!state.remaining.contains(e) || chosen.contains(e)) return where + "item not available";
      chosen.insert(e);
    }
    const Rational expected = *rec.bids[rec.winner] * Rational(rec.items.size());
    if (rec.payment != expected) return where + "payment differs from bid times items";
    if (rec.payment > state.budgets[rec.winner]) return where + "payment exceeds budget";
    detail::settle_round(state, config, entitlements, rec.winner, rec.items, rec.payment);
  }
  if (!state.finished()) return "transcript ends before the game is over";
  if (!(t.allocation == Allocation{state.bundles})) return "final allocation does not match the rounds";
  return std::nullopt;
}

inline bool verify_transcript(const Transcript& t, const Instance& inst, const GameConfig& config) {
  return !transcript_problem(t, inst, config).has_value();
}

/// Game state after the first `rounds` rounds of a transcript (no legality checks).
inline GameState state_after(const Instance& inst, const Transcript& t, std::size_t rounds) {
  if (rounds > t.rounds.size()) throw GameError("state_after: transcript too short");
  const auto entitlements = detail::entitlements_of(inst);
  GameState state = GameState::initial(inst);
  for (std::size_t r = 0; r < rounds; ++r)
    detail::settle_round(state, t.config, entitlements, t.rounds[r].winner, t.rounds[r].items,
                         t.rounds[r].payment);
  return state;
}

struct ResidualInstance {
  Instance instance;
  Rational gamma;                  ///< total remaining budget of the active agents
  std::vector<AgentIndex> origin;  ///< original index of each residual agent
};

/// The game at a round boundary viewed as a fresh instance: active agents only, the
/// unallocated items, and entitlements equal to remaining budgets scaled by 1/gamma.
/// Agents listed in `truncate_at` get their valuation truncated at the given level.
inline ResidualInstance residual_instance(const Instance& inst, const GameState& state,
                                          const std::map<AgentIndex, Rational>& truncate_at = {}) {
  const Rational gamma = state.active_budget();
  if (gamma == 0) throw GameError("residual_instance: no active budget left");
  std::vector<Agent> agents;
  std::vector<AgentIndex> origin;
  for (AgentIndex i = 0; i < inst.agent_count(); ++i) {
    if (!state.active[i]) continue;
    ValuationPtr v = inst.agent(i).valuation;
    if (auto it = truncate_at.find(i); it != truncate_at.end()) v = truncate_valuation(v, it->second);
    agents.push_back(Agent{inst.agent(i).id, Entitlement(state.budgets[i] / gamma), std::move(v)});
    origin.push_back(i);
  }
  return ResidualInstance{Instance(inst.item_names(), std::move(agents), state.remaining), gamma,
                          std::move(origin)};
}

}  // namespace bidfair
