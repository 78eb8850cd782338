#pragma once

#include "bidfair/instance.hpp"
#include "bidfair/scenario.hpp"
#include "bidfair/valuation.hpp"

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace bidfair {

/// [q_1, ..., q_{k+1}] with q_1 = 2 and q_{i+1} = 1 + q_1 * ... * q_i.
inline std::vector<std::uint64_t> sylvester(std::size_t k) {
  if (k == 0) throw std::invalid_argument("sylvester: k must be at least 1");
  if (k > 6) throw std::overflow_error("sylvester: k > 6 overflows 64-bit agent counts");
  std::vector<std::uint64_t> q{2};
  std::uint64_t product = 2;
  for (std::size_t i = 1; i <= k; ++i) {
    q.push_back(product + 1);
    product *= q.back();
  }
  return q;
}

namespace detail {

/// Row-major matrix of item ids with names "e<row>_<col>" (1-based), rows in the given order.
struct ItemGrid {
  std::vector<std::string> names;
  std::vector<std::vector<ItemId>> rows;
};

inline ItemGrid make_grid(const std::vector<std::size_t>& row_labels, std::size_t columns) {
  ItemGrid g;
  for (std::size_t label : row_labels) {
    std::vector<ItemId> row;
    for (std::size_t j = 0; j < columns; ++j) {
      row.push_back(g.names.size());
      g.names.push_back("e" + std::to_string(label) + "_" + std::to_string(j + 1));
    }
    g.rows.push_back(std::move(row));
  }
  return g;
}

inline std::vector<Agent> equal_agents(std::size_t n, const ValuationPtr& v) {
  std::vector<Agent> agents;
  for (std::size_t i = 0; i < n; ++i)
    agents.push_back(Agent{i == 0 ? "p" : "o" + std::to_string(i), Entitlement(Rational(1, n)), v});
  return agents;
}

/// Opponent scripts for the row-clearing phase: rows are cleared in order, each row by
/// n/q_i consecutive opponents that win q_i rounds apiece at price[i]. Opponent ids start
/// at 1; `first_round` is the 1-based round in which the first row starts.
inline std::vector<StrategySpec> row_clearing_scripts(std::size_t n, const std::vector<std::uint64_t>& q,
                                                      const std::vector<std::vector<ItemId>>& rows,
                                                      const std::vector<Rational>& price,
                                                      std::size_t first_round) {
  std::vector<StrategySpec> specs(n);
  const std::size_t total_rounds = first_round - 1 + rows.size() * n;
  std::size_t opponent = 1;
  std::size_t round = first_round;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t wins = q[i];
    for (std::size_t g = 0; g < n / wins; ++g, ++opponent) {
      auto& s = specs[opponent];
      s.kind = StrategySpec::Kind::scripted;
      s.bids.assign(total_rounds, Rational(0));
      s.picks.assign(total_rounds, {});
      for (std::size_t w = 0; w < wins; ++w, ++round) {
        s.bids[round - 1] = price[i];
        s.picks[round - 1] = {rows[i][round - first_round - i * n]};
      }
    }
  }
  return specs;
}

inline void check_k(std::size_t k, std::size_t max_k, const char* who) {
  if (k < 1 || k > max_k)
    throw std::invalid_argument(std::string(who) + ": k must lie in [1, " + std::to_string(max_k) + "]");
}

}  // namespace detail

/// Row instance for the altruistic game whose adversarial run holds p to exactly 1/MMS.
///
/// n = q_1 * ... * q_k agents share one valuation: row i (i <= k) has n substitutes worth
/// 1/(q_i - 1) each, row k+1 has n substitutes worth 1. Row k+1 is declared first so p's
/// opening pick lands there. Round 1 is p's alone; then each row i is cleared by n/q_i
/// opponents that tie p's bid and win through adversarial tie-breaking, each becoming
/// inactive on its q_i-th win. Game rho is 1/MMS.
inline ScriptedRun gen_altruistic_negative(std::size_t k) {
  detail::check_k(k, 4, "gen_altruistic_negative");
  const auto q = sylvester(k);
  const std::size_t n = q[k] - 1;
  std::vector<std::size_t> labels{k + 1};
  for (std::size_t i = 1; i <= k; ++i) labels.push_back(i);
  auto grid = detail::make_grid(labels, n);

  std::vector<RowSubstitutesValuation::Row> vrows;
  Rational mms = 1;
  vrows.push_back({1, grid.rows[0]});
  for (std::size_t i = 0; i < k; ++i) {
    const Rational w = Rational(1, q[i] - 1);
    vrows.push_back({w, grid.rows[i + 1]});
    mms += w;
  }
  ValuationPtr v = std::make_shared<RowSubstitutesValuation>(grid.names.size(), std::move(vrows));
  Instance inst(grid.names, detail::equal_agents(n, v));

  const Rational scale = Rational(1, n) / mms;  // one unit of value in budget terms
  std::vector<Rational> price;
  for (std::size_t i = 0; i < k; ++i) price.push_back(scale / (q[i] - 1));
  const std::vector<std::vector<ItemId>> clear(grid.rows.begin() + 1, grid.rows.end());
  auto specs = detail::row_clearing_scripts(n, q, clear, price, 2);
  specs[0] = StrategySpec::altruistic(mms);

  GameConfig cfg = GameConfig::altruistic(Rational(1) / mms, TieBreakPolicy::adversarial_against(0));
  return ScriptedRun{"altruistic_negative_k" + std::to_string(k), std::move(inst), 0, cfg,
                     std::move(specs), "mms", mms, 1, false};
}

/// Row instance for the standard game whose adversarial run holds proportional(rho) to
/// exactly 1/MMS with rho = 1/(3 - 2/n).
///
/// Row i (i <= k) items are worth 2/q_i, row k+1 items 1, so MMS = APS = 3 - 2/n. Opponents
/// bid b/q_i (half the budget unit times 2/q_i), tie p, and take q_i row-i items each.
inline ScriptedRun gen_original_negative(std::size_t k) {
  detail::check_k(k, 4, "gen_original_negative");
  const auto q = sylvester(k);
  const std::size_t n = q[k] - 1;
  std::vector<std::size_t> labels{k + 1};
  for (std::size_t i = 1; i <= k; ++i) labels.push_back(i);
  auto grid = detail::make_grid(labels, n);

  std::vector<RowSubstitutesValuation::Row> vrows;
  vrows.push_back({1, grid.rows[0]});
  for (std::size_t i = 0; i < k; ++i) vrows.push_back({Rational(2, q[i]), grid.rows[i + 1]});
  ValuationPtr v = std::make_shared<RowSubstitutesValuation>(grid.names.size(), std::move(vrows));
  Instance inst(grid.names, detail::equal_agents(n, v));

  const Rational b(1, n);
  const Rational share = 3 - 2 * b;
  std::vector<Rational> price;
  for (std::size_t i = 0; i < k; ++i) price.push_back(b / q[i]);
  const std::vector<std::vector<ItemId>> clear(grid.rows.begin() + 1, grid.rows.end());
  auto specs = detail::row_clearing_scripts(n, q, clear, price, 2);
  specs[0] = StrategySpec::proportional(ProportionalApsStrategy::default_rho(b), share);

  GameConfig cfg;
  cfg.tie_break = TieBreakPolicy::adversarial_against(0);
  return ScriptedRun{"original_negative_k" + std::to_string(k), std::move(inst), 0, cfg,
                     std::move(specs), "aps", share, 1, false};
}

/// The altruistic construction with each value-1 item replaced by q_k - 1 items worth
/// 1/(q_k - 1), laid out as q_k - 1 extra rows of substitutes. No single item is worth more
/// than a row-1 item. Opponents clear rows 1..k from round 1; p then collects one item of
/// each extra row.
inline ScriptedRun gen_modified_negative(std::size_t k) {
  detail::check_k(k, 4, "gen_modified_negative");
  const auto q = sylvester(k);
  const std::size_t n = q[k] - 1;
  const std::size_t extra = q[k - 1] - 1;
  std::vector<std::size_t> labels;
  for (std::size_t i = 1; i <= k + extra; ++i) labels.push_back(i);
  auto grid = detail::make_grid(labels, n);

  std::vector<RowSubstitutesValuation::Row> vrows;
  Rational mms = 1;
  for (std::size_t i = 0; i < k; ++i) {
    vrows.push_back({Rational(1, q[i] - 1), grid.rows[i]});
    mms += Rational(1, q[i] - 1);
  }
  for (std::size_t i = k; i < k + extra; ++i) vrows.push_back({Rational(1, extra), grid.rows[i]});
  ValuationPtr v = std::make_shared<RowSubstitutesValuation>(grid.names.size(), std::move(vrows));
  Instance inst(grid.names, detail::equal_agents(n, v));

  const Rational scale = Rational(1, n) / mms;
  std::vector<Rational> price;
  for (std::size_t i = 0; i < k; ++i) price.push_back(scale / (q[i] - 1));
  const std::vector<std::vector<ItemId>> clear(grid.rows.begin(), grid.rows.begin() + k);
  auto specs = detail::row_clearing_scripts(n, q, clear, price, 1);
  specs[0] = StrategySpec::altruistic(mms);

  GameConfig cfg = GameConfig::altruistic(Rational(1) / mms, TieBreakPolicy::adversarial_against(0));
  return ScriptedRun{"modified_negative_k" + std::to_string(k), std::move(inst), 0, cfg,
                     std::move(specs), "mms", mms, 1, false};
}

/// XOS instance I(n, k): a k x n matrix of items, v(S) = largest number of items S holds
/// in one column, so MMS = APS = k. With budget unit u = 1/(nk): n/2 agents bid u/2 forever
/// and take the first available item; n/2 - 1 agents bid their whole budget in the k - 1
/// rounds after each win of p and take from the column p just entered. p plays
/// proportional(1/(3 - 2/n)) with share k and ends with value at most 1.
inline ScriptedRun gen_xos_hard(std::size_t n, std::size_t k) {
  if (k < 1) throw std::invalid_argument("gen_xos_hard: k must be positive");
  if (n < 4 * k * k) throw std::invalid_argument("gen_xos_hard: requires n >= 4k^2");
  if (n % 2 != 0) throw std::invalid_argument("gen_xos_hard: n must be even");
  std::vector<std::size_t> labels;
  for (std::size_t i = 1; i <= k; ++i) labels.push_back(i);
  auto grid = detail::make_grid(labels, n);

  std::vector<std::vector<ItemId>> columns(n);
  std::vector<std::vector<Rational>> clauses(n, std::vector<Rational>(grid.names.size()));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < k; ++i) {
      columns[j].push_back(grid.rows[i][j]);
      clauses[j][grid.rows[i][j]] = 1;
    }
  ValuationPtr v = std::make_shared<XOSValuation>(grid.names.size(), std::move(clauses));
  Instance inst(grid.names, detail::equal_agents(n, v));

  const Rational b(1, n);
  const Rational unit = b / k;
  std::vector<StrategySpec> specs(n);
  specs[0] = StrategySpec::proportional(ProportionalApsStrategy::default_rho(b), Rational(k));
  for (std::size_t i = 1; i <= n / 2; ++i) {
    specs[i].kind = StrategySpec::Kind::xos_type1;
    specs[i].amount = unit / 2;
  }
  for (std::size_t i = n / 2 + 1; i < n; ++i) {
    specs[i].kind = StrategySpec::Kind::xos_type2;
    specs[i].target = 0;
    specs[i].window = k - 1;
    specs[i].columns = columns;
  }
  GameConfig cfg;
  cfg.tie_break = TieBreakPolicy::adversarial_against(0);
  return ScriptedRun{"xos_hard_n" + std::to_string(n) + "_k" + std::to_string(k), std::move(inst), 0,
                     cfg, std::move(specs), "mms", Rational(k), 1, true};
}

/// Random weighted-coverage instance. Each item covers every universe element with
/// probability 1/3 (at least one); element weights are integers in [1, 9]. Entitlements are
/// equal, or proportional to integers in [1, 6]. Uses raw mt19937_64 draws so the output is
/// identical across standard libraries.
inline Instance gen_random_submodular(std::uint64_t seed, std::size_t n, std::size_t m,
                                      std::size_t universe, bool equal_entitlements = true) {
  if (n == 0 || universe == 0) throw std::invalid_argument("gen_random_submodular: empty instance");
  std::mt19937_64 rng(seed);
  auto draw = [&](std::uint64_t k) { return rng() % k; };

  std::vector<Rational> ent;
  if (equal_entitlements) {
    ent.assign(n, Rational(1, n));
  } else {
    std::vector<std::uint64_t> w;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) total += w.emplace_back(1 + draw(6));
    for (auto x : w) ent.emplace_back(Rational(x, total));
  }

  std::vector<std::string> names;
  for (std::size_t e = 0; e < m; ++e) names.push_back("e" + std::to_string(e + 1));
  std::vector<Agent> agents;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> weights;
    for (std::size_t u = 0; u < universe; ++u) weights.emplace_back(1 + draw(9));
    std::vector<std::vector<std::size_t>> covers(m);
    for (auto& c : covers) {
      for (std::size_t u = 0; u < universe; ++u)
        if (draw(3) == 0) c.push_back(u);
      if (c.empty()) c.push_back(draw(universe));
    }
    agents.push_back(Agent{"a" + std::to_string(i + 1), Entitlement(ent[i]),
                           std::make_shared<WeightedCoverageValuation>(std::move(weights), std::move(covers))});
  }
  return Instance(std::move(names), std::move(agents));
}

}  // namespace bidfair
