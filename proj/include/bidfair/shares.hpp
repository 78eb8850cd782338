#pragma once

#include "bidfair/instance.hpp"
#include "bidfair/lp.hpp"
#include "bidfair/valuation.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bidfair {

struct MmsResult {
  Rational value;
  std::vector<ItemSet> partition;  ///< n bundles, possibly empty
};

struct ApsResult {
  Rational value;
  FractionalPartition witness;
};

/// Maximin share: the best worst bundle over all partitions of `items` into n bundles.
///
/// Branch and bound over restricted-growth assignments of items to bundles. A partial
/// assignment is cut when no bundle can beat the incumbent even if it received every
/// unassigned item.
inline MmsResult mms_exact(const Valuation& v, std::size_t n, const ItemSet& items,
                           const SizeGuard& guard = {}) {
  if (n == 0) throw std::invalid_argument("mms_exact: n must be positive");
  const auto ids = items.items();
  const auto table = subset_values(v, ids, guard, "mms_exact");
  const std::size_t m = ids.size();
  const std::uint64_t all = (std::uint64_t{1} << m) - 1;

  std::vector<std::uint64_t> blocks(n, 0);
  std::vector<std::uint64_t> best_blocks(n, 0);
  Rational best = -1;

  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t next, std::size_t used) {
    const std::uint64_t rest = all & ~((std::uint64_t{1} << next) - 1);
    Rational bound = table[blocks[0] | rest];
    for (std::size_t i = 1; i < n; ++i) bound = min(bound, table[blocks[i] | rest]);
    if (bound <= best) return;
    if (next == m) {
      best = bound;
      best_blocks = blocks;
      return;
    }
    const std::uint64_t bit = std::uint64_t{1} << next;
    const std::size_t limit = std::min(used + 1, n);
    for (std::size_t i = 0; i < limit; ++i) {
      blocks[i] |= bit;
      dfs(next + 1, std::max(used, i + 1));
      blocks[i] &= ~bit;
    }
  };
  dfs(0, 0);

  MmsResult out{best, {}};
  for (auto mask : best_blocks) out.partition.push_back(ItemSet::from_mask(ids, v.ground_size(), mask));
  return out;
}

namespace detail {

/// Feasibility of the fractional-cover system for target z over the listed bundles.
/// Only inclusion-minimal qualifying bundles are used as columns: shrinking a bundle keeps
/// its value above z and can only lower item coverage, so nothing is lost.
inline std::optional<FractionalPartition> aps_cover(const std::vector<ItemId>& ids,
                                                    std::size_t ground_size,
                                                    const std::vector<Rational>& table,
                                                    const Rational& b, const Rational& z) {
  const std::size_t m = ids.size();
  std::vector<std::uint64_t> columns;
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    if (table[mask] < z) continue;
    bool minimal = true;
    for (std::size_t i = 0; i < m && minimal; ++i)
      if (mask >> i & 1U && table[mask & ~(std::uint64_t{1} << i)] >= z) minimal = false;
    if (minimal) columns.push_back(mask);
  }
  if (columns.empty()) return std::nullopt;

  lp::Program prog;
  prog.variables = columns.size();
  prog.add(std::vector<Rational>(columns.size(), Rational(1)), lp::Sense::equal, 1);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> row(columns.size());
    bool any = false;
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (columns[c] >> i & 1U) {
        row[c] = 1;
        any = true;
      }
    if (any) prog.add(std::move(row), lp::Sense::less_equal, b);
  }
  auto res = lp::solve(prog);
  if (res.status != lp::Status::optimal) return std::nullopt;
  FractionalPartition fp;
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (res.x[c] > 0) fp.entries.push_back({ItemSet::from_mask(ids, ground_size, columns[c]), res.x[c]});
  return fp;
}

}  // namespace detail

/// Anyprice share in its fractional-cover form: the largest achievable bundle value z
/// for which some distribution over bundles worth at least z puts weight at most b on
/// every item. Distinct bundle values are binary searched; each probe is an exact LP.
inline ApsResult aps_exact(const Valuation& v, const Rational& b, const ItemSet& items,
                           const SizeGuard& guard = {}) {
  if (b <= 0) throw std::invalid_argument("aps_exact: entitlement must be positive");
  const auto ids = items.items();
  const auto table = subset_values(v, ids, guard, "aps_exact");
  std::vector<Rational> levels(table.begin(), table.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // levels[0] is v(∅) = 0, always feasible with all weight on the empty bundle.
  std::size_t lo = 0;
  std::size_t hi = levels.size();
  auto witness = detail::aps_cover(ids, v.ground_size(), table, b, levels[0]);
  if (!witness) throw std::logic_error("aps_exact: lowest level infeasible");
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (auto fp = detail::aps_cover(ids, v.ground_size(), table, b, levels[mid])) {
      lo = mid;
      witness = std::move(fp);
    } else {
      hi = mid;
    }
  }
  return ApsResult{levels[lo], std::move(*witness)};
}

/// Closed form for unit demand: the ⌈1/b⌉-th largest value, or 0 if there are fewer items.
inline Rational aps_unit_demand(std::vector<Rational> values, const Rational& b) {
  if (b <= 0) throw std::invalid_argument("aps_unit_demand: entitlement must be positive");
  const Rational inv = Rational(1) / b;
  boost::multiprecision::mpz_int k = boost::multiprecision::numerator(inv) /
                                     boost::multiprecision::denominator(inv);
  if (k * boost::multiprecision::denominator(inv) != boost::multiprecision::numerator(inv)) ++k;
  std::sort(values.begin(), values.end(), [](const Rational& x, const Rational& y) { return y < x; });
  if (k > values.size()) return 0;
  return values[k.convert_to<std::size_t>() - 1];
}

inline bool verify_fractional_partition(const FractionalPartition& fp, const Valuation& v,
                                        const Rational& b, const Rational& z) {
  Rational total = 0;
  for (const auto& e : fp.entries) {
    if (e.weight < 0) return false;
    if (e.bundle.ground_size() != v.ground_size()) return false;
    if (e.weight > 0 && v.value(e.bundle) < z) return false;
    total += e.weight;
  }
  if (total != 1) return false;
  for (ItemId item = 0; item < v.ground_size(); ++item)
    if (fp.coverage(item) > b) return false;
  return true;
}

/// True iff `partition` splits `items` into disjoint bundles each worth at least z.
inline bool verify_mms_partition(const std::vector<ItemSet>& partition, const Valuation& v,
                                 const Rational& z, const ItemSet& items) {
  ItemSet seen(items.ground_size());
  for (const auto& bundle : partition) {
    if (bundle.ground_size() != items.ground_size()) return false;
    if (seen.intersects(bundle) || !bundle.is_subset_of(items)) return false;
    seen |= bundle;
    if (v.value(bundle) < z) return false;
  }
  return seen == items;
}

/// Price form: the best value affordable with `budget` under the given item prices.
/// Brute force over subsets of `items`.
inline Rational best_affordable_value(const Valuation& v, const std::vector<Rational>& prices,
                                      const Rational& budget, const ItemSet& items,
                                      const SizeGuard& guard = {}) {
  const auto ids = items.items();
  guard.check(ids.size(), "best_affordable_value");
  Rational best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ids.size()); ++mask) {
    Rational cost = 0;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (mask >> i & 1U) cost += prices[ids[i]];
    if (cost > budget) continue;
    best = max(best, v.value(ItemSet::from_mask(ids, v.ground_size(), mask)));
  }
  return best;
}

}  // namespace bidfair
