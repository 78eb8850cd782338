#pragma once

// Slow, independent reference computations used only to check the library.

#include "bidfair/lp.hpp"
#include "bidfair/valuation.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace oracle {

using bidfair::ItemId;
using bidfair::ItemSet;
using bidfair::Rational;
using bidfair::Valuation;

/// Maximin share by trying all n^m assignments of items to bundles.
inline Rational mms_brute(const Valuation& v, std::size_t n, const ItemSet& items) {
  const auto ids = items.items();
  std::vector<std::size_t> owner(ids.size(), 0);
  Rational best = -1;
  for (;;) {
    std::vector<ItemSet> bundles(n, ItemSet(v.ground_size()));
    for (std::size_t i = 0; i < ids.size(); ++i) bundles[owner[i]].insert(ids[i]);
    Rational worst = v.value(bundles[0]);
    for (std::size_t j = 1; j < n; ++j) worst = bidfair::min(worst, v.value(bundles[j]));
    best = bidfair::max(best, worst);
    std::size_t pos = 0;
    while (pos < ids.size() && ++owner[pos] == n) owner[pos++] = 0;
    if (pos == ids.size()) break;
  }
  return best;
}

/// Anyprice share by a linear scan over every achievable value, from the top, with one
/// LP column per bundle (no pruning to minimal bundles, no binary search).
inline Rational aps_scan(const Valuation& v, const Rational& b, const ItemSet& items) {
  const auto ids = items.items();
  const std::uint64_t count = std::uint64_t{1} << ids.size();
  std::vector<Rational> values;
  for (std::uint64_t mask = 0; mask < count; ++mask) values.push_back(v.value(ItemSet::from_mask(ids, v.ground_size(), mask)));
  std::vector<Rational> levels = values;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    std::vector<std::uint64_t> cols;
    for (std::uint64_t mask = 0; mask < count; ++mask)
      if (values[mask] >= *it) cols.push_back(mask);
    bidfair::lp::Program prog;
    prog.variables = cols.size();
    prog.add(std::vector<Rational>(cols.size(), Rational(1)), bidfair::lp::Sense::equal, 1);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      std::vector<Rational> row(cols.size());
      for (std::size_t c = 0; c < cols.size(); ++c) row[c] = (cols[c] >> i & 1U) ? 1 : 0;
      prog.add(std::move(row), bidfair::lp::Sense::less_equal, b);
    }
    if (bidfair::lp::solve(prog).status == bidfair::lp::Status::optimal) return *it;
  }
  return 0;
}

/// Submodularity straight from the definition: v(S) + v(T) >= v(S | T) + v(S & T).
inline bool submodular_brute(const Valuation& v, const ItemSet& items) {
  const auto ids = items.items();
  const std::uint64_t count = std::uint64_t{1} << ids.size();
  std::vector<Rational> values;
  for (std::uint64_t mask = 0; mask < count; ++mask) values.push_back(v.value(ItemSet::from_mask(ids, v.ground_size(), mask)));
  for (std::uint64_t s = 0; s < count; ++s)
    for (std::uint64_t t = 0; t < count; ++t)
      if (values[s] + values[t] < values[s | t] + values[s & t]) return false;
  return true;
}

}  // namespace oracle
