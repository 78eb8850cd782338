#pragma once

#include "bidfair/item_set.hpp"
#include "bidfair/rational.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bidfair {

/// Raised when an exhaustive routine is asked to enumerate more items than its guard allows.
class SizeGuardError : public std::runtime_error {
 public:
  explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

/// Upper bound on the number of items an exhaustive routine may enumerate.
struct SizeGuard {
  std::size_t max_items = 12;

  void check(std::size_t items, const char* what) const {
    if (items > max_items || items > 62)
      throw SizeGuardError(std::string(what) + ": " + std::to_string(items) +
                           " items exceeds size guard " + std::to_string(max_items));
  }
};

/// Value-query oracle over subsets of a fixed ground set.
///
/// Every call to value() is counted. The counter is atomic so one oracle may be shared by
/// concurrent game runs; the structured accessors on subclasses are for serialization and
/// test oracles only, strategies are handed the base interface.
class Valuation {
 public:
  explicit Valuation(std::size_t ground_size) : ground_size_(ground_size) {}
  Valuation(const Valuation&) = delete;
  Valuation& operator=(const Valuation&) = delete;
  virtual ~Valuation() = default;

  std::size_t ground_size() const { return ground_size_; }

  Rational value(const ItemSet& s) const {
    queries_.fetch_add(1, std::memory_order_relaxed);
    return evaluate(s);
  }

  std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }
  void reset_query_count() const { queries_.store(0, std::memory_order_relaxed); }

  virtual std::string kind() const = 0;

 protected:
  virtual Rational evaluate(const ItemSet& s) const = 0;

  void check_item(ItemId e) const {
    if (e >= ground_size_) throw std::out_of_range("item index out of range");
  }

 private:
  std::size_t ground_size_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

using ValuationPtr = std::shared_ptr<const Valuation>;

namespace detail {
inline void require_nonnegative(const std::vector<Rational>& values, const char* who) {
  for (const auto& x : values)
    if (x < 0) throw std::invalid_argument(std::string(who) + ": negative item value");
}
}  // namespace detail

/// v(S) = sum of item values.
class AdditiveValuation final : public Valuation {
 public:
  explicit AdditiveValuation(std::vector<Rational> values)
      : Valuation(values.size()), values_(std::move(values)) {
    detail::require_nonnegative(values_, "additive");
  }
  const std::vector<Rational>& values() const { return values_; }
  std::string kind() const override { return "additive"; }

 protected:
  Rational evaluate(const ItemSet& s) const override {
    Rational total = 0;
    s.for_each([&](ItemId e) { total += values_[e]; });
    return total;
  }

 private:
  std::vector<Rational> values_;
};

/// v(S) = most valuable single item of S.
class UnitDemandValuation final : public Valuation {
 public:
  explicit UnitDemandValuation(std::vector<Rational> values)
      : Valuation(values.size()), values_(std::move(values)) {
    detail::require_nonnegative(values_, "unit_demand");
  }
  const std::vector<Rational>& values() const { return values_; }
  std::string kind() const override { return "unit_demand"; }

 protected:
  Rational evaluate(const ItemSet& s) const override {
    Rational best = 0;
    s.for_each([&](ItemId e) {
      if (values_[e] > best) best = values_[e];
    });
    return best;
  }

 private:
  std::vector<Rational> values_;
};

/// Pointwise maximum of additive clauses.
class XOSValuation final : public Valuation {
 public:
  XOSValuation(std::size_t ground_size, std::vector<std::vector<Rational>> clauses)
      : Valuation(ground_size), clauses_(std::move(clauses)) {
    if (clauses_.empty()) throw std::invalid_argument("xos: at least one clause required");
    for (const auto& c : clauses_) {
      if (c.size() != ground_size) throw std::invalid_argument("xos: clause size mismatch");
      detail::require_nonnegative(c, "xos");
    }
  }
  const std::vector<std::vector<Rational>>& clauses() const { return clauses_; }
  std::string kind() const override { return "xos"; }

 protected:
  Rational evaluate(const ItemSet& s) const override {
    Rational best = 0;
    for (const auto& clause : clauses_) {
      Rational total = 0;
      s.for_each([&](ItemId e) { total += clause[e]; });
      if (total > best) best = total;
    }
    return best;
  }

 private:
  std::vector<std::vector<Rational>> clauses_;
};

/// Items arranged in rows of perfect substitutes; rows are additive.
/// v(S) = sum of w_i over rows i that S touches. Items outside every row are worthless.
class RowSubstitutesValuation final : public Valuation {
 public:
  struct Row {
    Rational weight;
    std::vector<ItemId> items;
  };

  RowSubstitutesValuation(std::size_t ground_size, std::vector<Row> rows)
      : Valuation(ground_size), rows_(std::move(rows)) {
    ItemSet seen(ground_size);
    for (const auto& row : rows_) {
      if (row.weight < 0) throw std::invalid_argument("row_substitutes: negative row weight");
      ItemSet members(ground_size);
      for (ItemId e : row.items) {
        check_item(e);
        if (seen.contains(e)) throw std::invalid_argument("row_substitutes: item in two rows");
        seen.insert(e);
        members.insert(e);
      }
      row_sets_.push_back(std::move(members));
    }
  }
  const std::vector<Row>& rows() const { return rows_; }
  std::string kind() const override { return "row_substitutes"; }

 protected:
  Rational evaluate(const ItemSet& s) const override {
    Rational total = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (s.intersects(row_sets_[i])) total += rows_[i].weight;
    return total;
  }

 private:
  std::vector<Row> rows_;
  std::vector<ItemSet> row_sets_;
};

/// Weighted coverage: each item covers a subset of a weighted universe,
/// v(S) = total weight of the union of what S covers.
class WeightedCoverageValuation final : public Valuation {
 public:
  WeightedCoverageValuation(std::vector<Rational> element_weights,
                            std::vector<std::vector<std::size_t>> covers)
      : Valuation(covers.size()), weights_(std::move(element_weights)), covers_(std::move(covers)) {
    detail::require_nonnegative(weights_, "coverage");
    for (const auto& c : covers_)
      for (std::size_t u : c)
        if (u >= weights_.size()) throw std::invalid_argument("coverage: element out of range");
  }
  const std::vector<Rational>& element_weights() const { return weights_; }
  const std::vector<std::vector<std::size_t>>& covers() const { return covers_; }
  std::string kind() const override { return "coverage"; }

 protected:
  Rational evaluate(const ItemSet& s) const override {
    std::vector<char> hit(weights_.size(), 0);
    Rational total = 0;
    s.for_each([&](ItemId e) {
      for (std::size_t u : covers_[e])
        if (!hit[u]) {
          hit[u] = 1;
          total += weights_[u];
        }
    });
    return total;
  }

 private:
  std::vector<Rational> weights_;
  std::vector<std::vector<std::size_t>> covers_;
};

/// Explicit set-function table for tiny fixtures. Unlisted sets are worth 0.
/// No monotonicity or normalization is enforced; use is_monotone_normalized.
class TableValuation final : public Valuation {
 public:
  TableValuation(std::size_t ground_size, std::vector<std::pair<ItemSet, Rational>> entries)
      : Valuation(ground_size) {
    for (auto& [set, value] : entries) {
      if (set.ground_size() != ground_size)
        throw std::invalid_argument("table: set over wrong ground size");
      table_.emplace_back(std::move(set), std::move(value));
    }
  }
  const std::vector<std::pair<ItemSet, Rational>>& entries() const { return table_; }
  std::string kind() const override { return "table"; }

 protected:
  Rational evaluate(const ItemSet& s) const override {
    for (const auto& [set, value] : table_)
      if (set == s) return value;
    return 0;
  }

 private:
  std::vector<std::pair<ItemSet, Rational>> table_;
};

/// v^t(S) = min(v(S), t).
class TruncatedValuation final : public Valuation {
 public:
  TruncatedValuation(ValuationPtr base, Rational cap)
      : Valuation(base->ground_size()), base_(std::move(base)), cap_(std::move(cap)) {
    if (cap_ < 0) throw std::invalid_argument("truncation level must be nonnegative");
  }
  const ValuationPtr& base() const { return base_; }
  const Rational& cap() const { return cap_; }
  std::string kind() const override { return "truncated"; }

 protected:
  Rational evaluate(const ItemSet& s) const override { return min(base_->value(s), cap_); }

 private:
  ValuationPtr base_;
  Rational cap_;
};

/// c * v(S) for c > 0.
class ScaledValuation final : public Valuation {
 public:
  ScaledValuation(ValuationPtr base, Rational factor)
      : Valuation(base->ground_size()), base_(std::move(base)), factor_(std::move(factor)) {
    if (factor_ <= 0) throw std::invalid_argument("scale factor must be positive");
  }
  const ValuationPtr& base() const { return base_; }
  const Rational& factor() const { return factor_; }
  std::string kind() const override { return "scaled"; }

 protected:
  Rational evaluate(const ItemSet& s) const override { return factor_ * base_->value(s); }

 private:
  ValuationPtr base_;
  Rational factor_;
};

/// v(S + e) - v(S). Throws if e is already in S.
inline Rational marginal(const Valuation& v, ItemId e, const ItemSet& s) {
  if (s.contains(e)) throw std::invalid_argument("marginal: item already in the set");
  return v.value(s.with(e)) - v.value(s);
}

/// Values of every subset of `items`, indexed by bitmask over the listed items.
inline std::vector<Rational> subset_values(const Valuation& v, const std::vector<ItemId>& items,
                                           const SizeGuard& guard, const char* who) {
  guard.check(items.size(), who);
  const std::uint64_t count = std::uint64_t{1} << items.size();
  std::vector<Rational> out;
  out.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask)
    out.push_back(v.value(ItemSet::from_mask(items, v.ground_size(), mask)));
  return out;
}

/// Exhaustive check of v(S+i) + v(S+j) >= v(S+i+j) + v(S) over S ⊆ M, i != j outside S,
/// which is equivalent to diminishing marginals for all S ⊆ T.
inline bool is_submodular(const Valuation& v, const ItemSet& items, const SizeGuard& guard = {}) {
  const auto ids = items.items();
  const auto table = subset_values(v, ids, guard, "is_submodular");
  const std::size_t m = ids.size();
  for (std::uint64_t s = 0; s < table.size(); ++s)
    for (std::size_t i = 0; i < m; ++i) {
      if (s >> i & 1U) continue;
      for (std::size_t j = i + 1; j < m; ++j) {
        if (s >> j & 1U) continue;
        const std::uint64_t si = s | std::uint64_t{1} << i;
        const std::uint64_t sj = s | std::uint64_t{1} << j;
        if (table[si] + table[sj] < table[si | sj] + table[s]) return false;
      }
    }
  return true;
}

/// Exhaustive check of v(∅) = 0 and v(S) <= v(S+e) over subsets of M.
inline bool is_monotone_normalized(const Valuation& v, const ItemSet& items,
                                   const SizeGuard& guard = {}) {
  const auto ids = items.items();
  const auto table = subset_values(v, ids, guard, "is_monotone_normalized");
  if (table[0] != 0) return false;
  for (std::uint64_t s = 0; s < table.size(); ++s) {
    if (table[s] < 0) return false;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (!(s >> i & 1U) && table[s | std::uint64_t{1} << i] < table[s]) return false;
  }
  return true;
}

}  // namespace bidfair
