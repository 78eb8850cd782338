#pragma once

#include "bidfair/item_set.hpp"
#include "bidfair/rational.hpp"
#include "bidfair/valuation.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace bidfair {

using AgentIndex = std::size_t;

class InstanceError : public std::invalid_argument {
 public:
  explicit InstanceError(const std::string& what) : std::invalid_argument(what) {}
};

/// An agent's claim on the items, in (0, 1]. Also the agent's starting budget.
class Entitlement {
 public:
  explicit Entitlement(Rational value) : value_(std::move(value)) {
    if (value_ <= 0 || value_ > 1)
      throw InstanceError("entitlement " + format_rational(value_) + " outside (0, 1]");
  }
  const Rational& value() const { return value_; }
  friend bool operator==(const Entitlement& a, const Entitlement& b) { return a.value_ == b.value_; }

 private:
  Rational value_;
};

struct Agent {
  std::string id;
  Entitlement entitlement;
  ValuationPtr valuation;
};

/// Items (a subset of a named ground set) plus agents whose entitlements sum to exactly 1.
///
/// Valuations are defined over the whole ground set; `items()` is the part of it that is
/// still up for allocation, so reductions and residual instances keep item indices stable.
class Instance {
 public:
  Instance(std::vector<std::string> item_names, std::vector<Agent> agents,
           std::optional<ItemSet> items = std::nullopt)
      : item_names_(std::move(item_names)),
        agents_(std::move(agents)),
        items_(items ? std::move(*items) : ItemSet::full(item_names_.size())) {
    validate();
  }

  std::size_t ground_size() const { return item_names_.size(); }
  const std::vector<std::string>& item_names() const { return item_names_; }
  const ItemSet& items() const { return items_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const Agent& agent(AgentIndex i) const { return agents_.at(i); }
  std::size_t agent_count() const { return agents_.size(); }

  AgentIndex agent_index(const std::string& id) const {
    for (AgentIndex i = 0; i < agents_.size(); ++i)
      if (agents_[i].id == id) return i;
    throw InstanceError("unknown agent '" + id + "'");
  }

  ItemId item_index(const std::string& name) const {
    for (ItemId e = 0; e < item_names_.size(); ++e)
      if (item_names_[e] == name) return e;
    throw InstanceError("unknown item '" + name + "'");
  }

  bool equal_entitlements() const {
    for (const auto& a : agents_)
      if (a.entitlement.value() != agents_.front().entitlement.value()) return false;
    return true;
  }

 private:
  void validate() const {
    std::unordered_set<std::string> names;
    for (const auto& n : item_names_)
      if (!names.insert(n).second) throw InstanceError("duplicate item id '" + n + "'");
    if (items_.ground_size() != item_names_.size())
      throw InstanceError("item subset over wrong ground size");
    if (agents_.empty()) throw InstanceError("instance has no agents");
    std::unordered_set<std::string> ids;
    Rational total = 0;
    for (const auto& a : agents_) {
      if (!ids.insert(a.id).second) throw InstanceError("duplicate agent id '" + a.id + "'");
      if (!a.valuation) throw InstanceError("agent '" + a.id + "' has no valuation");
      if (a.valuation->ground_size() != item_names_.size())
        throw InstanceError("valuation of '" + a.id + "' is over the wrong ground set");
      total += a.entitlement.value();
    }
    if (total != 1)
      throw InstanceError("entitlements sum to " + format_rational(total) + ", expected 1");
  }

  std::vector<std::string> item_names_;
  std::vector<Agent> agents_;
  ItemSet items_;
};

/// Disjoint bundles, one per agent (by index). Items in no bundle are unallocated.
struct Allocation {
  std::vector<ItemSet> bundles;

  static Allocation empty(const Instance& inst) {
    return Allocation{std::vector<ItemSet>(inst.agent_count(), ItemSet(inst.ground_size()))};
  }

  ItemSet allocated(std::size_t ground_size) const {
    ItemSet all(ground_size);
    for (const auto& b : bundles) all |= b;
    return all;
  }

  /// Bundles pairwise disjoint and drawn from the instance's items.
  bool valid_for(const Instance& inst) const {
    if (bundles.size() != inst.agent_count()) return false;
    ItemSet seen(inst.ground_size());
    for (const auto& b : bundles) {
      if (b.ground_size() != inst.ground_size()) return false;
      if (seen.intersects(b) || !b.is_subset_of(inst.items())) return false;
      seen |= b;
    }
    return true;
  }

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Weights over bundles certifying an anyprice share value.
struct FractionalPartition {
  struct Entry {
    ItemSet bundle;
    Rational weight;
  };
  std::vector<Entry> entries;

  Rational total_weight() const {
    Rational t = 0;
    for (const auto& e : entries) t += e.weight;
    return t;
  }

  /// Total weight of bundles containing item e.
  Rational coverage(ItemId e) const {
    Rational t = 0;
    for (const auto& x : entries)
      if (x.bundle.contains(e)) t += x.weight;
    return t;
  }
};

/// Drops `removed_agent` and `removed_item`; the other entitlements are scaled by 1/(1 - b_i).
inline Instance reduce_instance(const Instance& inst, AgentIndex removed_agent,
                                ItemId removed_item) {
  if (removed_agent >= inst.agent_count()) throw InstanceError("reduce_instance: no such agent");
  if (!inst.items().contains(removed_item)) throw InstanceError("reduce_instance: no such item");
  const Rational& b = inst.agent(removed_agent).entitlement.value();
  if (b == 1) throw InstanceError("reduce_instance: removing an agent with entitlement 1");
  const Rational scale = Rational(1) / (1 - b);
  std::vector<Agent> agents;
  for (AgentIndex j = 0; j < inst.agent_count(); ++j) {
    if (j == removed_agent) continue;
    const Agent& a = inst.agent(j);
    agents.push_back(Agent{a.id, Entitlement(a.entitlement.value() * scale), a.valuation});
  }
  return Instance(inst.item_names(), std::move(agents), inst.items().without(removed_item));
}

inline ValuationPtr truncate_valuation(ValuationPtr v, const Rational& t) {
  return std::make_shared<TruncatedValuation>(std::move(v), t);
}

inline ValuationPtr scale_valuation(ValuationPtr v, const Rational& c) {
  return std::make_shared<ScaledValuation>(std::move(v), c);
}

}  // namespace bidfair
