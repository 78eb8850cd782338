#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace bidfair {

/// Index of an item in the ground set. The index order is the canonical item order.
using ItemId = std::size_t;

/// Subset of a fixed ground set of items.
class ItemSet {
 public:
  static constexpr ItemId npos = static_cast<ItemId>(-1);

  ItemSet() = default;
  explicit ItemSet(std::size_t ground_size) : bits_(ground_size) {}
  ItemSet(std::size_t ground_size, std::initializer_list<ItemId> items) : bits_(ground_size) {
    for (ItemId e : items) insert(e);
  }

  static ItemSet full(std::size_t ground_size) {
    ItemSet s(ground_size);
    s.bits_.set();
    return s;
  }

  /// Builds the subset of `ground` selected by the low bits of `mask`, in canonical order.
  static ItemSet from_mask(const std::vector<ItemId>& ground, std::size_t ground_size,
                           std::uint64_t mask) {
    ItemSet s(ground_size);
    for (std::size_t i = 0; i < ground.size(); ++i)
      if (mask >> i & 1U) s.insert(ground[i]);
    return s;
  }

  std::size_t ground_size() const { return bits_.size(); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool contains(ItemId e) const { return e < bits_.size() && bits_.test(e); }

  ItemSet& insert(ItemId e) {
    bits_.set(e);
    return *this;
  }
  ItemSet& erase(ItemId e) {
    bits_.reset(e);
    return *this;
  }

  ItemSet with(ItemId e) const {
    ItemSet s = *this;
    s.insert(e);
    return s;
  }
  ItemSet without(ItemId e) const {
    ItemSet s = *this;
    s.erase(e);
    return s;
  }

  bool is_subset_of(const ItemSet& other) const { return bits_.is_subset_of(other.bits_); }
  bool intersects(const ItemSet& other) const { return bits_.intersects(other.bits_); }

  ItemSet& operator|=(const ItemSet& o) {
    bits_ |= o.bits_;
    return *this;
  }
  ItemSet& operator&=(const ItemSet& o) {
    bits_ &= o.bits_;
    return *this;
  }
  ItemSet& operator-=(const ItemSet& o) {
    bits_ -= o.bits_;
    return *this;
  }
  friend ItemSet operator|(ItemSet a, const ItemSet& b) { return a |= b; }
  friend ItemSet operator&(ItemSet a, const ItemSet& b) { return a &= b; }
  friend ItemSet operator-(ItemSet a, const ItemSet& b) { return a -= b; }
  friend bool operator==(const ItemSet& a, const ItemSet& b) { return a.bits_ == b.bits_; }
  friend bool operator<(const ItemSet& a, const ItemSet& b) { return a.items() < b.items(); }

  ItemId first() const {
    auto i = bits_.find_first();
    return i == boost::dynamic_bitset<std::uint64_t>::npos ? npos : i;
  }
  ItemId next(ItemId e) const {
    auto i = bits_.find_next(e);
    return i == boost::dynamic_bitset<std::uint64_t>::npos ? npos : i;
  }

  /// Members in canonical order.
  std::vector<ItemId> items() const {
    std::vector<ItemId> out;
    out.reserve(size());
    for (ItemId e = first(); e != npos; e = next(e)) out.push_back(e);
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (ItemId e = first(); e != npos; e = next(e)) f(e);
  }

  std::size_t hash() const {
    std::size_t h = bits_.size();
    for (ItemId e = first(); e != npos; e = next(e)) h = h * 1000003U ^ (e + 0x9e3779b9U);
    return h;
  }

 private:
  boost::dynamic_bitset<std::uint64_t> bits_;
};

struct ItemSetHash {
  std::size_t operator()(const ItemSet& s) const { return s.hash(); }
};

}  // namespace bidfair
