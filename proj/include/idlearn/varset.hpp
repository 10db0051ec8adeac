#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace idlearn {

using VarId = int;

/// Largest graph a VarSet can describe. VarSet is the only type that depends
/// on this bound; swapping it for a growable bitset lifts the ceiling.
inline constexpr int kMaxVars = 64;

/// Set of observable variables, stored as a 64-bit mask. Iteration yields
/// members in ascending VarId order.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr explicit VarSet(std::uint64_t bits) : bits_(bits) {}
  VarSet(std::initializer_list<VarId> ids) {
    for (VarId v : ids) insert(v);
  }

  static constexpr VarSet single(VarId v) { return VarSet(std::uint64_t{1} << v); }
  static constexpr VarSet first_n(int n) {
    return n >= 64 ? VarSet(~std::uint64_t{0}) : VarSet((std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const { return std::popcount(bits_); }
  constexpr bool contains(VarId v) const { return (bits_ >> v) & 1U; }
  constexpr bool contains(VarSet other) const { return (other.bits_ & ~bits_) == 0; }
  constexpr bool intersects(VarSet other) const { return (bits_ & other.bits_) != 0; }

  void insert(VarId v) { bits_ |= std::uint64_t{1} << v; }
  void erase(VarId v) { bits_ &= ~(std::uint64_t{1} << v); }

  /// Smallest member; undefined on the empty set.
  VarId front() const { return std::countr_zero(bits_); }

  std::vector<VarId> to_vector() const {
    std::vector<VarId> out;
    out.reserve(size());
    for (VarId v : *this) out.push_back(v);
    return out;
  }

  friend constexpr VarSet operator|(VarSet a, VarSet b) { return VarSet(a.bits_ | b.bits_); }
  friend constexpr VarSet operator&(VarSet a, VarSet b) { return VarSet(a.bits_ & b.bits_); }
  friend constexpr VarSet operator-(VarSet a, VarSet b) { return VarSet(a.bits_ & ~b.bits_); }
  VarSet& operator|=(VarSet o) { bits_ |= o.bits_; return *this; }
  VarSet& operator&=(VarSet o) { bits_ &= o.bits_; return *this; }
  VarSet& operator-=(VarSet o) { bits_ &= ~o.bits_; return *this; }
  friend constexpr bool operator==(VarSet a, VarSet b) = default;
  friend constexpr bool operator<(VarSet a, VarSet b) { return a.bits_ < b.bits_; }

  class iterator {
   public:
    using value_type = VarId;
    using difference_type = std::ptrdiff_t;
    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    VarId operator*() const { return std::countr_zero(rest_); }
    iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    friend constexpr bool operator==(iterator a, iterator b) = default;

   private:
    std::uint64_t rest_ = 0;
  };

  iterator begin() const { return iterator(bits_); }
  iterator end() const { return iterator(0); }

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace idlearn
