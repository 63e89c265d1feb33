#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

namespace tamdag {

/// Set of node indices backed by a 64-bit mask. Iteration is in ascending index order.
class NodeSet {
 public:
  static constexpr int kMaxNodes = 64;

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = int;
    using difference_type = std::ptrdiff_t;
    using pointer = const int*;
    using reference = int;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr int operator*() const { return std::countr_zero(rest_); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr NodeSet() = default;
  constexpr explicit NodeSet(std::uint64_t bits) : bits_(bits) {}
  NodeSet(std::initializer_list<int> nodes) {
    for (int k : nodes) insert(k);
  }

  static NodeSet from_vector(const std::vector<int>& nodes) {
    NodeSet s;
    for (int k : nodes) s.insert(k);
    return s;
  }

  /// {0, ..., d-1}
  static constexpr NodeSet range(int d) {
    return NodeSet(d >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << d) - 1));
  }

  static constexpr NodeSet single(int k) { return NodeSet(std::uint64_t{1} << k); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int k) const { return k >= 0 && k < kMaxNodes && ((bits_ >> k) & 1U); }

  void insert(int k) {
    check(k);
    bits_ |= std::uint64_t{1} << k;
  }
  void erase(int k) {
    check(k);
    bits_ &= ~(std::uint64_t{1} << k);
  }

  constexpr NodeSet with(int k) const { return NodeSet(bits_ | (std::uint64_t{1} << k)); }
  constexpr NodeSet without(int k) const { return NodeSet(bits_ & ~(std::uint64_t{1} << k)); }

  constexpr bool is_subset_of(NodeSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool disjoint(NodeSet other) const { return (bits_ & other.bits_) == 0; }

  /// Smallest member; undefined on the empty set.
  constexpr int front() const { return std::countr_zero(bits_); }

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (int k : *this) out.push_back(k);
    return out;
  }

  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (int k : *this) {
      if (!first) out += ',';
      out += std::to_string(k);
      first = false;
    }
    out += '}';
    return out;
  }

  friend constexpr NodeSet operator|(NodeSet a, NodeSet b) { return NodeSet(a.bits_ | b.bits_); }
  friend constexpr NodeSet operator&(NodeSet a, NodeSet b) { return NodeSet(a.bits_ & b.bits_); }
  friend constexpr NodeSet operator-(NodeSet a, NodeSet b) { return NodeSet(a.bits_ & ~b.bits_); }
  constexpr NodeSet& operator|=(NodeSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr NodeSet& operator-=(NodeSet o) {
    bits_ &= ~o.bits_;
    return *this;
  }
  constexpr bool operator==(const NodeSet&) const = default;

 private:
  static void check(int k) {
    if (k < 0 || k >= kMaxNodes) throw std::out_of_range("node index out of range: " + std::to_string(k));
  }

  std::uint64_t bits_ = 0;
};

}  // namespace tamdag
