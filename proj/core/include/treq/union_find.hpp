#pragma once

#include <cstdint>
#include <vector>

namespace treq {

/// Disjoint sets over dense ids with path halving and union by size.
/// Ties go to the smaller root id so merges are order-independent.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), classes_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool same(std::uint32_t x, std::uint32_t y) { return find(x) == find(y); }

  /// Merges the classes of x and y; returns the surviving root.
  /// Precondition: find(x) != find(y).
  std::uint32_t unite(std::uint32_t x, std::uint32_t y) {
    std::uint32_t rx = find(x);
    std::uint32_t ry = find(y);
    if (size_[rx] < size_[ry] || (size_[rx] == size_[ry] && ry < rx)) {
      std::swap(rx, ry);
    }
    parent_[ry] = rx;
    size_[rx] += size_[ry];
    --classes_;
    return rx;
  }

  std::uint32_t class_size(std::uint32_t x) { return size_[find(x)]; }
  std::size_t class_count() const { return classes_; }
  std::size_t element_count() const { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::size_t classes_;
};

}  // namespace treq
