#pragma once

#include <numeric>
#include <vector>

#include "../finset.hpp"

namespace polyspan::detail {

/// Union-find whose class representative is always the smallest member.
class UnionFind {
public:
  explicit UnionFind(std::size_t n = 0) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns true when two distinct classes were merged.
  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    if (b < a)
      std::swap(a, b);
    parent_[b] = a;
    return true;
  }

  [[nodiscard]] std::size_t size() const { return parent_.size(); }

  /// Class labels 0..k-1 numbered by smallest member.
  std::vector<Index> labels(std::size_t *count = nullptr) {
    std::vector<Index> label(parent_.size(), npos);
    std::size_t next = 0;
    for (Index x = 0; x < parent_.size(); ++x) {
      const Index r = find(x);
      if (label[r] == npos)
        label[r] = next++;
      label[x] = label[r];
    }
    if (count)
      *count = next;
    return label;
  }

private:
  std::vector<Index> parent_;
};

} // namespace polyspan::detail
