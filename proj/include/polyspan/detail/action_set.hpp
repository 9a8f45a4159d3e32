#pragma once

// Many-sorted sets with unary operations. Presheaves, profunctors and
// discrete fibrations all flatten to this shape, which gives one place for
// homomorphism enumeration, isomorphism search and congruence quotients.

#include <functional>
#include <optional>
#include <vector>

#include "../finset.hpp"
#include "union_find.hpp"

namespace polyspan::detail {

struct ActionSet {
  struct Op {
    Index from_sort;
    Index to_sort;
    std::vector<Index> table; // global element -> global element, npos off from_sort
  };

  std::size_t sorts = 0;
  std::vector<Index> sort_of;
  std::vector<Op> ops;

  [[nodiscard]] std::size_t size() const { return sort_of.size(); }

  [[nodiscard]] std::vector<std::vector<Index>> by_sort() const {
    std::vector<std::vector<Index>> out(sorts);
    for (Index x = 0; x < sort_of.size(); ++x)
      out[sort_of[x]].push_back(x);
    return out;
  }
};

/// Backtracking search over sort- and operation-preserving maps A -> B.
/// Only generators branch; everything reachable is forced by propagation.
class HomSearch {
public:
  HomSearch(const ActionSet &a, const ActionSet &b, bool injective)
      : a_(a), b_(b), injective_(injective), assign_(a.size(), npos), used_(b.size(), npos),
        targets_(b.by_sort()) {
    // ops indexed by source sort for propagation
    ops_from_.resize(a.sorts);
    for (Index k = 0; k < a.ops.size(); ++k)
      ops_from_[a.ops[k].from_sort].push_back(k);
  }

  /// Visits each homomorphism; stop early by returning false from `visit`.
  /// Returns false if the search was stopped early.
  bool run(const std::function<bool(const std::vector<Index> &)> &visit) {
    if (!compatible())
      return true;
    return search(0, visit);
  }

private:
  bool compatible() const {
    if (a_.sorts != b_.sorts || a_.ops.size() != b_.ops.size())
      return false;
    for (Index k = 0; k < a_.ops.size(); ++k)
      if (a_.ops[k].from_sort != b_.ops[k].from_sort || a_.ops[k].to_sort != b_.ops[k].to_sort)
        return false;
    if (injective_) {
      const auto as = a_.by_sort();
      for (Index s = 0; s < a_.sorts; ++s)
        if (as[s].size() > targets_[s].size())
          return false;
    }
    return true;
  }

  bool assign(Index x, Index y, std::vector<Index> &trail) {
    std::vector<std::pair<Index, Index>> queue{{x, y}};
    while (!queue.empty()) {
      auto [u, v] = queue.back();
      queue.pop_back();
      if (assign_[u] != npos) {
        if (assign_[u] != v)
          return false;
        continue;
      }
      if (injective_ && used_[v] != npos)
        return false;
      assign_[u] = v;
      if (injective_)
        used_[v] = u;
      trail.push_back(u);
      for (Index k : ops_from_[a_.sort_of[u]])
        queue.emplace_back(a_.ops[k].table[u], b_.ops[k].table[v]);
    }
    return true;
  }

  void undo(std::vector<Index> &trail) {
    for (Index u : trail) {
      if (injective_)
        used_[assign_[u]] = npos;
      assign_[u] = npos;
    }
    trail.clear();
  }

  bool search(Index from, const std::function<bool(const std::vector<Index> &)> &visit) {
    while (from < a_.size() && assign_[from] != npos)
      ++from;
    if (from == a_.size())
      return visit(assign_);
    for (Index y : targets_[a_.sort_of[from]]) {
      std::vector<Index> trail;
      const bool ok = assign(from, y, trail);
      if (ok && !search(from + 1, visit)) {
        undo(trail);
        return false;
      }
      undo(trail);
    }
    return true;
  }

  const ActionSet &a_;
  const ActionSet &b_;
  bool injective_;
  std::vector<Index> assign_;
  std::vector<Index> used_;
  std::vector<std::vector<Index>> targets_;
  std::vector<std::vector<Index>> ops_from_;
};

inline std::vector<std::vector<Index>> all_homs(const ActionSet &a, const ActionSet &b) {
  std::vector<std::vector<Index>> out;
  HomSearch(a, b, false).run([&](const std::vector<Index> &h) {
    out.push_back(h);
    return true;
  });
  return out;
}

inline bool same_shape(const ActionSet &a, const ActionSet &b) {
  if (a.sorts != b.sorts || a.size() != b.size())
    return false;
  const auto as = a.by_sort(), bs = b.by_sort();
  for (Index s = 0; s < a.sorts; ++s)
    if (as[s].size() != bs[s].size())
      return false;
  return true;
}

inline std::optional<std::vector<Index>> find_iso(const ActionSet &a, const ActionSet &b) {
  if (!same_shape(a, b))
    return std::nullopt;
  std::optional<std::vector<Index>> found;
  HomSearch(a, b, true).run([&](const std::vector<Index> &h) {
    found = h;
    return false;
  });
  return found;
}

inline std::vector<std::vector<Index>> all_isos(const ActionSet &a, const ActionSet &b) {
  std::vector<std::vector<Index>> out;
  if (!same_shape(a, b))
    return out;
  HomSearch(a, b, true).run([&](const std::vector<Index> &h) {
    out.push_back(h);
    return true;
  });
  return out;
}

/// Checks that `h` is a homomorphism A -> B.
inline bool is_hom(const ActionSet &a, const ActionSet &b, const std::vector<Index> &h) {
  if (h.size() != a.size())
    return false;
  for (Index x = 0; x < a.size(); ++x)
    if (h[x] >= b.size() || b.sort_of[h[x]] != a.sort_of[x])
      return false;
  for (Index k = 0; k < a.ops.size(); ++k)
    for (Index x = 0; x < a.size(); ++x)
      if (a.ops[k].table[x] != npos && h[a.ops[k].table[x]] != b.ops[k].table[h[x]])
        return false;
  return true;
}

/// Closes `uf` into a congruence: related elements have related images
/// under every operation.
inline void close_congruence(const ActionSet &a, UnionFind &uf) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto &op : a.ops) {
      std::vector<Index> image_of_class(a.size(), npos);
      for (Index x = 0; x < a.size(); ++x) {
        if (op.table[x] == npos)
          continue;
        const Index r = uf.find(x);
        if (image_of_class[r] == npos)
          image_of_class[r] = op.table[x];
        else if (uf.unite(image_of_class[r], op.table[x]))
          changed = true;
      }
    }
  }
}

} // namespace polyspan::detail
