#pragma once

// The base category of finite sets: objects are canonical index ranges
// 0..n-1, maps are tables. Every constructed object (pullbacks, dependent
// products, images) fixes its enumeration order so results reproduce
// bit-for-bit.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"

namespace polyspan {

using Index = std::size_t;
inline constexpr Index npos = std::numeric_limits<Index>::max();

struct FinSetObj {
  std::size_t size = 0;
  std::vector<std::string> labels; // empty, or exactly `size` distinct names

  FinSetObj() = default;
  FinSetObj(std::size_t n) : size(n) {} // NOLINT: sizes convert implicitly
  FinSetObj(std::size_t n, std::vector<std::string> names) : size(n), labels(std::move(names)) {
    require(labels.size() == size, "labels length", "expected " + std::to_string(size) + " labels");
    std::set<std::string> seen(labels.begin(), labels.end());
    require(seen.size() == labels.size(), "labels distinct", "duplicate label");
  }

  friend bool operator==(const FinSetObj &a, const FinSetObj &b) { return a.size == b.size; }
};

struct FinSetMap {
  FinSetObj dom;
  FinSetObj cod;
  std::vector<Index> table;

  FinSetMap() = default;
  FinSetMap(FinSetObj d, FinSetObj c, std::vector<Index> t)
      : dom(std::move(d)), cod(std::move(c)), table(std::move(t)) {
    require(table.size() == dom.size, "map totality",
            "table has " + std::to_string(table.size()) + " entries for a domain of size " +
                std::to_string(dom.size));
    for (Index v : table)
      require(v < cod.size, "map totality",
              "entry " + std::to_string(v) + " outside codomain of size " + std::to_string(cod.size));
  }

  Index operator()(Index a) const { return table[a]; }

  friend bool operator==(const FinSetMap &a, const FinSetMap &b) {
    return a.dom == b.dom && a.cod == b.cod && a.table == b.table;
  }
};

struct Subset {
  FinSetObj carrier;
  std::vector<Index> members; // strictly increasing

  Subset() = default;
  Subset(FinSetObj c, std::vector<Index> m) : carrier(std::move(c)), members(std::move(m)) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      require(members[i] < carrier.size, "subset range", "member out of range");
      require(i == 0 || members[i - 1] < members[i], "subset sorted", "members not strictly increasing");
    }
  }

  [[nodiscard]] bool contains(Index x) const {
    return std::binary_search(members.begin(), members.end(), x);
  }
  [[nodiscard]] std::vector<bool> mask() const {
    std::vector<bool> m(carrier.size, false);
    for (Index x : members)
      m[x] = true;
    return m;
  }

  friend bool operator==(const Subset &a, const Subset &b) {
    return a.carrier == b.carrier && a.members == b.members;
  }
};

// ---------------------------------------------------------------------------
// Elementary maps

inline FinSetMap identity_map(const FinSetObj &x) {
  std::vector<Index> t(x.size);
  for (Index i = 0; i < x.size; ++i)
    t[i] = i;
  return {x, x, std::move(t)};
}

inline FinSetMap constant_map(const FinSetObj &dom, const FinSetObj &cod, Index value) {
  return {dom, cod, std::vector<Index>(dom.size, value)};
}

inline FinSetMap terminal_map(const FinSetObj &dom) { return constant_map(dom, 1, 0); }

/// g after f.
inline FinSetMap compose(const FinSetMap &g, const FinSetMap &f) {
  require_boundary(f.cod == g.dom, "composable maps", "codomain/domain mismatch");
  std::vector<Index> t(f.dom.size);
  for (Index a = 0; a < f.dom.size; ++a)
    t[a] = g(f(a));
  return {f.dom, g.cod, std::move(t)};
}

inline bool is_injective(const FinSetMap &f) {
  std::vector<bool> hit(f.cod.size, false);
  for (Index v : f.table) {
    if (hit[v])
      return false;
    hit[v] = true;
  }
  return true;
}

inline bool is_surjective(const FinSetMap &f) {
  std::vector<bool> hit(f.cod.size, false);
  for (Index v : f.table)
    hit[v] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

inline bool is_bijective(const FinSetMap &f) { return f.dom.size == f.cod.size && is_injective(f); }

inline FinSetMap inverse(const FinSetMap &f) {
  require(is_bijective(f), "bijective map", "inverse of a non-bijection");
  std::vector<Index> t(f.cod.size);
  for (Index a = 0; a < f.dom.size; ++a)
    t[f(a)] = a;
  return {f.cod, f.dom, std::move(t)};
}

/// Sorted preimages: result[b] lists f^{-1}(b) in increasing order.
inline std::vector<std::vector<Index>> fibers_of(const FinSetMap &f) {
  std::vector<std::vector<Index>> out(f.cod.size);
  for (Index a = 0; a < f.dom.size; ++a)
    out[f(a)].push_back(a);
  return out;
}

/// Calls `visit(choice)` for every tuple with choice[i] < bounds[i], in
/// lexicographic order (first coordinate most significant). A single empty
/// tuple is visited when `bounds` is empty.
template <class Visit> void for_each_tuple(const std::vector<std::size_t> &bounds, Visit &&visit) {
  for (std::size_t b : bounds)
    if (b == 0)
      return;
  std::vector<Index> choice(bounds.size(), 0);
  while (true) {
    visit(static_cast<const std::vector<Index> &>(choice));
    std::size_t i = bounds.size();
    while (i > 0) {
      --i;
      if (++choice[i] < bounds[i])
        break;
      choice[i] = 0;
      if (i == 0)
        return;
    }
    if (bounds.empty())
      return;
  }
}

/// Every map dom -> cod, lexicographic by table.
template <class Visit> void for_each_map(const FinSetObj &dom, const FinSetObj &cod, Visit &&visit) {
  std::vector<std::size_t> bounds(dom.size, cod.size);
  for_each_tuple(bounds, [&](const std::vector<Index> &t) { visit(FinSetMap(dom, cod, t)); });
}

// ---------------------------------------------------------------------------
// Pullbacks

struct Pullback {
  FinSetObj apex;
  FinSetMap pr1;
  FinSetMap pr2;
  std::size_t right_size = 0;
  std::vector<Index> slot; // (a, b) -> apex index, or npos

  [[nodiscard]] Index index_of(Index a, Index b) const { return slot[a * right_size + b]; }
};

/// Apex {(a, b) : f(a) = g(b)} in lexicographic (a, b) order.
inline Pullback pullback(const FinSetMap &f, const FinSetMap &g) {
  require_boundary(f.cod == g.cod, "pullback cospan", "codomains differ");
  Pullback pb;
  pb.right_size = g.dom.size;
  pb.slot.assign(f.dom.size * g.dom.size, npos);
  std::vector<Index> l, r;
  const auto gf = fibers_of(g);
  for (Index a = 0; a < f.dom.size; ++a)
    for (Index b : gf[f(a)]) {
      pb.slot[a * pb.right_size + b] = l.size();
      l.push_back(a);
      r.push_back(b);
    }
  pb.apex = FinSetObj(l.size());
  pb.pr1 = FinSetMap(pb.apex, f.dom, std::move(l));
  pb.pr2 = FinSetMap(pb.apex, g.dom, std::move(r));
  return pb;
}

/// All maps m : cone apex -> pb.apex with pr1 m = c1 and pr2 m = c2.
/// Exhaustive over the whole hom-set; used to exercise the universal property.
inline std::vector<FinSetMap> pullback_mediators(const Pullback &pb, const FinSetMap &c1,
                                                 const FinSetMap &c2) {
  std::vector<FinSetMap> out;
  for_each_map(c1.dom, pb.apex, [&](const FinSetMap &m) {
    if (compose(pb.pr1, m) == c1 && compose(pb.pr2, m) == c2)
      out.push_back(m);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Dependent product along f

/// Pi_f(x) for f : A -> B and x : X -> A, together with its counit.
/// Elements over b are the sections s of x on the sorted fiber f^{-1}(b),
/// enumerated by b and then lexicographically; an empty fiber carries the
/// single empty section.
struct DependentProduct {
  FinSetMap f;
  FinSetMap x;
  FinSetObj total;
  FinSetMap proj;                           // total -> B
  std::vector<std::vector<Index>> fiber;    // f^{-1}(b), sorted
  std::vector<Index> position;              // a -> its position inside fiber[f(a)]
  std::vector<std::vector<Index>> sections; // element -> chosen X-element per fiber position
  Pullback counit_domain;                   // pullback of (proj, f)
  FinSetMap eval;                           // counit_domain.apex -> X

  [[nodiscard]] Index apply(Index element, Index a) const { return sections[element][position[a]]; }

  /// Index of the section `s` over b, or npos.
  [[nodiscard]] Index index_of(Index b, const std::vector<Index> &s) const {
    auto it = lookup.find({b, s});
    return it == lookup.end() ? npos : it->second;
  }

  std::map<std::pair<Index, std::vector<Index>>, Index> lookup;
};

inline DependentProduct pi_f(const FinSetMap &f, const FinSetMap &x) {
  require_boundary(x.cod == f.dom, "dependent product", "family is not over the domain of f");
  DependentProduct d;
  d.f = f;
  d.x = x;
  d.fiber = fibers_of(f);
  d.position.assign(f.dom.size, 0);
  for (const auto &fb : d.fiber)
    for (Index i = 0; i < fb.size(); ++i)
      d.position[fb[i]] = i;
  const auto xf = fibers_of(x);
  std::vector<Index> proj;
  for (Index b = 0; b < f.cod.size; ++b) {
    std::vector<std::size_t> bounds;
    for (Index a : d.fiber[b])
      bounds.push_back(xf[a].size());
    for_each_tuple(bounds, [&](const std::vector<Index> &c) {
      std::vector<Index> s(c.size());
      for (std::size_t i = 0; i < c.size(); ++i)
        s[i] = xf[d.fiber[b][i]][c[i]];
      d.lookup.emplace(std::make_pair(b, s), d.sections.size());
      d.sections.push_back(std::move(s));
      proj.push_back(b);
    });
  }
  d.total = FinSetObj(proj.size());
  d.proj = FinSetMap(d.total, f.cod, std::move(proj));
  d.counit_domain = pullback(d.proj, f);
  std::vector<Index> ev(d.counit_domain.apex.size);
  for (Index i = 0; i < ev.size(); ++i)
    ev[i] = d.apply(d.counit_domain.pr1(i), d.counit_domain.pr2(i));
  d.eval = FinSetMap(d.counit_domain.apex, x.dom, std::move(ev));
  return d;
}

// ---------------------------------------------------------------------------
// Subsets, images, quantifiers

inline Subset full_subset(const FinSetObj &x) { return {x, identity_map(x).table}; }

inline Subset subset_from_mask(const FinSetObj &x, const std::vector<bool> &mask) {
  std::vector<Index> m;
  for (Index i = 0; i < x.size; ++i)
    if (mask[i])
      m.push_back(i);
  return {x, std::move(m)};
}

inline bool is_subset_of(const Subset &a, const Subset &b) {
  return std::includes(b.members.begin(), b.members.end(), a.members.begin(), a.members.end());
}

inline Subset preimage(const FinSetMap &f, const Subset &t) {
  require_boundary(t.carrier == f.cod, "preimage", "subset is not of the codomain");
  const auto m = t.mask();
  std::vector<bool> out(f.dom.size);
  for (Index a = 0; a < f.dom.size; ++a)
    out[a] = m[f(a)];
  return subset_from_mask(f.dom, out);
}

/// Direct image.
inline Subset exists_f(const FinSetMap &f, const Subset &s) {
  require_boundary(s.carrier == f.dom, "direct image", "subset is not of the domain");
  std::vector<bool> out(f.cod.size, false);
  for (Index a : s.members)
    out[f(a)] = true;
  return subset_from_mask(f.cod, out);
}

/// {b : f^{-1}(b) is contained in s}; empty fibers qualify vacuously.
inline Subset forall_f(const FinSetMap &f, const Subset &s) {
  require_boundary(s.carrier == f.dom, "universal image", "subset is not of the domain");
  const auto m = s.mask();
  std::vector<bool> out(f.cod.size, true);
  for (Index a = 0; a < f.dom.size; ++a)
    if (!m[a])
      out[f(a)] = false;
  return subset_from_mask(f.cod, out);
}

struct ImageFactorization {
  FinSetMap epi;  // dom -> image
  FinSetMap mono; // image -> cod
};

/// Image elements are ordered by their first preimage.
inline ImageFactorization image_factorization(const FinSetMap &f) {
  std::vector<Index> slot(f.cod.size, npos);
  std::vector<Index> epi(f.dom.size);
  std::vector<Index> mono;
  for (Index a = 0; a < f.dom.size; ++a) {
    Index &s = slot[f(a)];
    if (s == npos) {
      s = mono.size();
      mono.push_back(f(a));
    }
    epi[a] = s;
  }
  FinSetObj image(mono.size());
  return {FinSetMap(f.dom, image, std::move(epi)), FinSetMap(image, f.cod, std::move(mono))};
}

/// Inclusion of a subset as an injective map from its own index range.
inline FinSetMap inclusion(const Subset &s) {
  return {FinSetObj(s.members.size()), s.carrier, s.members};
}

} // namespace polyspan
