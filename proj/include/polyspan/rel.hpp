#pragma once

// Relations between finite sets, their right liftings (universal
// quantification) and polynomials whose neat leg is a subset inclusion,
// together with the partial-map-into-powerset description of those.

#include <algorithm>
#include <utility>
#include <vector>

#include "error.hpp"
#include "finset.hpp"
#include "span.hpp"

namespace polyspan::rel {

using Pair = std::pair<Index, Index>;

/// A subset of src × tgt, sorted and duplicate-free.
struct Relation {
  FinSetObj src;
  FinSetObj tgt;
  std::vector<Pair> pairs;

  Relation() = default;
  Relation(FinSetObj s, FinSetObj t, std::vector<Pair> ps) : src(std::move(s)), tgt(std::move(t)), pairs(std::move(ps)) {
    for (const auto &[x, y] : pairs)
      require(x < src.size && y < tgt.size, "relation range", "pair outside src × tgt");
    for (Index i = 1; i < pairs.size(); ++i)
      require(pairs[i - 1] < pairs[i], "relation normal form", "pairs must be strictly increasing");
  }

  /// Sorts and removes duplicates first.
  static Relation normalized(FinSetObj s, FinSetObj t, std::vector<Pair> ps) {
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return {std::move(s), std::move(t), std::move(ps)};
  }

  [[nodiscard]] bool contains(Index x, Index y) const {
    return std::binary_search(pairs.begin(), pairs.end(), Pair{x, y});
  }

  friend bool operator==(const Relation &a, const Relation &b) {
    return a.src == b.src && a.tgt == b.tgt && a.pairs == b.pairs;
  }
};

inline bool leq(const Relation &a, const Relation &b) {
  return a.src == b.src && a.tgt == b.tgt && std::includes(b.pairs.begin(), b.pairs.end(), a.pairs.begin(), a.pairs.end());
}

inline Relation identity_relation(const FinSetObj &x) {
  std::vector<Pair> ps;
  for (Index i = 0; i < x.size; ++i)
    ps.emplace_back(i, i);
  return {x, x, std::move(ps)};
}

inline Relation graph_relation(const FinSetMap &f) {
  std::vector<Pair> ps;
  for (Index i = 0; i < f.dom.size; ++i)
    ps.emplace_back(i, f(i));
  return {f.dom, f.cod, std::move(ps)};
}

inline Relation converse(const Relation &r) {
  std::vector<Pair> ps;
  for (const auto &[x, y] : r.pairs)
    ps.emplace_back(y, x);
  return Relation::normalized(r.tgt, r.src, std::move(ps));
}

/// The jointly monic span R -> src, R -> tgt.
inline spn::Span as_span(const Relation &r) {
  std::vector<Index> l, rr;
  for (const auto &[x, y] : r.pairs) {
    l.push_back(x);
    rr.push_back(y);
  }
  const FinSetObj apex(r.pairs.size());
  return {FinSetMap(apex, r.src, std::move(l)), FinSetMap(apex, r.tgt, std::move(rr))};
}

/// Image of a span in src × tgt.
inline Relation from_span(const spn::Span &s) {
  const FinSetObj product(s.left_foot.size * s.right_foot.size);
  std::vector<Index> t(s.apex.size);
  for (Index a = 0; a < t.size(); ++a)
    t[a] = s.left_leg(a) * s.right_foot.size + s.right_leg(a);
  const auto im = image_factorization(FinSetMap(s.apex, product, std::move(t)));
  std::vector<Pair> ps;
  for (Index v : im.mono.table)
    ps.emplace_back(v / s.right_foot.size, v % s.right_foot.size);
  return Relation::normalized(s.left_foot, s.right_foot, std::move(ps));
}

/// n after m: span composition followed by the image.
inline Relation rel_compose(const Relation &n, const Relation &m) {
  require_boundary(m.tgt == n.src, "relation composition", "middle sets differ");
  return from_span(spn::compose_spans(as_span(n), as_span(m)));
}

/// rif(n, u) for n : T -> Y and u : K -> Y: (k, t) iff every y with (t, y)
/// in n has (k, y) in u.
inline Relation rel_rif(const Relation &n, const Relation &u) {
  require_boundary(n.tgt == u.tgt, "relation lifting", "n and u have different codomains");
  std::vector<std::vector<Index>> row(n.src.size);
  for (const auto &[t, y] : n.pairs)
    row[t].push_back(y);
  std::vector<Pair> ps;
  for (Index k = 0; k < u.src.size; ++k)
    for (Index t = 0; t < n.src.size; ++t)
      if (std::all_of(row[t].begin(), row[t].end(), [&](Index y) { return u.contains(k, y); }))
        ps.emplace_back(k, t);
  return {u.src, n.src, std::move(ps)};
}

/// The tabulation of u : 1 -> X: the inclusion of the subset it names.
inline FinSetMap tabulate_rel(const Relation &u) {
  require(u.src.size == 1, "tabulation from the terminal", "relation must start at a singleton");
  std::vector<Index> members;
  for (const auto &[one, x] : u.pairs)
    members.push_back(x);
  return inclusion(Subset(u.tgt, std::move(members)));
}

// ---------------------------------------------------------------------------
// Polynomials in relations

/// X -A-> Z ⊆ C: a relation A from X to the subset Z (pairs (x, j), j an
/// index into Z.members) followed by the inclusion of Z into C.
struct RelPolynomial {
  FinSetObj X;
  FinSetObj C;
  Subset Z;
  Relation A;

  RelPolynomial() = default;
  RelPolynomial(FinSetObj x, Subset z, Relation a) : X(std::move(x)), C(z.carrier), Z(std::move(z)), A(std::move(a)) {
    require(A.src == X && A.tgt.size == Z.members.size(), "rel polynomial typing", "A must relate X to Z");
  }

  [[nodiscard]] FinSetObj z_object() const { return Z.members.size(); }

  /// A with its target pushed into C.
  [[nodiscard]] Relation relation_into_c() const {
    std::vector<Pair> ps;
    for (const auto &[x, j] : A.pairs)
      ps.emplace_back(x, Z.members[j]);
    return Relation::normalized(X, C, std::move(ps));
  }

  friend bool operator==(const RelPolynomial &a, const RelPolynomial &b) {
    return a.X == b.X && a.Z == b.Z && a.A == b.A;
  }
};

/// Q∘P. The new subset is {b ∈ Q.Z : every c related to b lies in P.Z}; the
/// relation is the restriction of Q.A to P.Z × Z' after P.A.
inline RelPolynomial compose_polyrel(const RelPolynomial &Q, const RelPolynomial &P) {
  require_boundary(P.C == Q.X, "rel polynomial composition", "P.C differs from Q.X");
  std::vector<Index> zq_kept; // positions in Q.Z
  std::vector<Index> members;
  for (Index j = 0; j < Q.Z.members.size(); ++j) {
    bool ok = true;
    for (const auto &[c, b] : Q.A.pairs)
      if (b == j && !P.Z.contains(c))
        ok = false;
    if (ok) {
      zq_kept.push_back(j);
      members.push_back(Q.Z.members[j]);
    }
  }
  std::vector<Index> pos_in_p(P.C.size, npos);
  for (Index i = 0; i < P.Z.members.size(); ++i)
    pos_in_p[P.Z.members[i]] = i;
  std::vector<Pair> n;
  for (Index i = 0; i < zq_kept.size(); ++i)
    for (const auto &[c, b] : Q.A.pairs)
      if (b == zq_kept[i])
        n.emplace_back(pos_in_p[c], i);
  const Relation N = Relation::normalized(P.z_object(), FinSetObj(zq_kept.size()), std::move(n));
  return {P.X, Subset(Q.C, std::move(members)), rel_compose(N, P.A)};
}

inline RelPolynomial identity_polyrel(const FinSetObj &x) {
  return {x, full_subset(x), identity_relation(x)};
}

/// A partial map D ⇀ 𝒫X: defined on `domain`, with value[i] the subset
/// assigned to domain.members[i].
struct PartialMapToPower {
  FinSetObj D;
  FinSetObj X;
  Subset domain;
  std::vector<Subset> value;

  PartialMapToPower() = default;
  PartialMapToPower(FinSetObj x, Subset dom, std::vector<Subset> v)
      : D(dom.carrier), X(std::move(x)), domain(std::move(dom)), value(std::move(v)) {
    require(value.size() == domain.members.size(), "partial map domain", "one value per domain element");
    for (const auto &s : value)
      require(s.carrier == X, "partial map values", "values must be subsets of X");
  }

  friend bool operator==(const PartialMapToPower &a, const PartialMapToPower &b) {
    return a.X == b.X && a.domain == b.domain && a.value == b.value;
  }
};

/// c ∈ Z ↦ {x : (x, c) ∈ A}.
inline PartialMapToPower to_partial_map(const RelPolynomial &P) {
  std::vector<std::vector<Index>> v(P.Z.members.size());
  for (const auto &[x, j] : P.A.pairs)
    v[j].push_back(x);
  std::vector<Subset> value;
  for (auto &xs : v)
    value.emplace_back(P.X, std::move(xs));
  return {P.X, P.Z, std::move(value)};
}

inline RelPolynomial from_partial_map(const PartialMapToPower &f) {
  std::vector<Pair> ps;
  for (Index j = 0; j < f.value.size(); ++j)
    for (Index x : f.value[j].members)
      ps.emplace_back(x, j);
  return {f.X, f.domain, Relation::normalized(f.X, FinSetObj(f.value.size()), std::move(ps))};
}

/// Kleisli composite of g : D ⇀ 𝒫C after f : C ⇀ 𝒫X: defined where g(b)
/// lies inside the domain of f, with value the union of f over g(b).
inline PartialMapToPower kleisli_compose(const PartialMapToPower &g, const PartialMapToPower &f) {
  require_boundary(g.X == f.D, "Kleisli composition", "g does not land in subsets of f's domain");
  std::vector<Index> pos(f.D.size, npos);
  for (Index i = 0; i < f.domain.members.size(); ++i)
    pos[f.domain.members[i]] = i;
  std::vector<Index> members;
  std::vector<Subset> value;
  for (Index j = 0; j < g.domain.members.size(); ++j) {
    const auto &gb = g.value[j];
    if (!std::all_of(gb.members.begin(), gb.members.end(), [&](Index c) { return pos[c] != npos; }))
      continue;
    std::vector<bool> mask(f.X.size, false);
    for (Index c : gb.members)
      for (Index x : f.value[pos[c]].members)
        mask[x] = true;
    members.push_back(g.domain.members[j]);
    value.push_back(subset_from_mask(f.X, mask));
  }
  return {f.X, Subset(g.D, std::move(members)), std::move(value)};
}

/// H_K(P)(s) for s : K -> X: (k, c) iff c ∈ Z and (k, x) ∈ s for every x
/// with (x, c) ∈ A.
inline Relation hK_rel(const FinSetObj &K, const RelPolynomial &P, const Relation &s) {
  require_boundary(s.src == K && s.tgt == P.X, "H_K argument", "s is not a relation K -> X");
  std::vector<Pair> ps;
  for (Index k = 0; k < K.size; ++k)
    for (Index j = 0; j < P.Z.members.size(); ++j) {
      bool ok = true;
      for (const auto &[x, jj] : P.A.pairs)
        if (jj == j && !s.contains(k, x)) {
          ok = false;
          break;
        }
      if (ok)
        ps.emplace_back(k, P.Z.members[j]);
    }
  return Relation::normalized(K, P.C, std::move(ps));
}

/// The same value computed as (incl)_*∘rif(A°, s).
inline Relation hK_rel_via_rif(const FinSetObj &K, const RelPolynomial &P, const Relation &s) {
  const Relation lifted = rel_rif(converse(P.A), s);
  return rel_compose(graph_relation(inclusion(P.Z)), lifted);
}

} // namespace polyspan::rel
