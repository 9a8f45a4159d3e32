#pragma once

// Seeded generators for every data type; used by the property suites and
// by `polyspan random`. All draws go through Rng, so a seed fixes the output.

#include <algorithm>
#include <functional>
#include <tuple>
#include <map>
#include <set>
#include <vector>

#include "fincat.hpp"
#include "finset.hpp"
#include "io.hpp"
#include "mod.hpp"
#include "poly_set.hpp"
#include "rel.hpp"
#include "rng.hpp"
#include "span.hpp"

namespace polyspan::gen {

inline FinSetMap map(Rng &rng, const FinSetObj &dom, const FinSetObj &cod) {
  require(dom.size == 0 || cod.size > 0, "random map", "no maps into the empty set");
  std::vector<Index> t(dom.size);
  for (auto &v : t)
    v = rng.below(cod.size);
  return {dom, cod, std::move(t)};
}

inline FinSetMap bijection(Rng &rng, const FinSetObj &x) {
  std::vector<Index> t(x.size);
  for (Index i = 0; i < t.size(); ++i)
    t[i] = i;
  rng.shuffle(t);
  return {x, x, std::move(t)};
}

/// A family over `base` with at most `max_total` elements.
inline poly::IndexedFamily family(Rng &rng, const FinSetObj &base, std::size_t max_total) {
  const std::size_t n = base.size == 0 ? 0 : rng.between(0, max_total);
  std::vector<Index> t(n);
  for (auto &v : t)
    v = rng.below(base.size);
  std::sort(t.begin(), t.end());
  return poly::IndexedFamily(FinSetMap(n, base, std::move(t)));
}

/// A map of families A -> A' over the same base, with A' built so that
/// every fibre of A has somewhere to go.
inline poly::FamilyMap family_map(Rng &rng, const poly::IndexedFamily &a, std::size_t extra) {
  const auto fib = fibers_of(a.proj);
  std::vector<Index> proj;
  for (Index x = 0; x < a.base.size; ++x) {
    std::size_t k = rng.between(fib[x].empty() ? 0 : 1, fib[x].size() + extra);
    if (!fib[x].empty() && k == 0)
      k = 1;
    for (Index i = 0; i < k; ++i)
      proj.push_back(x);
  }
  poly::IndexedFamily target(FinSetMap(proj.size(), a.base, proj));
  const auto tf = fibers_of(target.proj);
  std::vector<Index> t(a.total.size);
  for (Index i = 0; i < t.size(); ++i) {
    const auto &c = tf[a.proj(i)];
    t[i] = c[rng.below(c.size())];
  }
  return {a, target, FinSetMap(a.total, target.total, std::move(t))};
}

inline poly::Polynomial polynomial(Rng &rng, const FinSetObj &X, const FinSetObj &Y, std::size_t max_e,
                                   std::size_t max_s) {
  const std::size_t s = Y.size == 0 ? 0 : rng.between(0, max_s);
  const std::size_t e = (X.size == 0 || s == 0) ? 0 : rng.between(0, max_e);
  return {map(rng, e, X), map(rng, e, s), map(rng, s, Y)};
}

inline spn::Span span(Rng &rng, const FinSetObj &L, const FinSetObj &R, std::size_t max_apex) {
  const std::size_t n = (L.size == 0 || R.size == 0) ? 0 : rng.between(0, max_apex);
  return {map(rng, n, L), map(rng, n, R)};
}

/// Relabels the apex of a span by a random permutation.
inline spn::Span shuffle_apex(Rng &rng, const spn::Span &s) {
  const FinSetMap perm = bijection(rng, s.apex);
  const FinSetMap inv = inverse(perm);
  return {compose(s.left_leg, inv), compose(s.right_leg, inv)};
}

inline rel::Relation relation(Rng &rng, const FinSetObj &src, const FinSetObj &tgt, unsigned num = 1,
                              unsigned den = 2) {
  std::vector<rel::Pair> ps;
  for (Index x = 0; x < src.size; ++x)
    for (Index y = 0; y < tgt.size; ++y)
      if (rng.chance(num, den))
        ps.emplace_back(x, y);
  return {src, tgt, std::move(ps)};
}

inline Subset subset(Rng &rng, const FinSetObj &x, unsigned num = 2, unsigned den = 3) {
  std::vector<bool> mask(x.size);
  for (Index i = 0; i < x.size; ++i)
    mask[i] = rng.chance(num, den);
  return subset_from_mask(x, mask);
}

inline rel::RelPolynomial rel_polynomial(Rng &rng, const FinSetObj &X, const FinSetObj &C) {
  Subset z = subset(rng, C);
  const FinSetObj zo(z.members.size());
  rel::Relation a = relation(rng, X, zo, 2, 5);
  return {X, std::move(z), std::move(a)};
}

/// A pullback around (f, g): a random r' : Y' -> B avoiding the elements b
/// over which some a has an empty g-fibre, then X' = Y' ×_B A with p' chosen
/// in the g-fibres.
inline spn::PBAround pb_around(Rng &rng, const FinSetMap &f, const FinSetMap &g, std::size_t max_y) {
  const auto gf = fibers_of(g);
  std::vector<Index> good;
  for (Index b = 0; b < f.cod.size; ++b) {
    bool ok = true;
    for (Index a = 0; a < f.dom.size; ++a)
      if (f(a) == b && gf[a].empty())
        ok = false;
    if (ok)
      good.push_back(b);
  }
  const std::size_t ny = good.empty() ? 0 : rng.between(0, max_y);
  std::vector<Index> r(ny);
  for (auto &v : r)
    v = good[rng.below(good.size())];
  const FinSetMap rmap(ny, f.cod, std::move(r));
  const Pullback pb = pullback(rmap, f);
  std::vector<Index> p(pb.apex.size);
  for (Index x = 0; x < p.size(); ++x) {
    const auto &c = gf[pb.pr2(x)];
    p[x] = c[rng.below(c.size())];
  }
  return {f, g, FinSetMap(pb.apex, g.dom, std::move(p)), pb.pr1, rmap};
}

inline spn::PBAround random_pb_around(const FinSetMap &f, const FinSetMap &g, std::uint64_t seed) {
  Rng rng(seed);
  return pb_around(rng, f, g, 3);
}

// ---------------------------------------------------------------------------
// Categories

/// A subcategory of finite sets: objects are carriers of size 0..2, closed
/// under composition of a few random generating maps, with at most
/// `max_mor` morphisms.
inline cat::CatPtr category(Rng &rng, std::size_t max_obj, std::size_t max_mor) {
  const std::size_t n = rng.between(1, max_obj);
  std::vector<std::size_t> carrier(n);
  for (auto &c : carrier)
    c = rng.between(0, 2);
  struct Mor {
    Index s, t;
    std::vector<Index> table;
    bool operator<(const Mor &o) const { return std::tie(s, t, table) < std::tie(o.s, o.t, o.table); }
  };
  std::set<Mor> mors;
  for (Index x = 0; x < n; ++x) {
    std::vector<Index> id(carrier[x]);
    for (Index i = 0; i < id.size(); ++i)
      id[i] = i;
    mors.insert({x, x, id});
  }
  if (mors.size() > max_mor)
    return cat::discrete(std::min(n, max_mor));
  auto closure = [&](std::set<Mor> base) {
    bool grew = true;
    while (grew && base.size() <= max_mor) {
      grew = false;
      std::vector<Mor> cur(base.begin(), base.end());
      for (const auto &f : cur)
        for (const auto &g : cur)
          if (f.t == g.s) {
            std::vector<Index> t(f.table.size());
            for (Index i = 0; i < t.size(); ++i)
              t[i] = g.table[f.table[i]];
            if (base.insert({f.s, g.t, std::move(t)}).second)
              grew = true;
          }
    }
    return base;
  };
  const std::size_t gens = rng.between(0, 5);
  for (std::size_t k = 0; k < gens; ++k) {
    const Index s = rng.below(n), t = rng.below(n);
    if (carrier[s] > 0 && carrier[t] == 0)
      continue;
    std::vector<Index> table(carrier[s]);
    for (auto &v : table)
      v = rng.below(carrier[t]);
    auto trial = mors;
    trial.insert({s, t, table});
    trial = closure(std::move(trial));
    if (trial.size() <= max_mor)
      mors = std::move(trial);
  }
  std::vector<Mor> list(mors.begin(), mors.end());
  std::map<Mor, Index> index;
  for (Index i = 0; i < list.size(); ++i)
    index[list[i]] = i;
  std::vector<Index> src(list.size()), tgt(list.size()), ident(n);
  for (Index i = 0; i < list.size(); ++i) {
    src[i] = list[i].s;
    tgt[i] = list[i].t;
    bool is_id = list[i].s == list[i].t;
    for (Index j = 0; j < list[i].table.size() && is_id; ++j)
      is_id = list[i].table[j] == j;
    if (is_id)
      ident[list[i].s] = i;
  }
  const std::size_t m = list.size();
  std::vector<Index> comp(m * m, npos);
  for (Index g = 0; g < m; ++g)
    for (Index f = 0; f < m; ++f)
      if (tgt[f] == src[g]) {
        std::vector<Index> t(list[f].table.size());
        for (Index i = 0; i < t.size(); ++i)
          t[i] = list[g].table[list[f].table[i]];
        comp[g * m + f] = index.at({src[f], tgt[g], t});
      }
  return cat::FinCat::make(n, std::move(src), std::move(tgt), std::move(ident), std::move(comp));
}

/// One of several shapes: concrete, preorder, cyclic group, discrete.
inline cat::CatPtr any_category(Rng &rng, std::size_t max_obj, std::size_t max_mor) {
  switch (rng.below(5)) {
  case 0: {
    const std::size_t n = rng.between(1, max_obj);
    std::vector<bool> rel(n * n, false);
    for (Index i = 0; i < n; ++i)
      rel[i * n + i] = true;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i < j && rng.chance(1, 2))
          rel[i * n + j] = true;
    for (Index k = 0; k < n; ++k)
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
          if (rel[i * n + k] && rel[k * n + j])
            rel[i * n + j] = true;
    return cat::preorder(n, [&](Index i, Index j) { return rel[i * n + j]; });
  }
  case 1:
    return cat::cyclic_group(rng.between(1, std::min<std::size_t>(3, max_mor)));
  case 2:
    return cat::discrete(rng.between(1, max_obj));
  default:
    return category(rng, max_obj, max_mor);
  }
}

/// A random functor found by backtracking over shuffled candidates; falls
/// back to a constant functor when the search budget runs out.
inline cat::Functor functor(Rng &rng, const cat::CatPtr &dom, const cat::CatPtr &cod) {
  const auto &A = *dom, &B = *cod;
  if (A.objects() > 0 && B.objects() == 0)
    throw InvariantError("random functor", "no functor into the empty category");
  std::vector<Index> obj(A.objects());
  for (auto &o : obj)
    o = rng.below(B.objects());
  std::vector<Index> mor(A.morphisms(), npos);
  std::vector<Index> order(A.morphisms());
  for (Index i = 0; i < order.size(); ++i)
    order[i] = i;
  std::size_t budget = 2000;
  std::function<bool(Index)> assign = [&](Index k) -> bool {
    if (k == order.size())
      return true;
    if (budget-- == 0)
      return false;
    const Index f = order[k];
    if (A.is_identity(f)) {
      mor[f] = B.id(obj[A.src(f)]);
      bool ok = true;
      for (Index g = 0; g < A.morphisms() && ok; ++g)
        for (Index h = 0; h < A.morphisms() && ok; ++h)
          if (mor[g] != npos && mor[h] != npos && A.tgt(h) == A.src(g) && mor[A.compose(g, h)] != npos)
            ok = mor[A.compose(g, h)] == B.compose(mor[g], mor[h]);
      if (ok && assign(k + 1))
        return true;
      mor[f] = npos;
      return false;
    }
    auto cands = B.hom(obj[A.src(f)], obj[A.tgt(f)]);
    rng.shuffle(cands);
    for (Index c : cands) {
      mor[f] = c;
      bool ok = true;
      for (Index g = 0; g < A.morphisms() && ok; ++g)
        for (Index h = 0; h < A.morphisms() && ok; ++h)
          if (mor[g] != npos && mor[h] != npos && A.tgt(h) == A.src(g) && mor[A.compose(g, h)] != npos)
            ok = mor[A.compose(g, h)] == B.compose(mor[g], mor[h]);
      if (ok && assign(k + 1))
        return true;
    }
    mor[f] = npos;
    return false;
  };
  // identities first so constraints bite early
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return A.is_identity(a) > A.is_identity(b); });
  if (assign(0))
    return {dom, cod, obj, mor};
  const Index c = B.objects() ? rng.below(B.objects()) : 0;
  return {dom, cod, std::vector<Index>(A.objects(), c), std::vector<Index>(A.morphisms(), B.objects() ? B.id(c) : 0)};
}

/// Relabels objects and morphisms of a category by random permutations and
/// returns the isomorphism from the original.
inline cat::Functor relabel(Rng &rng, const cat::CatPtr &c) {
  const auto &C = *c;
  std::vector<Index> po(C.objects()), pm(C.morphisms());
  for (Index i = 0; i < po.size(); ++i)
    po[i] = i;
  for (Index i = 0; i < pm.size(); ++i)
    pm[i] = i;
  rng.shuffle(po);
  rng.shuffle(pm);
  const std::size_t m = C.morphisms();
  std::vector<Index> src(m), tgt(m), ident(C.objects()), comp(m * m, npos);
  for (Index f = 0; f < m; ++f) {
    src[pm[f]] = po[C.src(f)];
    tgt[pm[f]] = po[C.tgt(f)];
  }
  for (Index x = 0; x < C.objects(); ++x)
    ident[po[x]] = pm[C.id(x)];
  for (Index g = 0; g < m; ++g)
    for (Index f = 0; f < m; ++f)
      if (C.tgt(f) == C.src(g))
        comp[pm[g] * m + pm[f]] = pm[C.compose(g, f)];
  auto d = cat::FinCat::make(C.objects(), std::move(src), std::move(tgt), std::move(ident), std::move(comp));
  return {c, d, po, pm};
}

/// A quotient of a sum of representables with every value set of size at
/// most `cap`.
inline cat::Presheaf presheaf(Rng &rng, const cat::CatPtr &c, std::size_t cap, std::size_t max_gens = 3,
                                std::size_t min_gens = 0) {
  const auto &C = *c;
  if (C.objects() == 0)
    return {c, {}, std::vector<std::vector<Index>>(C.morphisms())};
  const std::size_t gens = rng.between(min_gens, std::max(min_gens, max_gens));
  std::vector<cat::Presheaf> reps;
  for (std::size_t i = 0; i < gens; ++i)
    reps.push_back(cat::representable(c, rng.below(C.objects())));
  // sum
  std::vector<std::size_t> at(C.objects(), 0);
  for (const auto &r : reps)
    for (Index x = 0; x < C.objects(); ++x)
      at[x] += r.at[x];
  std::vector<std::vector<Index>> act(C.morphisms());
  for (Index m = 0; m < C.morphisms(); ++m) {
    std::size_t off_t = 0, off_s = 0;
    for (const auto &r : reps) {
      for (Index v : r.act[m])
        act[m].push_back(off_s + v);
      off_t += r.at[C.tgt(m)];
      off_s += r.at[C.src(m)];
    }
  }
  cat::Presheaf sum(c, at, act);
  auto flat = cat::flatten(sum);
  detail::UnionFind uf(flat.set.size());
  auto sizes = [&]() {
    std::vector<std::set<Index>> cls(C.objects());
    for (Index e = 0; e < flat.set.size(); ++e)
      cls[flat.set.sort_of[e]].insert(uf.find(e));
    return cls;
  };
  while (true) {
    auto cls = sizes();
    std::vector<Index> over;
    for (Index x = 0; x < C.objects(); ++x)
      if (cls[x].size() > cap)
        over.push_back(x);
    if (over.empty())
      break;
    const Index x = over[rng.below(over.size())];
    std::vector<Index> reps_x(cls[x].begin(), cls[x].end());
    const Index i = rng.below(reps_x.size());
    Index j = rng.below(reps_x.size() - 1);
    if (j >= i)
      ++j;
    uf.unite(reps_x[i], reps_x[j]);
    detail::close_congruence(flat.set, uf);
  }
  // also merge a few more at random for variety
  const std::size_t extra = rng.between(0, 1);
  for (std::size_t k = 0; k < extra && flat.set.size() > 1; ++k) {
    const Index a = rng.below(flat.set.size());
    const auto bs = flat.set.by_sort()[flat.set.sort_of[a]];
    uf.unite(a, bs[rng.below(bs.size())]);
    detail::close_congruence(flat.set, uf);
  }
  std::vector<Index> label(flat.set.size(), npos);
  std::vector<std::size_t> count(C.objects(), 0);
  for (Index e = 0; e < flat.set.size(); ++e) {
    const Index r = uf.find(e);
    if (label[r] == npos)
      label[r] = count[flat.set.sort_of[e]]++;
    label[e] = label[r];
  }
  std::vector<std::vector<Index>> qact(C.morphisms());
  for (Index m = 0; m < C.morphisms(); ++m) {
    qact[m].assign(count[C.tgt(m)], npos);
    const auto &op = flat.set.ops[m];
    for (Index e = 0; e < flat.set.size(); ++e)
      if (op.table[e] != npos)
        qact[m][label[e]] = label[op.table[e]];
  }
  return {c, std::move(count), std::move(qact)};
}

/// m : A -> B as a presheaf on B × A^op.
inline mod::Profunctor profunctor(Rng &rng, const cat::CatPtr &a, const cat::CatPtr &b, std::size_t cap,
                                  std::size_t max_gens = 3) {
  const auto &A = *a, &B = *b;
  auto aop = cat::opposite(A);
  auto prod = cat::product(B, *aop);
  const cat::Presheaf p = presheaf(rng, prod, cap, max_gens);
  const std::size_t na = A.objects(), nb = B.objects(), nam = A.morphisms();
  std::vector<std::size_t> at(nb * na);
  for (Index x = 0; x < nb; ++x)
    for (Index y = 0; y < na; ++y)
      at[x * na + y] = p.at.empty() ? 0 : p.at[x * na + y];
  std::vector<std::vector<Index>> left(B.morphisms() * na), right(nam * nb);
  for (Index beta = 0; beta < B.morphisms(); ++beta)
    for (Index y = 0; y < na; ++y)
      left[beta * na + y] = p.act[beta * nam + A.id(y)];
  for (Index alpha = 0; alpha < nam; ++alpha)
    for (Index x = 0; x < nb; ++x)
      right[alpha * nb + x] = p.act[B.id(x) * nam + alpha];
  return {a, b, std::move(at), std::move(left), std::move(right)};
}

/// P : X -> Y with S the elements of a random presheaf on Y.
inline mod::ModPolynomial mod_polynomial(Rng &rng, const cat::CatPtr &X, const cat::CatPtr &Y, std::size_t cap) {
  const auto ps = presheaf(rng, Y, 2, 3, 1);
  const auto el = cat::elements(ps);
  auto m = profunctor(rng, el.projection.dom, X, cap, 3);
  return {std::move(m), el.projection};
}

/// A profunctor between discrete categories: value sets of size <= cap.
inline mod::Profunctor discrete_profunctor(Rng &rng, const cat::CatPtr &a, const cat::CatPtr &b, std::size_t cap) {
  const std::size_t na = a->objects(), nb = b->objects();
  std::vector<std::size_t> at(nb * na);
  for (auto &v : at)
    v = rng.between(0, cap);
  std::vector<std::vector<Index>> left(nb * na), right(na * nb);
  for (Index y = 0; y < nb; ++y)
    for (Index x = 0; x < na; ++x)
      for (Index v = 0; v < at[y * na + x]; ++v) {
        left[y * na + x].push_back(v);
        right[x * nb + y].push_back(v);
      }
  return {a, b, std::move(at), std::move(left), std::move(right)};
}

/// A polynomial between discrete categories.
inline mod::ModPolynomial discrete_mod_polynomial(Rng &rng, const cat::CatPtr &X, const cat::CatPtr &Y,
                                                  std::size_t max_s, std::size_t cap) {
  const std::size_t ns = Y->objects() == 0 ? 0 : rng.between(0, max_s);
  auto S = cat::discrete(ns);
  std::vector<Index> obj(ns), mor(ns);
  for (Index s = 0; s < ns; ++s)
    obj[s] = mor[s] = rng.below(Y->objects());
  cat::Functor p(S, Y, obj, mor);
  return {discrete_profunctor(rng, S, X, cap), std::move(p)};
}

/// A seeded document of the given kind.
inline io::Document random_document(const std::string &kind, std::uint64_t seed) {
  Rng rng(seed);
  auto small = [&](std::size_t lo, std::size_t hi) { return FinSetObj(rng.between(lo, hi)); };
  if (kind == "finset-map") {
    const FinSetObj d = small(0, 4), c = small(1, 4);
    return {kind, io::encode(map(rng, d, c))};
  }
  if (kind == "span") {
    const FinSetObj l = small(1, 3), r = small(1, 3);
    return {kind, io::encode(span(rng, l, r, 4))};
  }
  if (kind == "polynomial") {
    const FinSetObj x = small(1, 3), y = small(1, 3);
    return {kind, io::encode(polynomial(rng, x, y, 5, 5))};
  }
  if (kind == "family") {
    const FinSetObj b = small(1, 3);
    return {kind, io::encode(family(rng, b, 5))};
  }
  if (kind == "relation") {
    const FinSetObj a = small(0, 4), b = small(0, 4);
    return {kind, io::encode(relation(rng, a, b))};
  }
  if (kind == "rel-polynomial") {
    const FinSetObj x = small(1, 4), c = small(1, 4);
    return {kind, io::encode(rel_polynomial(rng, x, c))};
  }
  if (kind == "fincat")
    return {kind, io::encode(*any_category(rng, 4, 12))};
  if (kind == "functor") {
    auto a = any_category(rng, 3, 8);
    auto b = any_category(rng, 3, 8);
    return {kind, io::encode(functor(rng, a, b))};
  }
  if (kind == "profunctor") {
    auto a = any_category(rng, 2, 6);
    auto b = any_category(rng, 2, 6);
    return {kind, io::encode(profunctor(rng, a, b, 2))};
  }
  if (kind == "mod-polynomial") {
    auto x = any_category(rng, 2, 6);
    auto y = any_category(rng, 2, 6);
    return {kind, io::encode(mod_polynomial(rng, x, y, 2))};
  }
  throw InvariantError("document kind", "unknown kind \"" + kind + "\"");
}

} // namespace polyspan::gen
