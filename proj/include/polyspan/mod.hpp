#pragma once

// Profunctors (modules) between finite categories: coend composition,
// right liftings computed as ends, tabulations, polynomials whose neat leg
// is a discrete fibration, and the functor H_K in both of its forms.

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "detail/action_set.hpp"
#include "detail/union_find.hpp"
#include "error.hpp"
#include "fincat.hpp"
#include "finset.hpp"

namespace polyspan::mod {

using cat::CatPtr;
using cat::FinCat;
using cat::Functor;
using cat::Presheaf;

/// m : A -> B, a functor B^op × A -> Set. The value at (b, a) is stored at
/// index b * |A| + a. left[β * |A| + a] maps m(tgt β, a) -> m(src β, a);
/// right[α * |B| + b] maps m(b, src α) -> m(b, tgt α).
struct Profunctor {
  CatPtr src; // A
  CatPtr tgt; // B
  std::vector<std::size_t> at;
  std::vector<std::vector<Index>> left;
  std::vector<std::vector<Index>> right;

  Profunctor() = default;
  Profunctor(CatPtr a, CatPtr b, std::vector<std::size_t> sizes, std::vector<std::vector<Index>> l,
             std::vector<std::vector<Index>> r)
      : src(std::move(a)), tgt(std::move(b)), at(std::move(sizes)), left(std::move(l)), right(std::move(r)) {
    validate();
  }

  [[nodiscard]] std::size_t na() const { return src->objects(); }
  [[nodiscard]] std::size_t nb() const { return tgt->objects(); }
  [[nodiscard]] std::size_t size(Index b, Index a) const { return at[b * na() + a]; }
  [[nodiscard]] Index act_left(Index beta, Index a, Index v) const { return left[beta * na() + a][v]; }
  [[nodiscard]] Index act_right(Index alpha, Index b, Index v) const { return right[alpha * nb() + b][v]; }

  [[nodiscard]] std::size_t total() const {
    std::size_t n = 0;
    for (auto s : at)
      n += s;
    return n;
  }

  friend bool operator==(const Profunctor &x, const Profunctor &y) {
    return *x.src == *y.src && *x.tgt == *y.tgt && x.at == y.at && x.left == y.left && x.right == y.right;
  }

private:
  void validate() const {
    const auto &A = *src, &B = *tgt;
    require(at.size() == nb() * na(), "profunctor totality", "value table has the wrong length");
    require(left.size() == B.morphisms() * na() && right.size() == A.morphisms() * nb(), "profunctor totality",
            "action table has the wrong length");
    for (Index beta = 0; beta < B.morphisms(); ++beta)
      for (Index a = 0; a < na(); ++a) {
        const auto &t = left[beta * na() + a];
        require(t.size() == size(B.tgt(beta), a), "profunctor action typing", "left action domain");
        for (Index v : t)
          require(v < size(B.src(beta), a), "profunctor action typing", "left action value out of range");
      }
    for (Index alpha = 0; alpha < A.morphisms(); ++alpha)
      for (Index b = 0; b < nb(); ++b) {
        const auto &t = right[alpha * nb() + b];
        require(t.size() == size(b, A.src(alpha)), "profunctor action typing", "right action domain");
        for (Index v : t)
          require(v < size(b, A.tgt(alpha)), "profunctor action typing", "right action value out of range");
      }
    for (Index b = 0; b < nb(); ++b)
      for (Index a = 0; a < na(); ++a)
        for (Index v = 0; v < size(b, a); ++v) {
          require(act_left(B.id(b), a, v) == v, "profunctor identity law", "left identity");
          require(act_right(A.id(a), b, v) == v, "profunctor identity law", "right identity");
        }
    for (Index g = 0; g < B.morphisms(); ++g)
      for (Index f = 0; f < B.morphisms(); ++f)
        if (B.tgt(f) == B.src(g))
          for (Index a = 0; a < na(); ++a)
            for (Index v = 0; v < size(B.tgt(g), a); ++v)
              require(act_left(B.compose(g, f), a, v) == act_left(f, a, act_left(g, a, v)),
                      "profunctor composition law", "left action");
    for (Index g = 0; g < A.morphisms(); ++g)
      for (Index f = 0; f < A.morphisms(); ++f)
        if (A.tgt(f) == A.src(g))
          for (Index b = 0; b < nb(); ++b)
            for (Index v = 0; v < size(b, A.src(f)); ++v)
              require(act_right(A.compose(g, f), b, v) == act_right(g, b, act_right(f, b, v)),
                      "profunctor composition law", "right action");
    for (Index beta = 0; beta < B.morphisms(); ++beta)
      for (Index alpha = 0; alpha < A.morphisms(); ++alpha)
        for (Index v = 0; v < size(B.tgt(beta), A.src(alpha)); ++v)
          require(act_right(alpha, B.src(beta), act_left(beta, A.src(alpha), v)) ==
                      act_left(beta, A.tgt(alpha), act_right(alpha, B.tgt(beta), v)),
                  "profunctor interchange law", "left and right actions do not commute");
  }
};

/// Elements ordered by (b, a) and then value.
struct FlatProfunctor {
  detail::ActionSet set;
  std::vector<Index> offset; // b * |A| + a -> first element
};

inline FlatProfunctor flatten(const Profunctor &m) {
  FlatProfunctor f;
  const auto &A = *m.src, &B = *m.tgt;
  const std::size_t na = m.na(), nb = m.nb();
  f.set.sorts = na * nb;
  f.offset.resize(na * nb);
  for (Index b = 0; b < nb; ++b)
    for (Index a = 0; a < na; ++a) {
      f.offset[b * na + a] = f.set.sort_of.size();
      for (Index v = 0; v < m.size(b, a); ++v)
        f.set.sort_of.push_back(b * na + a);
    }
  for (Index beta = 0; beta < B.morphisms(); ++beta)
    for (Index a = 0; a < na; ++a) {
      detail::ActionSet::Op op{B.tgt(beta) * na + a, B.src(beta) * na + a, std::vector<Index>(f.set.size(), npos)};
      for (Index v = 0; v < m.size(B.tgt(beta), a); ++v)
        op.table[f.offset[op.from_sort] + v] = f.offset[op.to_sort] + m.act_left(beta, a, v);
      f.set.ops.push_back(std::move(op));
    }
  for (Index alpha = 0; alpha < A.morphisms(); ++alpha)
    for (Index b = 0; b < nb; ++b) {
      detail::ActionSet::Op op{b * na + A.src(alpha), b * na + A.tgt(alpha), std::vector<Index>(f.set.size(), npos)};
      for (Index v = 0; v < m.size(b, A.src(alpha)); ++v)
        op.table[f.offset[op.from_sort] + v] = f.offset[op.to_sort] + m.act_right(alpha, b, v);
      f.set.ops.push_back(std::move(op));
    }
  return f;
}

/// A natural isomorphism m ≅ n as a map of flattened elements.
inline std::optional<std::vector<Index>> find_prof_iso(const Profunctor &m, const Profunctor &n) {
  if (!(*m.src == *n.src) || !(*m.tgt == *n.tgt) || m.at != n.at)
    return std::nullopt;
  return detail::find_iso(flatten(m).set, flatten(n).set);
}

inline bool isomorphic(const Profunctor &m, const Profunctor &n) { return find_prof_iso(m, n).has_value(); }

/// All natural transformations m => n (cells), as maps of flattened elements.
inline std::vector<std::vector<Index>> cells(const Profunctor &m, const Profunctor &n) {
  if (!(*m.src == *n.src) || !(*m.tgt == *n.tgt))
    return {};
  return detail::all_homs(flatten(m).set, flatten(n).set);
}

// ---------------------------------------------------------------------------
// Constructions

/// f_*(b, a) = B(b, f a).
inline Profunctor graph_module(const Functor &f) {
  const auto &A = *f.dom, &B = *f.cod;
  const std::size_t na = A.objects(), nb = B.objects();
  std::vector<std::size_t> at(nb * na);
  for (Index b = 0; b < nb; ++b)
    for (Index a = 0; a < na; ++a)
      at[b * na + a] = B.hom(b, f.obj[a]).size();
  auto pos = [](const std::vector<Index> &v, Index x) { return static_cast<Index>(std::find(v.begin(), v.end(), x) - v.begin()); };
  std::vector<std::vector<Index>> left(B.morphisms() * na), right(A.morphisms() * nb);
  for (Index beta = 0; beta < B.morphisms(); ++beta)
    for (Index a = 0; a < na; ++a) {
      const auto &to = B.hom(B.src(beta), f.obj[a]);
      for (Index h : B.hom(B.tgt(beta), f.obj[a]))
        left[beta * na + a].push_back(pos(to, B.compose(h, beta)));
    }
  for (Index alpha = 0; alpha < A.morphisms(); ++alpha)
    for (Index b = 0; b < nb; ++b) {
      const auto &to = B.hom(b, f.obj[A.tgt(alpha)]);
      for (Index h : B.hom(b, f.obj[A.src(alpha)]))
        right[alpha * nb + b].push_back(pos(to, B.compose(f.mor[alpha], h)));
    }
  return {f.dom, f.cod, std::move(at), std::move(left), std::move(right)};
}

/// f^* : B -> A with f^*(a, b) = B(f a, b).
inline Profunctor cograph_module(const Functor &f) {
  const auto &A = *f.dom, &B = *f.cod;
  const std::size_t na = A.objects(), nb = B.objects();
  std::vector<std::size_t> at(na * nb);
  for (Index a = 0; a < na; ++a)
    for (Index b = 0; b < nb; ++b)
      at[a * nb + b] = B.hom(f.obj[a], b).size();
  auto pos = [](const std::vector<Index> &v, Index x) { return static_cast<Index>(std::find(v.begin(), v.end(), x) - v.begin()); };
  std::vector<std::vector<Index>> left(A.morphisms() * nb), right(B.morphisms() * na);
  for (Index alpha = 0; alpha < A.morphisms(); ++alpha)
    for (Index b = 0; b < nb; ++b) {
      const auto &to = B.hom(f.obj[A.src(alpha)], b);
      for (Index h : B.hom(f.obj[A.tgt(alpha)], b))
        left[alpha * nb + b].push_back(pos(to, B.compose(h, f.mor[alpha])));
    }
  for (Index beta = 0; beta < B.morphisms(); ++beta)
    for (Index a = 0; a < na; ++a) {
      const auto &to = B.hom(f.obj[a], B.tgt(beta));
      for (Index h : B.hom(f.obj[a], B.src(beta)))
        right[beta * na + a].push_back(pos(to, B.compose(beta, h)));
    }
  return {f.cod, f.dom, std::move(at), std::move(left), std::move(right)};
}

inline Profunctor hom_module(const CatPtr &c) { return graph_module(cat::identity_functor(c)); }

/// A presheaf on X as a profunctor 1 -> X.
inline Profunctor from_presheaf(const Presheaf &p) {
  auto one = cat::terminal();
  const auto &X = *p.base;
  std::vector<std::vector<Index>> left(X.morphisms()), right(X.objects());
  for (Index m = 0; m < X.morphisms(); ++m)
    left[m] = p.act[m];
  for (Index x = 0; x < X.objects(); ++x)
    for (Index t = 0; t < p.at[x]; ++t)
      right[x].push_back(t);
  return {one, p.base, p.at, std::move(left), std::move(right)};
}

/// The column m(-, a) as a presheaf on the target category.
inline Presheaf column(const Profunctor &m, Index a) {
  const auto &B = *m.tgt;
  std::vector<std::size_t> at(B.objects());
  for (Index b = 0; b < B.objects(); ++b)
    at[b] = m.size(b, a);
  std::vector<std::vector<Index>> act(B.morphisms());
  for (Index beta = 0; beta < B.morphisms(); ++beta)
    act[beta] = m.left[beta * m.na() + a];
  return {m.tgt, std::move(at), std::move(act)};
}

// ---------------------------------------------------------------------------
// Composition by coends

/// (n∘m)(c, a) = Σ_b m(b, a) × n(c, b) modulo (b, m(β)μ', ν) ~ (b', μ', n(β)ν).
/// Each class is represented by its first triple in (b, μ, ν) order.
struct Coend {
  Profunctor prof;
  struct Triple {
    Index b, mu, nu;
  };
  std::vector<std::vector<Triple>> rep;                 // (c, a) -> class -> representative
  std::vector<std::map<std::vector<Index>, Index>> cls; // (c, a) -> {b, μ, ν} -> class

  [[nodiscard]] Index class_of(Index c, Index a, Index b, Index mu, Index nu) const {
    return cls[c * prof.na() + a].at({b, mu, nu});
  }
};

inline Coend prof_compose_detailed(const Profunctor &n, const Profunctor &m) {
  require_boundary(*m.tgt == *n.src, "profunctor composition", "middle categories differ");
  const auto &A = *m.src, &B = *m.tgt, &C = *n.tgt;
  const std::size_t na = A.objects(), nc = C.objects();
  Coend out;
  out.rep.resize(nc * na);
  out.cls.resize(nc * na);
  std::vector<std::size_t> at(nc * na);
  for (Index c = 0; c < nc; ++c)
    for (Index a = 0; a < na; ++a) {
      std::vector<Coend::Triple> elems;
      std::map<std::vector<Index>, Index> where;
      for (Index b = 0; b < B.objects(); ++b)
        for (Index mu = 0; mu < m.size(b, a); ++mu)
          for (Index nu = 0; nu < n.size(c, b); ++nu) {
            where[{b, mu, nu}] = elems.size();
            elems.push_back({b, mu, nu});
          }
      detail::UnionFind uf(elems.size());
      for (Index beta = 0; beta < B.morphisms(); ++beta) {
        const Index b = B.src(beta), b2 = B.tgt(beta);
        for (Index mu2 = 0; mu2 < m.size(b2, a); ++mu2)
          for (Index nu = 0; nu < n.size(c, b); ++nu)
            uf.unite(where.at({b, m.act_left(beta, a, mu2), nu}), where.at({b2, mu2, n.act_right(beta, c, nu)}));
      }
      std::size_t count = 0;
      const auto label = uf.labels(&count);
      auto &reps = out.rep[c * na + a];
      reps.assign(count, {npos, npos, npos});
      for (Index i = 0; i < elems.size(); ++i) {
        if (reps[label[i]].b == npos)
          reps[label[i]] = elems[i];
        out.cls[c * na + a][{elems[i].b, elems[i].mu, elems[i].nu}] = label[i];
      }
      at[c * na + a] = count;
    }
  // Induced actions, computed on every member and checked to agree.
  std::vector<std::vector<Index>> left(C.morphisms() * na), right(A.morphisms() * nc);
  for (Index gamma = 0; gamma < C.morphisms(); ++gamma)
    for (Index a = 0; a < na; ++a) {
      const Index c = C.tgt(gamma), c2 = C.src(gamma);
      auto &t = left[gamma * na + a];
      t.assign(at[c * na + a], npos);
      for (const auto &[key, k] : out.cls[c * na + a]) {
        const Index img = out.cls[c2 * na + a].at({key[0], key[1], n.act_left(gamma, key[0], key[2])});
        require(t[k] == npos || t[k] == img, "coend action well defined", "left action");
        t[k] = img;
      }
    }
  for (Index alpha = 0; alpha < A.morphisms(); ++alpha)
    for (Index c = 0; c < nc; ++c) {
      const Index a = A.src(alpha), a2 = A.tgt(alpha);
      auto &t = right[alpha * nc + c];
      t.assign(at[c * na + a], npos);
      for (const auto &[key, k] : out.cls[c * na + a]) {
        const Index img = out.cls[c * na + a2].at({key[0], m.act_right(alpha, key[0], key[1]), key[2]});
        require(t[k] == npos || t[k] == img, "coend action well defined", "right action");
        t[k] = img;
      }
    }
  out.prof = Profunctor(m.src, n.tgt, std::move(at), std::move(left), std::move(right));
  return out;
}

/// n after m.
inline Profunctor prof_compose(const Profunctor &n, const Profunctor &m) { return prof_compose_detailed(n, m).prof; }

// ---------------------------------------------------------------------------
// Right liftings as ends

/// rif(n, u)(s, k) = Nat(n(-, s), u(-, k)) for n : S -> Y and u : K -> Y.
struct ModLifting {
  Profunctor prof; // K -> S
  std::size_t nk = 0;
  std::vector<cat::FlatPresheaf> n_col; // s -> n(-, s)
  std::vector<cat::FlatPresheaf> u_col; // k -> u(-, k)
  std::vector<std::vector<std::vector<Index>>> nat; // (s * |K| + k) -> list of transformations
  std::vector<std::map<std::vector<Index>, Index>> index;

  [[nodiscard]] Index find(Index s, Index k, const std::vector<Index> &alpha) const {
    const auto &ix = index[s * nk + k];
    auto it = ix.find(alpha);
    return it == ix.end() ? npos : it->second;
  }
};

inline ModLifting rif_mod_detailed(const Profunctor &n, const Profunctor &u) {
  require_boundary(*n.tgt == *u.tgt, "profunctor lifting", "n and u have different codomains");
  const auto &S = *n.src, &K = *u.src, &Y = *n.tgt;
  const std::size_t ns = S.objects(), nk = K.objects();
  ModLifting out;
  out.nk = nk;
  for (Index s = 0; s < ns; ++s)
    out.n_col.push_back(cat::flatten(column(n, s)));
  for (Index k = 0; k < nk; ++k)
    out.u_col.push_back(cat::flatten(column(u, k)));
  out.nat.resize(ns * nk);
  out.index.resize(ns * nk);
  std::vector<std::size_t> at(ns * nk);
  for (Index s = 0; s < ns; ++s)
    for (Index k = 0; k < nk; ++k) {
      auto list = cat::natural_transformations(out.n_col[s], out.u_col[k]);
      std::sort(list.begin(), list.end());
      for (Index i = 0; i < list.size(); ++i)
        out.index[s * nk + k][list[i]] = i;
      at[s * nk + k] = list.size();
      out.nat[s * nk + k] = std::move(list);
    }
  // element of n(-,s) at (y, v) has flat index n_col[s].offset[y] + v
  std::vector<std::vector<Index>> left(S.morphisms() * nk), right(K.morphisms() * ns);
  for (Index sigma = 0; sigma < S.morphisms(); ++sigma) {
    const Index s = S.src(sigma), s2 = S.tgt(sigma);
    for (Index k = 0; k < nk; ++k)
      for (const auto &alpha : out.nat[s2 * nk + k]) {
        std::vector<Index> beta(out.n_col[s].set.size());
        for (Index y = 0; y < Y.objects(); ++y)
          for (Index v = 0; v < n.size(y, s); ++v)
            beta[out.n_col[s].offset[y] + v] = alpha[out.n_col[s2].offset[y] + n.act_right(sigma, y, v)];
        left[sigma * nk + k].push_back(out.find(s, k, beta));
      }
  }
  for (Index kappa = 0; kappa < K.morphisms(); ++kappa) {
    const Index k = K.src(kappa), k2 = K.tgt(kappa);
    for (Index s = 0; s < ns; ++s)
      for (const auto &alpha : out.nat[s * nk + k]) {
        std::vector<Index> beta(alpha.size());
        for (Index i = 0; i < alpha.size(); ++i) {
          const Index g = alpha[i];
          const Index y = out.u_col[k].set.sort_of[g];
          const Index v = g - out.u_col[k].offset[y];
          beta[i] = out.u_col[k2].offset[y] + u.act_right(kappa, y, v);
        }
        right[kappa * ns + s].push_back(out.find(s, k2, beta));
      }
  }
  out.prof = Profunctor(u.src, n.src, std::move(at), std::move(left), std::move(right));
  return out;
}

inline Profunctor rif_mod(const Profunctor &n, const Profunctor &u) { return rif_mod_detailed(n, u).prof; }

/// The counit n∘rif(n, u) => u on flattened elements: the class of
/// (s, α, ν ∈ n(y, s)) goes to α_y(ν).
inline std::vector<Index> rif_counit(const Profunctor &n, const Profunctor &u, const ModLifting &rif, const Coend &nr) {
  const auto fu = flatten(u);
  const auto fc = flatten(nr.prof);
  const std::size_t nk = u.na();
  std::vector<Index> out(fc.set.size(), npos);
  for (Index y = 0; y < n.nb(); ++y)
    for (Index k = 0; k < nk; ++k)
      for (Index cls = 0; cls < nr.prof.size(y, k); ++cls) {
        const auto &t = nr.rep[y * nk + k][cls];
        const Index s = t.b;
        const auto &alpha = rif.nat[s * nk + k][t.mu];
        const Index g = alpha[rif.n_col[s].offset[y] + t.nu];
        out[fc.offset[y * nk + k] + cls] = fu.offset[y * nk + k] + (g - rif.u_col[k].offset[y]);
      }
  return out;
}

// ---------------------------------------------------------------------------
// Tabulations and polynomials

/// The tabulation of u : 1 -> X is the category of elements with its projection.
inline cat::Elements tabulate_mod(const Presheaf &u) { return cat::elements(u); }

/// z = p_*∘!^* for a discrete fibration p, computed on fibers.
inline Presheaf fiber_presheaf(const Functor &p) { return cat::fibers(p); }

/// The same presheaf computed as a coend.
inline Profunctor fiber_presheaf_via_coend(const Functor &p) {
  return prof_compose(graph_module(p), cograph_module(cat::to_terminal(p.dom)));
}

/// m : S -> X a profunctor and p : S -> Y a discrete fibration.
struct ModPolynomial {
  CatPtr X, Y, S;
  Profunctor m;
  Functor p;

  ModPolynomial() = default;
  ModPolynomial(Profunctor m_, Functor p_) : X(m_.tgt), Y(p_.cod), S(m_.src), m(std::move(m_)), p(std::move(p_)) {
    require(*p.dom == *S, "mod polynomial typing", "p is not defined on the source of m");
    require(cat::is_discrete_fibration(p), "neat leg", "p is not a discrete fibration");
  }
};

inline ModPolynomial identity_polymod(const CatPtr &x) {
  return {hom_module(x), cat::identity_functor(x)};
}

/// Q∘P with its intermediate data.
struct ModComposition {
  ModPolynomial poly;
  Presheaf z;          // on C
  ModLifting y_lift;   // y = rif(Q.m, z) : 1 -> T
  cat::Elements Y;     // elements of y, projection r : Y -> T
  Profunctor n;        // Y -> Z
};

inline ModComposition compose_polymod_detailed(const ModPolynomial &Q, const ModPolynomial &P) {
  require_boundary(*P.Y == *Q.X, "mod polynomial composition", "P.Y differs from Q.X");
  ModComposition out;
  const auto &C = *P.Y, &T = *Q.S, &Z = *P.S;
  const Functor &p = P.p;
  const Profunctor &m = Q.m; // T -> C
  out.z = fiber_presheaf(p);
  out.y_lift = rif_mod_detailed(m, from_presheaf(out.z));
  std::vector<std::size_t> y_at(T.objects());
  std::vector<std::vector<Index>> y_act(T.morphisms());
  for (Index b = 0; b < T.objects(); ++b)
    y_at[b] = out.y_lift.prof.size(b, 0);
  for (Index beta = 0; beta < T.morphisms(); ++beta)
    y_act[beta] = out.y_lift.prof.left[beta];
  const Presheaf y(Q.S, std::move(y_at), std::move(y_act));
  out.Y = tabulate_mod(y);
  // fibre positions of Z over C
  std::vector<Index> pos(Z.objects());
  {
    std::vector<std::size_t> count(C.objects(), 0);
    for (Index zz = 0; zz < Z.objects(); ++zz)
      pos[zz] = count[p.obj[zz]]++;
  }
  const auto &Ycat = *out.Y.projection.dom;
  const std::size_t ny = Ycat.objects(), nz = Z.objects();
  // n(z', (b, ξ)) = {μ ∈ m(p z', b) : ξ_{p z'}(μ) = z'}
  std::vector<std::vector<Index>> members(nz * ny);
  for (Index zz = 0; zz < nz; ++zz)
    for (Index o = 0; o < ny; ++o) {
      const Index b = out.Y.base_of[o], xi = out.Y.value_of[o];
      const Index c = p.obj[zz];
      const auto &alpha = out.y_lift.nat[b][xi];
      for (Index mu = 0; mu < m.size(c, b); ++mu) {
        const Index g = alpha[out.y_lift.n_col[b].offset[c] + mu];
        if (g - out.y_lift.u_col[0].offset[c] == pos[zz])
          members[zz * ny + o].push_back(mu);
      }
    }
  auto locate = [](const std::vector<Index> &v, Index x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    require(it != v.end() && *it == x, "induced module action", "action leaves the splitting set");
    return static_cast<Index>(it - v.begin());
  };
  std::vector<std::size_t> at(nz * ny);
  for (Index i = 0; i < at.size(); ++i)
    at[i] = members[i].size();
  std::vector<std::vector<Index>> left(Z.morphisms() * ny), right(Ycat.morphisms() * nz);
  for (Index zeta = 0; zeta < Z.morphisms(); ++zeta)
    for (Index o = 0; o < ny; ++o) {
      const Index b = out.Y.base_of[o];
      for (Index mu : members[Z.tgt(zeta) * ny + o])
        left[zeta * ny + o].push_back(locate(members[Z.src(zeta) * ny + o], m.act_left(p.mor[zeta], b, mu)));
    }
  for (Index g = 0; g < Ycat.morphisms(); ++g) {
    const Index beta = out.Y.projection.mor[g];
    const Index o = Ycat.src(g), o2 = Ycat.tgt(g);
    for (Index zz = 0; zz < nz; ++zz)
      for (Index mu : members[zz * ny + o])
        right[g * nz + zz].push_back(locate(members[zz * ny + o2], m.act_right(beta, p.obj[zz], mu)));
  }
  out.n = Profunctor(out.Y.projection.dom, P.S, std::move(at), std::move(left), std::move(right));
  out.poly = ModPolynomial(prof_compose(P.m, out.n), cat::compose(Q.p, out.Y.projection));
  return out;
}

inline ModPolynomial compose_polymod(const ModPolynomial &Q, const ModPolynomial &P) {
  return compose_polymod_detailed(Q, P).poly;
}

// ---------------------------------------------------------------------------
// H_K

/// Path (a): p_*∘rif(m, u).
inline Profunctor hK_mod(const CatPtr &K, const ModPolynomial &P, const Profunctor &u) {
  require_boundary(*u.src == *K && *u.tgt == *P.X, "H_K argument", "u is not a profunctor K -> X");
  return prof_compose(graph_module(P.p), rif_mod(P.m, u));
}

/// Path (b): value at (y, k) is Σ over s in the fibre of p over y of
/// Nat(m(-, s), u(-, k)), ordered by s and then by transformation.
struct FiberwiseH {
  Profunctor prof; // K -> Y
  std::vector<std::vector<std::pair<Index, Index>>> elem; // (y, k) -> (s, α index)
};

inline FiberwiseH hK_mod_fiberwise(const CatPtr &K, const ModPolynomial &P, const Profunctor &u) {
  require_boundary(*u.src == *K && *u.tgt == *P.X, "H_K argument", "u is not a profunctor K -> X");
  const auto rif = rif_mod_detailed(P.m, u);
  const auto &S = *P.S, &Y = *P.Y;
  const std::size_t nk = K->objects(), ny = Y.objects();
  FiberwiseH out;
  out.elem.resize(ny * nk);
  std::vector<std::map<std::pair<Index, Index>, Index>> where(ny * nk);
  std::vector<std::size_t> at(ny * nk);
  for (Index y = 0; y < ny; ++y)
    for (Index k = 0; k < nk; ++k) {
      for (Index s = 0; s < S.objects(); ++s)
        if (P.p.obj[s] == y)
          for (Index i = 0; i < rif.nat[s * nk + k].size(); ++i) {
            where[y * nk + k][{s, i}] = out.elem[y * nk + k].size();
            out.elem[y * nk + k].emplace_back(s, i);
          }
      at[y * nk + k] = out.elem[y * nk + k].size();
    }
  std::vector<std::vector<Index>> left(Y.morphisms() * nk), right(K->morphisms() * ny);
  for (Index gamma = 0; gamma < Y.morphisms(); ++gamma)
    for (Index k = 0; k < nk; ++k)
      for (const auto &[s, i] : out.elem[Y.tgt(gamma) * nk + k]) {
        Index chi = npos;
        for (Index c = 0; c < S.morphisms(); ++c)
          if (S.tgt(c) == s && P.p.mor[c] == gamma)
            chi = c;
        const Index j = rif.prof.act_left(chi, k, i);
        left[gamma * nk + k].push_back(where[Y.src(gamma) * nk + k].at({S.src(chi), j}));
      }
  for (Index kappa = 0; kappa < K->morphisms(); ++kappa)
    for (Index y = 0; y < ny; ++y)
      for (const auto &[s, i] : out.elem[y * nk + K->src(kappa)])
        right[kappa * ny + y].push_back(
            where[y * nk + K->tgt(kappa)].at({s, rif.prof.act_right(kappa, s, i)}));
  out.prof = Profunctor(K, P.Y, std::move(at), std::move(left), std::move(right));
  return out;
}

/// The canonical comparison (b) -> (a): (s, α) ↦ class of (s, α, id_y).
/// Returns the flat map, or nothing if some image is undefined.
inline std::vector<Index> hK_comparison(const CatPtr &K, const ModPolynomial &P, const Profunctor &u,
                                        const FiberwiseH &fib) {
  const auto rif = rif_mod(P.m, u);
  const auto gp = graph_module(P.p);
  const Coend co = prof_compose_detailed(gp, rif);
  const auto ff = flatten(fib.prof), fc = flatten(co.prof);
  const auto &Y = *P.Y;
  const std::size_t nk = K->objects();
  std::vector<Index> out(ff.set.size());
  for (Index y = 0; y < Y.objects(); ++y)
    for (Index k = 0; k < nk; ++k)
      for (Index e = 0; e < fib.elem[y * nk + k].size(); ++e) {
        const auto [s, i] = fib.elem[y * nk + k][e];
        const auto &ids = Y.hom(y, P.p.obj[s]);
        const Index id_pos = static_cast<Index>(std::find(ids.begin(), ids.end(), Y.id(y)) - ids.begin());
        out[ff.offset[y * nk + k] + e] = fc.offset[y * nk + k] + co.class_of(y, k, s, i, id_pos);
      }
  return out;
}

// ---------------------------------------------------------------------------
// Cotensor with 2

/// 2^op × A and the graph module of the second projection. Object (i, a)
/// has index i * |A| + a.
struct Cotensor {
  CatPtr cat;
  Functor pr2;
  Profunctor c;
};

inline Cotensor cotensor2_mod(const CatPtr &A) {
  const auto two_op = cat::opposite(*cat::ordinal(2));
  auto prod = cat::product(*two_op, *A);
  std::vector<Index> obj(prod->objects()), mor(prod->morphisms());
  for (Index o = 0; o < obj.size(); ++o)
    obj[o] = o % A->objects();
  for (Index f = 0; f < mor.size(); ++f)
    mor[f] = f % A->morphisms();
  Functor pr2(prod, A, obj, mor);
  auto c = graph_module(pr2);
  return {prod, std::move(pr2), std::move(c)};
}

/// A module K -> 2^op × A as two modules K -> A and a cell w0 => w1.
struct CotensorArrow {
  Profunctor w0;
  Profunctor w1;
  std::vector<Index> cell; // flat w0 -> flat w1
};

inline Index ordinal_arrow_op(const FinCat &two_op) {
  for (Index m = 0; m < two_op.morphisms(); ++m)
    if (!two_op.is_identity(m))
      return m;
  return npos;
}

inline CotensorArrow decompose_cotensor(const Cotensor &ct, const Profunctor &w) {
  require_boundary(*w.tgt == *ct.cat, "cotensor decomposition", "module does not land in the cotensor");
  const auto &A = *ct.pr2.cod;
  const auto &K = *w.src;
  const std::size_t na = A.objects(), nk = K.objects(), nam = A.morphisms();
  const auto two_op = cat::opposite(*cat::ordinal(2));
  const Index arrow = ordinal_arrow_op(*two_op); // 1 -> 0 in 2^op
  CotensorArrow out;
  Profunctor parts[2];
  for (Index i = 0; i < 2; ++i) {
    std::vector<std::size_t> at(na * nk);
    std::vector<std::vector<Index>> left(nam * nk), right(K.morphisms() * na);
    for (Index a = 0; a < na; ++a)
      for (Index k = 0; k < nk; ++k)
        at[a * nk + k] = w.size(i * na + a, k);
    for (Index al = 0; al < nam; ++al)
      for (Index k = 0; k < nk; ++k)
        left[al * nk + k] = w.left[(two_op->id(i) * nam + al) * nk + k];
    for (Index kap = 0; kap < K.morphisms(); ++kap)
      for (Index a = 0; a < na; ++a)
        right[kap * na + a] = w.right[kap * w.nb() + i * na + a];
    parts[i] = Profunctor(w.src, ct.pr2.cod, std::move(at), std::move(left), std::move(right));
  }
  // the arrow 1 -> 0 of 2^op acts as w(0, a) -> w(1, a)
  const auto f0 = flatten(parts[0]), f1 = flatten(parts[1]);
  out.cell.resize(f0.set.size());
  for (Index a = 0; a < na; ++a)
    for (Index k = 0; k < nk; ++k)
      for (Index v = 0; v < parts[0].size(a, k); ++v)
        out.cell[f0.offset[a * nk + k] + v] =
            f1.offset[a * nk + k] + w.act_left(arrow * nam + A.id(a), k, v);
  out.w0 = std::move(parts[0]);
  out.w1 = std::move(parts[1]);
  return out;
}

inline Profunctor assemble_cotensor(const Cotensor &ct, const CotensorArrow &x) {
  const auto &A = *ct.pr2.cod;
  const auto &K = *x.w0.src;
  const auto &P = *ct.cat;
  const std::size_t na = A.objects(), nk = K.objects(), nam = A.morphisms();
  const auto f0 = flatten(x.w0), f1 = flatten(x.w1);
  const Profunctor *parts[2] = {&x.w0, &x.w1};
  std::vector<std::size_t> at(P.objects() * nk);
  for (Index o = 0; o < P.objects(); ++o)
    for (Index k = 0; k < nk; ++k)
      at[o * nk + k] = parts[o / na]->size(o % na, k);
  std::vector<std::vector<Index>> left(P.morphisms() * nk), right(K.morphisms() * P.objects());
  for (Index g = 0; g < P.morphisms(); ++g) {
    const Index al = g % nam;
    const Index from = P.tgt(g) / na, to = P.src(g) / na;
    for (Index k = 0; k < nk; ++k) {
      auto &tab = left[g * nk + k];
      const Index a_t = A.tgt(al), a_s = A.src(al);
      for (Index v = 0; v < parts[from]->size(a_t, k); ++v) {
        Index w = parts[from]->act_left(al, k, v);
        if (from != to)
          w = x.cell[f0.offset[a_s * nk + k] + w] - f1.offset[a_s * nk + k];
        tab.push_back(w);
      }
    }
  }
  for (Index kap = 0; kap < K.morphisms(); ++kap)
    for (Index o = 0; o < P.objects(); ++o)
      right[kap * P.objects() + o] = parts[o / na]->right[kap * na + o % na];
  return {x.w0.src, ct.cat, std::move(at), std::move(left), std::move(right)};
}

// ---------------------------------------------------------------------------
// Pushing discrete fibrations forward

/// g_*(r): the discrete fibration part of the comprehensive factorization of g∘r.
inline Functor psh_on_dfib(const Functor &g, const Functor &r) {
  require(cat::is_discrete_fibration(r), "discrete fibration", "r is not a discrete fibration");
  return cat::comprehensive_factorization(cat::compose(g, r)).s;
}

// ---------------------------------------------------------------------------
// The square of the composite and its fiberwise form

/// Σ over z' in the fibre of p over c of n(z', y), as a profunctor Y -> C.
inline Profunctor fiberwise_sum(const Functor &p, const Profunctor &n) {
  const auto &Z = *p.dom, &C = *p.cod, &Y = *n.src;
  const std::size_t ny = Y.objects(), nc = C.objects();
  std::vector<std::vector<std::pair<Index, Index>>> elem(nc * ny);
  std::vector<std::map<std::pair<Index, Index>, Index>> where(nc * ny);
  for (Index c = 0; c < nc; ++c)
    for (Index y = 0; y < ny; ++y)
      for (Index zz = 0; zz < Z.objects(); ++zz)
        if (p.obj[zz] == c)
          for (Index v = 0; v < n.size(zz, y); ++v) {
            where[c * ny + y][{zz, v}] = elem[c * ny + y].size();
            elem[c * ny + y].emplace_back(zz, v);
          }
  std::vector<std::size_t> at(nc * ny);
  for (Index i = 0; i < at.size(); ++i)
    at[i] = elem[i].size();
  std::vector<std::vector<Index>> left(C.morphisms() * ny), right(Y.morphisms() * nc);
  for (Index gamma = 0; gamma < C.morphisms(); ++gamma)
    for (Index y = 0; y < ny; ++y)
      for (const auto &[zz, v] : elem[C.tgt(gamma) * ny + y]) {
        Index chi = npos;
        for (Index c = 0; c < Z.morphisms(); ++c)
          if (Z.tgt(c) == zz && p.mor[c] == gamma)
            chi = c;
        left[gamma * ny + y].push_back(where[C.src(gamma) * ny + y].at({Z.src(chi), n.act_left(chi, y, v)}));
      }
  for (Index g = 0; g < Y.morphisms(); ++g)
    for (Index c = 0; c < nc; ++c)
      for (const auto &[zz, v] : elem[c * ny + Y.src(g)])
        right[g * nc + c].push_back(where[c * ny + Y.tgt(g)].at({zz, n.act_right(g, zz, v)}));
  return {n.src, p.cod, std::move(at), std::move(left), std::move(right)};
}

/// m(c, r y) as a profunctor Y -> C.
inline Profunctor restrict_along(const Profunctor &m, const Functor &r) {
  const auto &Y = *r.dom, &C = *m.tgt;
  const std::size_t ny = Y.objects(), nc = C.objects();
  std::vector<std::size_t> at(nc * ny);
  for (Index c = 0; c < nc; ++c)
    for (Index y = 0; y < ny; ++y)
      at[c * ny + y] = m.size(c, r.obj[y]);
  std::vector<std::vector<Index>> left(C.morphisms() * ny), right(Y.morphisms() * nc);
  for (Index gamma = 0; gamma < C.morphisms(); ++gamma)
    for (Index y = 0; y < ny; ++y)
      left[gamma * ny + y] = m.left[gamma * m.na() + r.obj[y]];
  for (Index g = 0; g < Y.morphisms(); ++g)
    for (Index c = 0; c < nc; ++c)
      right[g * nc + c] = m.right[r.mor[g] * m.nb() + c];
  return {r.dom, m.tgt, std::move(at), std::move(left), std::move(right)};
}

/// Fiberwise element (z', ν) ↦ class of (z', id_c, ν) in p_*∘n.
inline std::vector<Index> fiberwise_to_coend_left(const Functor &p, const Profunctor &n, const Profunctor &sum,
                                                  const Coend &co) {
  const auto &Z = *p.dom, &C = *p.cod;
  const std::size_t ny = n.na();
  const auto fs = flatten(sum), fc = flatten(co.prof);
  std::vector<Index> out(fs.set.size());
  for (Index c = 0; c < C.objects(); ++c)
    for (Index y = 0; y < ny; ++y) {
      Index e = 0;
      for (Index zz = 0; zz < Z.objects(); ++zz)
        if (p.obj[zz] == c)
          for (Index v = 0; v < n.size(zz, y); ++v, ++e) {
            const auto &ids = C.hom(c, c);
            const Index idp = static_cast<Index>(std::find(ids.begin(), ids.end(), C.id(c)) - ids.begin());
            out[fs.offset[c * ny + y] + e] = fc.offset[c * ny + y] + co.class_of(c, y, zz, v, idp);
          }
    }
  return out;
}

/// μ ∈ m(c, r y) ↦ class of (y, id_{r y}, μ) in m∘r_*.
inline std::vector<Index> fiberwise_to_coend_right(const Functor &r, const Profunctor &m, const Profunctor &restricted,
                                                   const Coend &co) {
  const auto &Y = *r.dom, &T = *r.cod, &C = *m.tgt;
  const std::size_t ny = Y.objects();
  const auto fs = flatten(restricted), fc = flatten(co.prof);
  std::vector<Index> out(fs.set.size());
  for (Index c = 0; c < C.objects(); ++c)
    for (Index y = 0; y < ny; ++y) {
      const Index b = r.obj[y];
      const auto &ids = T.hom(b, b);
      const Index idp = static_cast<Index>(std::find(ids.begin(), ids.end(), T.id(b)) - ids.begin());
      for (Index mu = 0; mu < m.size(c, b); ++mu)
        out[fs.offset[c * ny + y] + mu] = fc.offset[c * ny + y] + co.class_of(c, y, b, idp, mu);
    }
  return out;
}

} // namespace polyspan::mod
