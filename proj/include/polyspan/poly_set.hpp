#pragma once

// Polynomials X <- E -> S -> Y of finite sets: extensions on indexed
// families, composition, morphisms of polynomials and the functor H_K.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "error.hpp"
#include "finset.hpp"
#include "span.hpp"

namespace polyspan::poly {

struct Polynomial {
  FinSetObj X, E, S, Y;
  FinSetMap m1; // E -> X
  FinSetMap m2; // E -> S
  FinSetMap p;  // S -> Y

  Polynomial() = default;
  Polynomial(FinSetMap m1_, FinSetMap m2_, FinSetMap p_)
      : X(m1_.cod), E(m1_.dom), S(m2_.cod), Y(p_.cod), m1(std::move(m1_)), m2(std::move(m2_)), p(std::move(p_)) {
    require(m1.dom == m2.dom, "polynomial typing", "m1 and m2 have different domains");
    require(p.dom == m2.cod, "polynomial typing", "p is not defined on the codomain of m2");
  }

  /// The lifter leg as a span S -> X.
  [[nodiscard]] spn::Span lifter() const { return {m2, m1}; }

  friend bool operator==(const Polynomial &a, const Polynomial &b) {
    return a.m1 == b.m1 && a.m2 == b.m2 && a.p == b.p;
  }
};

inline Polynomial identity_poly(const FinSetObj &x) {
  return {identity_map(x), identity_map(x), identity_map(x)};
}

/// A family of sets indexed by `base`, as a map total -> base.
struct IndexedFamily {
  FinSetObj base;
  FinSetObj total;
  FinSetMap proj;

  IndexedFamily() = default;
  explicit IndexedFamily(FinSetMap pr) : base(pr.cod), total(pr.dom), proj(std::move(pr)) {}

  friend bool operator==(const IndexedFamily &a, const IndexedFamily &b) { return a.proj == b.proj; }
};

/// A map of families over the same base.
struct FamilyMap {
  IndexedFamily source;
  IndexedFamily target;
  FinSetMap map;

  FamilyMap() = default;
  FamilyMap(IndexedFamily s, IndexedFamily t, FinSetMap m) : source(std::move(s)), target(std::move(t)), map(std::move(m)) {
    require_boundary(source.base == target.base, "family map base", "families over different bases");
    require(map.dom == source.total && map.cod == target.total, "family map typing", "map is not between totals");
    require(compose(target.proj, map) == source.proj, "family map over base", "map does not preserve the index");
  }
};

inline FamilyMap compose(const FamilyMap &g, const FamilyMap &f) {
  return {f.source, g.target, polyspan::compose(g.map, f.map)};
}

inline FamilyMap identity_family_map(const IndexedFamily &a) { return {a, a, identity_map(a.total)}; }

// ---------------------------------------------------------------------------
// Extension

/// P(A): elements (s, σ) with σ(e) ∈ A over m1(e) for e ∈ m2⁻¹(s), ordered by
/// p(s), then s, then σ lexicographically over the sorted fiber.
struct Extension {
  IndexedFamily family;
  std::vector<Index> s_of;
  std::vector<std::vector<Index>> sigma;
  std::vector<std::vector<Index>> e_fiber; // s -> sorted m2⁻¹(s)
  std::map<std::pair<Index, std::vector<Index>>, Index> index;

  [[nodiscard]] Index find(Index s, const std::vector<Index> &sig) const {
    auto it = index.find({s, sig});
    return it == index.end() ? npos : it->second;
  }
};

/// Pull back along m1, take Π along m2, then sum along p.
inline Extension extension_eval(const Polynomial &P, const IndexedFamily &A) {
  require_boundary(A.base == P.X, "extension base", "family is not over the polynomial's X");
  Extension out;
  const Pullback pulled = pullback(A.proj, P.m1); // (a, e) with A.proj(a) = m1(e)
  const DependentProduct pi = pi_f(P.m2, pulled.pr2);
  out.e_fiber = pi.fiber;
  std::vector<Index> order(pi.total.size);
  for (Index i = 0; i < order.size(); ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return P.p(pi.proj(a)) < P.p(pi.proj(b)); });
  std::vector<Index> proj;
  for (Index i : order) {
    const Index s = pi.proj(i);
    std::vector<Index> sig;
    for (Index w : pi.sections[i])
      sig.push_back(pulled.pr1(w));
    out.index.emplace(std::make_pair(s, sig), out.s_of.size());
    out.s_of.push_back(s);
    out.sigma.push_back(std::move(sig));
    proj.push_back(P.p(s));
  }
  const FinSetObj total(proj.size());
  out.family = IndexedFamily(FinSetMap(total, P.Y, std::move(proj)));
  return out;
}

/// P(φ) : P(A) -> P(A'), (s, σ) ↦ (s, φ∘σ).
inline FamilyMap extension_on_map(const Polynomial &P, const FamilyMap &phi) {
  const Extension from = extension_eval(P, phi.source);
  const Extension to = extension_eval(P, phi.target);
  std::vector<Index> t(from.s_of.size());
  for (Index i = 0; i < t.size(); ++i) {
    std::vector<Index> sig = from.sigma[i];
    for (Index &v : sig)
      v = phi.map(v);
    t[i] = to.find(from.s_of[i], sig);
  }
  return {from.family, to.family, FinSetMap(from.family.total, to.family.total, std::move(t))};
}

// ---------------------------------------------------------------------------
// Composition

/// Q∘P with the data recording where each new element comes from.
/// Composite S elements are (t, w) with t ∈ Q.S and w choosing for each
/// f ∈ Q.m2⁻¹(t) some s ∈ P.S with P.p(s) = Q.m1(f); composite E elements are
/// (w, f, e) with e ∈ P.m2⁻¹(w(f)).
struct Composition {
  Polynomial poly;
  std::vector<Index> t_of;               // S -> Q.S
  std::vector<std::vector<Index>> w_of;  // S -> chosen P.S per position in the fiber of t
  std::vector<std::vector<Index>> t_fiber; // Q.S -> sorted Q.m2⁻¹(t)
  std::vector<Index> f_of;               // E -> Q.E
  std::vector<Index> e_of;               // E -> P.E
};

inline Composition compose_poly_detailed(const Polynomial &Q, const Polynomial &P) {
  require_boundary(P.Y == Q.X, "polynomial composition", "P.Y differs from Q.X");
  Composition out;
  // (1) elements (s, f) of S_P ×_Y E_Q
  const Pullback d = pullback(P.p, Q.m1);
  // (2) distributivity pullback around (Q.m2, d -> E_Q)
  const spn::PBAround dist = spn::distributivity_pullback(Q.m2, d.pr2);
  const DependentProduct pi = pi_f(Q.m2, d.pr2);
  out.t_fiber = pi.fiber;
  for (Index w = 0; w < pi.total.size; ++w) {
    out.t_of.push_back(pi.proj(w));
    std::vector<Index> chosen;
    for (Index x : pi.sections[w])
      chosen.push_back(d.pr1(x));
    out.w_of.push_back(std::move(chosen));
  }
  // (3) paste with P's lifter: X' ×_{S_P} E_P
  const FinSetMap to_sp = compose(d.pr1, dist.p);
  const Pullback e = pullback(to_sp, P.m2);
  for (Index i = 0; i < e.apex.size; ++i) {
    out.f_of.push_back(d.pr2(dist.p(e.pr1(i))));
    out.e_of.push_back(e.pr2(i));
  }
  out.poly = Polynomial(compose(P.m1, e.pr2), compose(dist.q, e.pr1), compose(Q.p, dist.r));
  return out;
}

inline Polynomial compose_poly(const Polynomial &Q, const Polynomial &P) { return compose_poly_detailed(Q, P).poly; }

/// The comparison (Q∘P)(A) -> Q(P(A)): (w, σ) ↦ (t, f ↦ (w(f), σ on (w, f, -))).
inline FamilyMap composition_comparison(const Polynomial &Q, const Polynomial &P, const Composition &c,
                                        const IndexedFamily &A) {
  const Extension whole = extension_eval(c.poly, A);
  const Extension inner = extension_eval(P, A);
  const Extension outer = extension_eval(Q, inner.family);
  // position of each composite E element in the fiber of its S element
  std::vector<std::map<std::pair<Index, Index>, Index>> slot(c.poly.S.size);
  const auto ef = fibers_of(c.poly.m2);
  for (Index w = 0; w < ef.size(); ++w)
    for (Index i = 0; i < ef[w].size(); ++i)
      slot[w][{c.f_of[ef[w][i]], c.e_of[ef[w][i]]}] = i;
  std::vector<Index> table(whole.s_of.size());
  for (Index i = 0; i < table.size(); ++i) {
    const Index w = whole.s_of[i];
    const Index t = c.t_of[w];
    std::vector<Index> tau;
    for (Index pos = 0; pos < c.t_fiber[t].size(); ++pos) {
      const Index f = c.t_fiber[t][pos];
      const Index s = c.w_of[w][pos];
      std::vector<Index> sig;
      for (Index e : inner.e_fiber[s])
        sig.push_back(whole.sigma[i][slot[w].at({f, e})]);
      tau.push_back(inner.find(s, sig));
    }
    table[i] = outer.find(t, tau);
  }
  return {whole.family, outer.family, FinSetMap(whole.family.total, outer.family.total, std::move(table))};
}

/// An isomorphism of polynomials fixing X and Y.
struct PolyIso {
  FinSetMap on_E;
  FinSetMap on_S;
};

inline std::optional<PolyIso> find_poly_iso(const Polynomial &a, const Polynomial &b) {
  if (!(a.X == b.X && a.Y == b.Y && a.E == b.E && a.S == b.S))
    return std::nullopt;
  const auto fa = fibers_of(a.m2), fb = fibers_of(b.m2);
  auto signature = [](const Polynomial &P, const std::vector<Index> &fib) {
    std::vector<Index> v;
    for (Index e : fib)
      v.push_back(P.m1(e));
    std::sort(v.begin(), v.end());
    return v;
  };
  std::vector<std::vector<Index>> sa, sb;
  for (Index s = 0; s < a.S.size; ++s)
    sa.push_back(signature(a, fa[s]));
  for (Index s = 0; s < b.S.size; ++s)
    sb.push_back(signature(b, fb[s]));
  // S elements match iff same p value and same m1-signature; the matching
  // is then free within each class, so a greedy pairing suffices.
  std::vector<Index> on_s(a.S.size, npos);
  std::vector<bool> used(b.S.size, false);
  for (Index s = 0; s < a.S.size; ++s) {
    for (Index t = 0; t < b.S.size; ++t)
      if (!used[t] && a.p(s) == b.p(t) && sa[s] == sb[t]) {
        on_s[s] = t;
        used[t] = true;
        break;
      }
    if (on_s[s] == npos)
      return std::nullopt;
  }
  std::vector<Index> on_e(a.E.size, npos);
  std::vector<bool> used_e(b.E.size, false);
  for (Index e = 0; e < a.E.size; ++e) {
    for (Index e2 : fb[on_s[a.m2(e)]])
      if (!used_e[e2] && b.m1(e2) == a.m1(e)) {
        on_e[e] = e2;
        used_e[e2] = true;
        break;
      }
    if (on_e[e] == npos)
      return std::nullopt;
  }
  return PolyIso{FinSetMap(a.E, b.E, on_e), FinSetMap(a.S, b.S, on_s)};
}

// ---------------------------------------------------------------------------
// Morphisms of polynomials

/// (λ, h, ρ) : P => P' with h : S -> S' a span whose left leg is a bijection,
/// λ : m'∘h => m and ρ : p'∘h => p, the latter invertible.
struct PolyMorphism {
  Polynomial source;
  Polynomial target;
  spn::Span h;
  spn::SpanCell lambda;
  spn::SpanCell rho;

  PolyMorphism() = default;

  /// `lambda_table` sends each element (η, e') of the apex of m'∘h to E.
  PolyMorphism(Polynomial src, Polynomial tgt, spn::Span h_, std::vector<Index> lambda_table)
      : source(std::move(src)), target(std::move(tgt)), h(std::move(h_)) {
    require_boundary(source.X == target.X && source.Y == target.Y, "polynomial morphism boundary",
                     "source and target differ on X or Y");
    require(h.left_foot == source.S && h.right_foot == target.S, "polynomial morphism typing",
            "h is not a span S -> S'");
    require(is_bijective(h.left_leg), "polynomial morphism fibration", "left leg of h is not a bijection");
    lifted_ = spn::compose_with_pullback(target.lifter(), h);
    const auto &mh = lifted_;
    require(lambda_table.size() == mh.span.apex.size, "polynomial morphism typing", "λ has the wrong domain");
    lambda = spn::SpanCell(mh.span, source.lifter(), FinSetMap(mh.span.apex, source.E, std::move(lambda_table)));
    left_inverse_ = inverse(h.left_leg);
    const auto ph = spn::compose_with_pullback(spn::graph(target.p), h);
    rho = spn::SpanCell(ph.span, spn::graph(source.p), compose(h.left_leg, ph.pb.pr1));
    require(rho.invertible(), "polynomial morphism ρ", "ρ is not invertible");
  }

  /// h as a function S -> S'.
  [[nodiscard]] FinSetMap phi() const { return compose(h.right_leg, left_inverse_); }

  /// λ(s, e') for φ(s) = m2'(e').
  [[nodiscard]] Index lambda_at(Index s, Index e2) const {
    return lambda.h(lifted_.pb.index_of(left_inverse_(s), e2));
  }

private:
  spn::Composite lifted_;
  FinSetMap left_inverse_;
};

/// A morphism with h = graph(φ); `lam(s, e')` gives λ on pairs with φ(s) = m2'(e').
template <class Lambda>
PolyMorphism make_polymorph(const Polynomial &src, const Polynomial &tgt, const FinSetMap &phi, Lambda &&lam) {
  spn::Span h = spn::graph(phi);
  const auto mh = spn::compose_with_pullback(tgt.lifter(), h);
  std::vector<Index> table(mh.span.apex.size);
  for (Index i = 0; i < table.size(); ++i)
    table[i] = lam(mh.pb.pr1(i), mh.pb.pr2(i));
  return {src, tgt, std::move(h), std::move(table)};
}

inline PolyMorphism identity_polymorph(const Polynomial &P) {
  return make_polymorph(P, P, identity_map(P.S), [&](Index, Index e) { return e; });
}

inline bool is_strong(const PolyMorphism &f) { return f.lambda.invertible(); }

/// g after f.
inline PolyMorphism vcompose_polymorph(const PolyMorphism &g, const PolyMorphism &f) {
  require_boundary(f.target == g.source, "vertical composability", "middle polynomials differ");
  const auto hh = spn::compose_with_pullback(g.h, f.h); // (η_f, η_g)
  const auto mh = spn::compose_with_pullback(g.target.lifter(), hh.span);
  const auto mg = spn::compose_with_pullback(g.target.lifter(), g.h);
  const auto mf = spn::compose_with_pullback(f.target.lifter(), f.h);
  std::vector<Index> table(mh.span.apex.size);
  for (Index i = 0; i < table.size(); ++i) {
    const Index pair = mh.pb.pr1(i), e2 = mh.pb.pr2(i);
    const Index eta_f = hh.pb.pr1(pair), eta_g = hh.pb.pr2(pair);
    const Index e1 = g.lambda.h(mg.pb.index_of(eta_g, e2));
    table[i] = f.lambda.h(mf.pb.index_of(eta_f, e1));
  }
  return {f.source, g.target, hh.span, std::move(table)};
}

/// The induced transformation P(A) -> P'(A): (s, σ) ↦ (φ s, σ∘λ(s, -)).
inline FamilyMap polymorph_component(const PolyMorphism &f, const IndexedFamily &A) {
  const Extension from = extension_eval(f.source, A);
  const Extension to = extension_eval(f.target, A);
  const FinSetMap phi = f.phi();
  const auto fib_src = fibers_of(f.source.m2);
  std::vector<Index> pos(f.source.E.size);
  for (const auto &fb : fib_src)
    for (Index i = 0; i < fb.size(); ++i)
      pos[fb[i]] = i;
  std::vector<Index> table(from.s_of.size());
  for (Index i = 0; i < table.size(); ++i) {
    const Index s = from.s_of[i];
    std::vector<Index> sig;
    for (Index e2 : to.e_fiber[phi(s)])
      sig.push_back(from.sigma[i][pos[f.lambda_at(s, e2)]]);
    table[i] = to.find(phi(s), sig);
  }
  return {from.family, to.family, FinSetMap(from.family.total, to.family.total, std::move(table))};
}

/// k * h between composites Q∘P => Q'∘P'. On composite S elements
/// ℓ(t, w) = (ψ t, f' ↦ φ(w(λ_k(t, f')))); λ sends (ω, (w', f', e')) to
/// (w, λ_k(t, f'), λ_h(w(f), e')).
inline PolyMorphism hcompose_polymorph(const PolyMorphism &k, const PolyMorphism &h) {
  const Composition src = compose_poly_detailed(k.source, h.source);
  const Composition tgt = compose_poly_detailed(k.target, h.target);
  const FinSetMap phi = h.phi(), psi = k.phi();
  std::vector<Index> pos_q(k.source.E.size);
  for (const auto &fb : src.t_fiber)
    for (Index i = 0; i < fb.size(); ++i)
      pos_q[fb[i]] = i;
  std::map<std::pair<Index, std::vector<Index>>, Index> tgt_s;
  for (Index w = 0; w < tgt.t_of.size(); ++w)
    tgt_s[{tgt.t_of[w], tgt.w_of[w]}] = w;
  std::map<std::vector<Index>, Index> src_e; // (w, f, e)
  for (Index i = 0; i < src.f_of.size(); ++i)
    src_e[{src.poly.m2(i), src.f_of[i], src.e_of[i]}] = i;
  std::vector<Index> ell(src.t_of.size());
  for (Index w = 0; w < ell.size(); ++w) {
    const Index t = src.t_of[w];
    std::vector<Index> chosen;
    for (Index f2 : tgt.t_fiber[psi(t)])
      chosen.push_back(phi(src.w_of[w][pos_q[k.lambda_at(t, f2)]]));
    ell[w] = tgt_s.at({psi(t), chosen});
  }
  const FinSetMap ell_map(src.poly.S, tgt.poly.S, ell);
  return make_polymorph(src.poly, tgt.poly, ell_map, [&](Index w, Index e_new) {
    const Index t = src.t_of[w];
    const Index f = k.lambda_at(t, tgt.f_of[e_new]);
    const Index s = src.w_of[w][pos_q[f]];
    return src_e.at({w, f, h.lambda_at(s, tgt.e_of[e_new])});
  });
}

/// Invertible σ : f.h => g.h with g.λ∘(m'σ) = f.λ.
inline bool are_isomorphic_polymorph(const PolyMorphism &f, const PolyMorphism &g) {
  if (!(f.source == g.source) || !(f.target == g.target) || f.h.apex.size != g.h.apex.size)
    return false;
  bool found = false;
  const spn::Span m = f.target.lifter();
  spn::for_each_cell(f.h, g.h, [&](const spn::SpanCell &sigma) {
    if (found || !sigma.invertible())
      return;
    const auto pasted = spn::vcompose(g.lambda, spn::hcompose(spn::identity_cell(m), sigma));
    if (pasted.h == f.lambda.h)
      found = true;
  });
  return found;
}

// ---------------------------------------------------------------------------
// H_K

/// H_K(P)(u) = p_*∘rif(m, u) for u : K -> X.
inline spn::Span hK_span(const FinSetObj &K, const Polynomial &P, const spn::Span &u) {
  require_boundary(u.left_foot == K && u.right_foot == P.X, "H_K argument", "u is not a span K -> X");
  const auto rif = spn::rif_span(P.lifter(), u);
  return spn::compose_spans(spn::graph(P.p), rif.lifting);
}

/// Families over X as spans 1 -> X, and back.
inline spn::Span family_as_span(const IndexedFamily &A) { return {terminal_map(A.total), A.proj}; }

} // namespace polyspan::poly
