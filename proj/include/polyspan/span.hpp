#pragma once

// The bicategory of spans of finite sets: composition by pullback, 2-cells,
// the coherence cells, maps (left adjoints), right liftings and
// pullbacks around a composable pair.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "finset.hpp"

namespace polyspan::spn {

/// X <- S -> Y.
struct Span {
  FinSetObj left_foot;
  FinSetObj right_foot;
  FinSetObj apex;
  FinSetMap left_leg;
  FinSetMap right_leg;

  Span() = default;
  Span(FinSetMap left, FinSetMap right)
      : left_foot(left.cod), right_foot(right.cod), apex(left.dom), left_leg(std::move(left)),
        right_leg(std::move(right)) {
    require(left_leg.dom == right_leg.dom, "span legs", "legs have different domains");
  }

  friend bool operator==(const Span &a, const Span &b) {
    return a.left_leg == b.left_leg && a.right_leg == b.right_leg;
  }
};

inline bool parallel(const Span &a, const Span &b) {
  return a.left_foot == b.left_foot && a.right_foot == b.right_foot;
}

/// A morphism of spans: a map of apexes commuting with both legs.
struct SpanCell {
  Span source;
  Span target;
  FinSetMap h;

  SpanCell() = default;
  SpanCell(Span s, Span t, FinSetMap map) : source(std::move(s)), target(std::move(t)), h(std::move(map)) {
    require_boundary(parallel(source, target), "parallel spans", "cell between non-parallel spans");
    require(h.dom == source.apex && h.cod == target.apex, "cell typing", "h is not between the apexes");
    require(compose(target.left_leg, h) == source.left_leg, "cell left triangle",
            "target.left_leg∘h differs from source.left_leg");
    require(compose(target.right_leg, h) == source.right_leg, "cell right triangle",
            "target.right_leg∘h differs from source.right_leg");
  }

  [[nodiscard]] bool invertible() const { return is_bijective(h); }
};

inline Span identity_span(const FinSetObj &x) { return {identity_map(x), identity_map(x)}; }

/// f_* = (1, X, f).
inline Span graph(const FinSetMap &f) { return {identity_map(f.dom), f}; }

/// f^* = (f, X, 1).
inline Span cograph(const FinSetMap &f) { return {f, identity_map(f.dom)}; }

struct Composite {
  Span span;
  Pullback pb; // of s.right_leg and t.left_leg; element (a, b) with a in s, b in t
};

/// t after s. The apex is the pullback of s.right_leg and t.left_leg.
inline Composite compose_with_pullback(const Span &t, const Span &s) {
  require_boundary(s.right_foot == t.left_foot, "span feet", "right foot of s differs from left foot of t");
  Pullback pb = pullback(s.right_leg, t.left_leg);
  Span out(compose(s.left_leg, pb.pr1), compose(t.right_leg, pb.pr2));
  return {std::move(out), std::move(pb)};
}

inline Span compose_spans(const Span &t, const Span &s) { return compose_with_pullback(t, s).span; }

// ---------------------------------------------------------------------------
// Cell calculus

inline SpanCell identity_cell(const Span &s) { return {s, s, identity_map(s.apex)}; }

/// beta after alpha.
inline SpanCell vcompose(const SpanCell &beta, const SpanCell &alpha) {
  require_boundary(alpha.target == beta.source, "vertical composability", "cells do not meet");
  return {alpha.source, beta.target, compose(beta.h, alpha.h)};
}

/// beta * alpha : t∘s => t'∘s' for alpha : s => s' and beta : t => t'.
inline SpanCell hcompose(const SpanCell &beta, const SpanCell &alpha) {
  const auto from = compose_with_pullback(beta.source, alpha.source);
  const auto to = compose_with_pullback(beta.target, alpha.target);
  std::vector<Index> h(from.span.apex.size);
  for (Index i = 0; i < h.size(); ++i)
    h[i] = to.pb.index_of(alpha.h(from.pb.pr1(i)), beta.h(from.pb.pr2(i)));
  return {from.span, to.span, FinSetMap(from.span.apex, to.span.apex, std::move(h))};
}

/// (r∘t)∘s => r∘(t∘s).
inline SpanCell associator(const Span &r, const Span &t, const Span &s) {
  const auto rt = compose_with_pullback(r, t);
  const auto left = compose_with_pullback(rt.span, s);
  const auto ts = compose_with_pullback(t, s);
  const auto right = compose_with_pullback(r, ts.span);
  std::vector<Index> h(left.span.apex.size);
  for (Index i = 0; i < h.size(); ++i) {
    const Index a = left.pb.pr1(i), bc = left.pb.pr2(i);
    h[i] = right.pb.index_of(ts.pb.index_of(a, rt.pb.pr1(bc)), rt.pb.pr2(bc));
  }
  return {left.span, right.span, FinSetMap(left.span.apex, right.span.apex, std::move(h))};
}

/// r∘(t∘s) => (r∘t)∘s.
inline SpanCell associator_inverse(const Span &r, const Span &t, const Span &s) {
  const auto ts = compose_with_pullback(t, s);
  const auto left = compose_with_pullback(r, ts.span);
  const auto rt = compose_with_pullback(r, t);
  const auto right = compose_with_pullback(rt.span, s);
  std::vector<Index> h(left.span.apex.size);
  for (Index i = 0; i < h.size(); ++i) {
    const Index ab = left.pb.pr1(i), c = left.pb.pr2(i);
    h[i] = right.pb.index_of(ts.pb.pr1(ab), rt.pb.index_of(ts.pb.pr2(ab), c));
  }
  return {left.span, right.span, FinSetMap(left.span.apex, right.span.apex, std::move(h))};
}

/// 1_Y∘s => s.
inline SpanCell left_unitor(const Span &s) {
  const auto c = compose_with_pullback(identity_span(s.right_foot), s);
  return {c.span, s, c.pb.pr1};
}

/// s => 1_Y∘s.
inline SpanCell left_unitor_inverse(const Span &s) {
  const auto c = compose_with_pullback(identity_span(s.right_foot), s);
  std::vector<Index> h(s.apex.size);
  for (Index a = 0; a < h.size(); ++a)
    h[a] = c.pb.index_of(a, s.right_leg(a));
  return {s, c.span, FinSetMap(s.apex, c.span.apex, std::move(h))};
}

/// s∘1_X => s.
inline SpanCell right_unitor(const Span &s) {
  const auto c = compose_with_pullback(s, identity_span(s.left_foot));
  return {c.span, s, c.pb.pr2};
}

/// s => s∘1_X.
inline SpanCell right_unitor_inverse(const Span &s) {
  const auto c = compose_with_pullback(s, identity_span(s.left_foot));
  std::vector<Index> h(s.apex.size);
  for (Index a = 0; a < h.size(); ++a)
    h[a] = c.pb.index_of(s.left_leg(a), a);
  return {s, c.span, FinSetMap(s.apex, c.span.apex, std::move(h))};
}

/// Calls `visit` on every cell source => target, by lexicographic table.
inline void for_each_cell(const Span &source, const Span &target,
                          const std::function<void(const SpanCell &)> &visit) {
  if (!parallel(source, target))
    return;
  std::map<std::pair<Index, Index>, std::vector<Index>> over;
  for (Index b = 0; b < target.apex.size; ++b)
    over[{target.left_leg(b), target.right_leg(b)}].push_back(b);
  std::vector<const std::vector<Index> *> cands(source.apex.size);
  std::vector<std::size_t> bounds(source.apex.size);
  static const std::vector<Index> none;
  for (Index a = 0; a < source.apex.size; ++a) {
    auto it = over.find({source.left_leg(a), source.right_leg(a)});
    cands[a] = it == over.end() ? &none : &it->second;
    bounds[a] = cands[a]->size();
  }
  for_each_tuple(bounds, [&](const std::vector<Index> &c) {
    std::vector<Index> h(c.size());
    for (Index a = 0; a < c.size(); ++a)
      h[a] = (*cands[a])[c[a]];
    visit(SpanCell(source, target, FinSetMap(source.apex, target.apex, std::move(h))));
  });
}

/// An invertible cell s => t, matching apex elements with equal leg values
/// in increasing order.
inline std::optional<SpanCell> find_span_iso(const Span &s, const Span &t) {
  if (!parallel(s, t) || s.apex.size != t.apex.size)
    return std::nullopt;
  std::map<std::pair<Index, Index>, std::vector<Index>> over;
  for (Index b = 0; b < t.apex.size; ++b)
    over[{t.left_leg(b), t.right_leg(b)}].push_back(b);
  std::map<std::pair<Index, Index>, std::size_t> used;
  std::vector<Index> h(s.apex.size);
  for (Index a = 0; a < s.apex.size; ++a) {
    const std::pair<Index, Index> key{s.left_leg(a), s.right_leg(a)};
    auto it = over.find(key);
    std::size_t &k = used[key];
    if (it == over.end() || k >= it->second.size())
      return std::nullopt;
    h[a] = it->second[k++];
  }
  return SpanCell(s, t, FinSetMap(s.apex, t.apex, std::move(h)));
}

// ---------------------------------------------------------------------------
// Maps

/// Right adjoint with unit and counit for a span whose left leg is a
/// bijection.
struct Adjunction {
  Span left;
  Span right;
  SpanCell unit;   // 1_X => right∘left
  SpanCell counit; // left∘right => 1_Y
};

/// (ε s)·α⁻¹·(s η) after the unitors; the identity on s when the triangle holds.
inline SpanCell left_triangle(const Adjunction &a) {
  const Span &s = a.left, &r = a.right;
  SpanCell c = right_unitor_inverse(s);
  c = vcompose(hcompose(identity_cell(s), a.unit), c);
  c = vcompose(associator_inverse(s, r, s), c);
  c = vcompose(hcompose(a.counit, identity_cell(s)), c);
  return vcompose(left_unitor(s), c);
}

inline SpanCell right_triangle(const Adjunction &a) {
  const Span &s = a.left, &r = a.right;
  SpanCell c = left_unitor_inverse(r);
  c = vcompose(hcompose(a.unit, identity_cell(r)), c);
  c = vcompose(associator(r, s, r), c);
  c = vcompose(hcompose(identity_cell(r), a.counit), c);
  return vcompose(right_unitor(r), c);
}

inline bool triangles_hold(const Adjunction &a) {
  return left_triangle(a).h == identity_map(a.left.apex) && right_triangle(a).h == identity_map(a.right.apex);
}

/// The witness exists exactly when the left leg is a bijection; the right
/// adjoint of (u, S, p) is then (p, S, u).
inline std::optional<Adjunction> is_map(const Span &s) {
  if (!is_bijective(s.left_leg))
    return std::nullopt;
  const FinSetMap inv = inverse(s.left_leg);
  Span r(s.right_leg, s.left_leg);
  const auto rs = compose_with_pullback(r, s);
  std::vector<Index> eta(s.left_foot.size);
  for (Index x = 0; x < eta.size(); ++x)
    eta[x] = rs.pb.index_of(inv(x), inv(x));
  SpanCell unit(identity_span(s.left_foot), rs.span, FinSetMap(s.left_foot, rs.span.apex, std::move(eta)));
  const auto sr = compose_with_pullback(s, r);
  std::vector<Index> eps(sr.span.apex.size);
  for (Index i = 0; i < eps.size(); ++i)
    eps[i] = s.right_leg(sr.pb.pr1(i));
  SpanCell counit(sr.span, identity_span(s.right_foot),
                  FinSetMap(sr.span.apex, s.right_foot, std::move(eps)));
  return Adjunction{s, std::move(r), std::move(unit), std::move(counit)};
}

// ---------------------------------------------------------------------------
// Right liftings

struct RightLifting {
  Span lifting; // K -> S
  SpanCell counit; // m∘lifting => u
  std::vector<Index> k_of, s_of;
  std::vector<std::vector<Index>> sigma; // element -> U-element per position in m2⁻¹(s)
  std::vector<std::vector<Index>> fiber; // s -> sorted m2⁻¹(s)
  std::vector<Index> position;           // e -> position inside its fiber
  std::map<std::vector<Index>, Index> index; // {k, s, σ...}
};

/// rif(m, u) for m = (m2, E, m1) : S -> X and u = (uk, U, ux) : K -> X.
/// Apex elements are (k, s, σ) ordered by k, then s, then σ lexicographically,
/// where σ sends e ∈ m2⁻¹(s) to an element of U over k and over m1(e).
inline RightLifting rif_span(const Span &m, const Span &u) {
  require_boundary(m.right_foot == u.right_foot, "right lifting", "m and u have different codomains");
  RightLifting out;
  out.fiber = fibers_of(m.left_leg);
  out.position.assign(m.apex.size, 0);
  for (const auto &fb : out.fiber)
    for (Index i = 0; i < fb.size(); ++i)
      out.position[fb[i]] = i;
  std::map<std::pair<Index, Index>, std::vector<Index>> over; // (k, x) -> U-elements
  for (Index w = 0; w < u.apex.size; ++w)
    over[{u.left_leg(w), u.right_leg(w)}].push_back(w);
  static const std::vector<Index> none;
  for (Index k = 0; k < u.left_foot.size; ++k)
    for (Index s = 0; s < m.left_foot.size; ++s) {
      std::vector<const std::vector<Index> *> cands;
      std::vector<std::size_t> bounds;
      for (Index e : out.fiber[s]) {
        auto it = over.find({k, m.right_leg(e)});
        cands.push_back(it == over.end() ? &none : &it->second);
        bounds.push_back(cands.back()->size());
      }
      for_each_tuple(bounds, [&](const std::vector<Index> &c) {
        std::vector<Index> sig(c.size());
        for (Index i = 0; i < c.size(); ++i)
          sig[i] = (*cands[i])[c[i]];
        std::vector<Index> key{k, s};
        key.insert(key.end(), sig.begin(), sig.end());
        out.index.emplace(std::move(key), out.k_of.size());
        out.k_of.push_back(k);
        out.s_of.push_back(s);
        out.sigma.push_back(std::move(sig));
      });
    }
  const FinSetObj apex(out.k_of.size());
  out.lifting = Span(FinSetMap(apex, u.left_foot, out.k_of), FinSetMap(apex, m.left_foot, out.s_of));
  const auto c = compose_with_pullback(m, out.lifting);
  std::vector<Index> h(c.span.apex.size);
  for (Index i = 0; i < h.size(); ++i) {
    const Index rho = c.pb.pr1(i), e = c.pb.pr2(i);
    h[i] = out.sigma[rho][out.position[e]];
  }
  out.counit = SpanCell(c.span, u, FinSetMap(c.span.apex, u.apex, std::move(h)));
  return out;
}

/// The cell v => rif(m, u) transposing c : m∘v => u.
inline SpanCell rif_transpose(const Span &m, const RightLifting &rif, const Span &v, const SpanCell &c) {
  const auto mv = compose_with_pullback(m, v);
  require_boundary(c.source == mv.span, "right lifting transpose", "cell source is not m∘v");
  std::vector<Index> d(v.apex.size);
  for (Index w = 0; w < v.apex.size; ++w) {
    const Index s = v.right_leg(w);
    std::vector<Index> key{v.left_leg(w), s};
    for (Index e : rif.fiber[s])
      key.push_back(c.h(mv.pb.index_of(w, e)));
    d[w] = rif.index.at(key);
  }
  return {v, rif.lifting, FinSetMap(v.apex, rif.lifting.apex, std::move(d))};
}

/// counit · (m d) : m∘v => u.
inline SpanCell rif_paste(const Span &m, const RightLifting &rif, const SpanCell &d) {
  return vcompose(rif.counit, hcompose(identity_cell(m), d));
}

// ---------------------------------------------------------------------------
// Pullbacks around (f, g)

/// A commuting diagram f∘g∘p = r∘q with f : A -> B, g : Z -> A, p : X -> Z,
/// q : X -> Y, r : Y -> B.
struct PBAround {
  FinSetMap f, g, p, q, r;

  PBAround() = default;
  PBAround(FinSetMap f_, FinSetMap g_, FinSetMap p_, FinSetMap q_, FinSetMap r_)
      : f(std::move(f_)), g(std::move(g_)), p(std::move(p_)), q(std::move(q_)), r(std::move(r_)) {
    require_boundary(g.cod == f.dom && p.cod == g.dom && q.dom == p.dom && r.dom == q.cod && r.cod == f.cod,
                     "pullback around typing", "maps do not fit the shape");
    require(compose(f, compose(g, p)) == compose(r, q), "pullback around commutes", "f∘g∘p differs from r∘q");
  }

  /// Whether (q, X, g∘p) is a pullback of (r, f).
  [[nodiscard]] bool is_pullback() const {
    const Pullback pb = pullback(r, f);
    const FinSetMap gp = compose(g, p);
    std::vector<Index> cmp(p.dom.size);
    for (Index x = 0; x < cmp.size(); ++x)
      cmp[x] = pb.index_of(q(x), gp(x));
    return is_bijective(FinSetMap(p.dom, pb.apex, std::move(cmp)));
  }
};

/// The terminal pullback around (f, g): Y = Π_f(g), X = f*Y, p = evaluation.
inline PBAround distributivity_pullback(const FinSetMap &f, const FinSetMap &g) {
  const DependentProduct d = pi_f(f, g);
  return {f, g, d.eval, d.counit_domain.pr1, d.proj};
}

/// Candidates y ∈ target.Y for the image of each y' of `other`: r y = r' y'
/// and each x' over y' has some x over y with p x = p' x'.
inline std::vector<std::vector<Index>> pb_around_candidates(const PBAround &target, const PBAround &other) {
  require_boundary(target.f == other.f && target.g == other.g, "pullbacks around the same pair",
                   "(f, g) differ");
  const auto over_y = fibers_of(other.q);
  const auto target_over = fibers_of(target.q);
  std::vector<std::vector<Index>> out(other.r.dom.size);
  for (Index yp = 0; yp < out.size(); ++yp)
    for (Index y = 0; y < target.r.dom.size; ++y) {
      if (target.r(y) != other.r(yp))
        continue;
      bool ok = true;
      for (Index xp : over_y[yp]) {
        bool hit = false;
        for (Index x : target_over[y])
          if (target.p(x) == other.p(xp)) {
            hit = true;
            break;
          }
        if (!hit) {
          ok = false;
          break;
        }
      }
      if (ok)
        out[yp].push_back(y);
    }
  return out;
}

/// The unique morphism t : other -> target, i.e. r∘t = r' inducing s with
/// p∘s = p' and q∘s = t∘q'. Candidates are counted independently for each
/// y', which covers every map Y' -> Y.
inline FinSetMap mediate_pb_around(const PBAround &target, const PBAround &other) {
  const auto cands = pb_around_candidates(target, other);
  std::vector<Index> t(cands.size());
  for (Index yp = 0; yp < cands.size(); ++yp) {
    if (cands[yp].empty())
      throw MediatorError(MediatorError::Kind::none_found, "no image for element " + std::to_string(yp));
    if (cands[yp].size() > 1)
      throw MediatorError(MediatorError::Kind::several_found,
                          std::to_string(cands[yp].size()) + " images for element " + std::to_string(yp));
    t[yp] = cands[yp][0];
  }
  return {other.r.dom, target.r.dom, std::move(t)};
}

/// Number of morphisms other -> target.
inline std::size_t count_pb_around_morphisms(const PBAround &target, const PBAround &other) {
  std::size_t n = 1;
  for (const auto &c : pb_around_candidates(target, other))
    n *= c.size();
  return n;
}

// ---------------------------------------------------------------------------
// Factorization through bipullbacks

/// A cone over the cospan (f_*, g_*): spans u : K -> A and v : K -> B with
/// an invertible cell θ : f_*∘u => g_*∘v.
struct Cone {
  Span u;
  Span v;
  SpanCell theta;
};

/// (λ, w, ρ): w : K -> P with λ : pr1_*∘w => u and ρ : pr2_*∘w => v invertible.
struct Factorization {
  Span w;
  SpanCell lambda;
  SpanCell rho;
};

/// f_*∘u has the apex of u up to the pullback against an identity.
inline Composite graph_after(const FinSetMap &f, const Span &u) { return compose_with_pullback(graph(f), u); }

/// Checks that (λ, w, ρ) pastes to θ: the composite
/// f_*u ≅ f_*pr1_*w ≅ g_*pr2_*w ≅ g_*v agrees with θ on apex elements.
inline bool pastes_to(const Pullback &pb, const FinSetMap &f, const FinSetMap &g, const Cone &cone,
                      const Factorization &fac) {
  // Element of w: a triple whose images in u and v are related by θ.
  const auto fu = graph_after(f, cone.u);
  const auto gv = graph_after(g, cone.v);
  const auto p1w = compose_with_pullback(graph(pb.pr1), fac.w);
  const auto p2w = compose_with_pullback(graph(pb.pr2), fac.w);
  for (Index i = 0; i < fac.w.apex.size; ++i) {
    const Index in_u = fac.lambda.h(p1w.pb.index_of(i, fac.w.right_leg(i)));
    const Index in_v = fac.rho.h(p2w.pb.index_of(i, fac.w.right_leg(i)));
    const Index via_theta = cone.theta.h(fu.pb.index_of(in_u, cone.u.right_leg(in_u)));
    if (via_theta != gv.pb.index_of(in_v, cone.v.right_leg(in_v)))
      return false;
  }
  return true;
}

/// Factorization of a cone through the square of graphs of a pullback
/// P = A ×_C B, which is a bipullback in spans.
inline Factorization factor_through_pullback(const Pullback &pb, const FinSetMap &f, const FinSetMap &g,
                                             const Cone &cone) {
  const auto fu = graph_after(f, cone.u);
  const auto gv = graph_after(g, cone.v);
  require(cone.theta.source == fu.span && cone.theta.target == gv.span && cone.theta.invertible(),
          "cone cell", "θ must be an invertible cell f_*∘u => g_*∘v");
  const Span &u = cone.u, &v = cone.v;
  std::vector<Index> t(u.apex.size), to_v(u.apex.size);
  for (Index x = 0; x < u.apex.size; ++x) {
    const Index y = gv.pb.pr1(cone.theta.h(fu.pb.index_of(x, u.right_leg(x))));
    to_v[x] = y;
    t[x] = pb.index_of(u.right_leg(x), v.right_leg(y));
  }
  Span w(u.left_leg, FinSetMap(u.apex, pb.apex, std::move(t)));
  const auto p1w = compose_with_pullback(graph(pb.pr1), w);
  const auto p2w = compose_with_pullback(graph(pb.pr2), w);
  SpanCell lambda(p1w.span, u, p1w.pb.pr1);
  std::vector<Index> rh(p2w.span.apex.size);
  for (Index i = 0; i < rh.size(); ++i)
    rh[i] = to_v[p2w.pb.pr1(i)];
  SpanCell rho(p2w.span, v, FinSetMap(p2w.span.apex, v.apex, std::move(rh)));
  return {std::move(w), std::move(lambda), std::move(rho)};
}

/// Invertible cells σ : a.w => b.w with b.λ∘(pr1_*σ) = a.λ and
/// b.ρ∘(pr2_*σ) = a.ρ, by enumeration.
inline std::size_t count_connecting_cells(const Pullback &pb, const Factorization &a, const Factorization &b) {
  std::size_t n = 0;
  for_each_cell(a.w, b.w, [&](const SpanCell &sigma) {
    if (!sigma.invertible())
      return;
    const auto l = vcompose(b.lambda, hcompose(identity_cell(graph(pb.pr1)), sigma));
    const auto r = vcompose(b.rho, hcompose(identity_cell(graph(pb.pr2)), sigma));
    if (l.h == a.lambda.h && r.h == a.rho.h)
      ++n;
  });
  return n;
}

/// Factorization of a pullback around (f, g) given by T with s : T -> B and
/// u : T ×_B A -> Z over A, through a distributivity pullback: all k : T -> Y
/// with r∘k = s and p(k τ, a) = u(τ, a), enumerated exhaustively.
inline std::vector<FinSetMap> factor_through_distributivity(const PBAround &dist, const FinSetMap &s,
                                                            const FinSetMap &u) {
  const Pullback tb = pullback(s, dist.f);
  require_boundary(u.dom == tb.apex && u.cod == dist.g.dom, "distributivity cone", "u is not on T ×_B A");
  require(compose(dist.g, u) == tb.pr2, "distributivity cone", "g∘u differs from the projection to A");
  const Pullback yb = pullback(dist.r, dist.f);
  const auto over_b = fibers_of(dist.r);
  std::vector<std::size_t> bounds(s.dom.size);
  for (Index t = 0; t < bounds.size(); ++t)
    bounds[t] = over_b[s(t)].size();
  // X is identified with Y ×_B A through (q, g∘p).
  const FinSetMap gp = compose(dist.g, dist.p);
  std::vector<Index> x_at(yb.apex.size, npos);
  for (Index x = 0; x < dist.p.dom.size; ++x)
    x_at[yb.index_of(dist.q(x), gp(x))] = x;
  std::vector<FinSetMap> out;
  for_each_tuple(bounds, [&](const std::vector<Index> &c) {
    std::vector<Index> k(c.size());
    for (Index t = 0; t < k.size(); ++t)
      k[t] = over_b[s(t)][c[t]];
    for (Index i = 0; i < tb.apex.size; ++i) {
      const Index x = x_at[yb.index_of(k[tb.pr1(i)], tb.pr2(i))];
      if (x == npos || dist.p(x) != u(i))
        return;
    }
    out.emplace_back(s.dom, dist.r.dom, std::move(k));
  });
  return out;
}

/// The pullback around (f, g) induced by (s, u) as in the previous function.
inline PBAround pb_around_from_cone(const FinSetMap &f, const FinSetMap &g, const FinSetMap &s,
                                   const FinSetMap &u) {
  const Pullback tb = pullback(s, f);
  return {f, g, u, tb.pr1, s};
}

} // namespace polyspan::spn
