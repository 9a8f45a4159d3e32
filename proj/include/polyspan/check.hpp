#pragma once

// Seeded property suites. Each suite draws its cases from case_seed(seed, i)
// and records, for every failing case, the seed and the inputs as compact
// JSON so the case can be replayed.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fincat.hpp"
#include "finset.hpp"
#include "io.hpp"
#include "mod.hpp"
#include "poly_set.hpp"
#include "random.hpp"
#include "rel.hpp"
#include "span.hpp"

namespace polyspan::check {

struct Failure {
  std::size_t index;
  std::uint64_t seed;
  std::string what;
  std::string instance;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::size_t checks = 0;
  std::vector<Failure> failures;

  [[nodiscard]] bool ok() const { return failures.empty(); }

  [[nodiscard]] std::string summary() const {
    std::ostringstream os;
    os << suite << " seed " << seed << ": " << cases << " cases, " << checks << " checks, " << failures.size()
       << " failures";
    return os.str();
  }

  [[nodiscard]] std::string text() const {
    std::ostringstream os;
    os << summary() << "\n";
    for (const auto &f : failures) {
      os << "  case " << f.index << " (seed " << f.seed << "): " << f.what << "\n";
      if (!f.instance.empty())
        os << "    instance: " << f.instance << "\n";
    }
    return os.str();
  }
};

/// One test case: its generator, a check counter and the first failure.
class Case {
public:
  Case(std::size_t index, std::uint64_t seed) : index(index), seed(seed), rng(seed) {}

  void expect(bool condition, const std::string &what) {
    ++checks;
    if (!condition && failed.empty())
      failed = what;
  }

  std::size_t index;
  std::uint64_t seed;
  Rng rng;
  std::size_t checks = 0;
  std::string failed;
  std::string instance;
};

/// Runs `count` cases of `body`; an exception thrown by a case is a failure.
inline Report run_cases(const std::string &name, std::uint64_t seed, std::size_t count,
                        const std::function<void(Case &)> &body) {
  Report rep;
  rep.suite = name;
  rep.seed = seed;
  for (std::size_t i = 0; i < count; ++i) {
    Case c(i, case_seed(seed, i));
    try {
      body(c);
    } catch (const std::exception &e) {
      c.failed = std::string("unexpected error: ") + e.what();
    }
    ++rep.cases;
    rep.checks += c.checks;
    if (!c.failed.empty())
      rep.failures.push_back({i, c.seed, c.failed, c.instance});
  }
  return rep;
}

inline std::vector<std::size_t> fiber_sizes(const FinSetMap &f) {
  std::vector<std::size_t> n(f.cod.size, 0);
  for (Index i = 0; i < f.dom.size; ++i)
    ++n[f(i)];
  return n;
}

// ---------------------------------------------------------------------------
// extension

namespace oracle {

inline constexpr std::size_t big = std::size_t(1) << 40;

/// |P(A)_y| = Σ_{p s = y} Π_{m2 e = s} |A_{m1 e}|, saturating at `big`.
inline std::vector<std::size_t> extension_counts(const poly::Polynomial &P, const std::vector<std::size_t> &a) {
  std::vector<std::size_t> per_s(P.S.size, 1);
  for (Index e = 0; e < P.E.size; ++e) {
    const std::size_t v = a[P.m1(e)];
    std::size_t &t = per_s[P.m2(e)];
    t = (v != 0 && t > big / v) ? big : t * v;
  }
  std::vector<std::size_t> out(P.Y.size, 0);
  for (Index s = 0; s < P.S.size; ++s)
    out[P.p(s)] = std::min(big, out[P.p(s)] + per_s[s]);
  return out;
}

inline std::size_t total(const std::vector<std::size_t> &v) {
  std::size_t t = 0;
  for (auto x : v)
    t = std::min(oracle::big, t + x);
  return t;
}

} // namespace oracle

/// Draws a family whose extensions along P, Q and Q∘P all stay small,
/// shrinking the size bound until they do.
inline poly::IndexedFamily bounded_family(Rng &rng, const poly::Polynomial &Q, const poly::Polynomial &P,
                                          const poly::Polynomial &QP, std::size_t limit) {
  for (std::size_t max_total = 4;; --max_total) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      auto A = gen::family(rng, P.X, max_total);
      const auto a = fiber_sizes(A.proj);
      const auto pa = oracle::extension_counts(P, a);
      if (oracle::total(pa) <= limit && oracle::total(oracle::extension_counts(Q, pa)) <= limit &&
          oracle::total(oracle::extension_counts(QP, a)) <= limit)
        return A;
    }
    if (max_total == 0)
      return gen::family(rng, P.X, 0);
  }
}

inline void extension_case(Case &c) {
  auto &r = c.rng;
  const FinSetObj X(r.between(1, 3)), Y(r.between(1, 3)), Z(r.between(1, 3));
  const auto P = gen::polynomial(r, X, Y, 5, 5);
  const auto Q = gen::polynomial(r, Y, Z, 5, 5);
  c.instance = io::Json{{"Q", io::encode(Q)}, {"P", io::encode(P)}}.dump();
  const auto comp = poly::compose_poly_detailed(Q, P);
  const auto &QP = comp.poly;
  constexpr std::size_t limit = 20000;
  for (int k = 0; k < 5; ++k) {
    const auto A = bounded_family(r, Q, P, QP, limit);
    const auto a = fiber_sizes(A.proj);
    const auto whole = poly::extension_eval(QP, A);
    const auto inner = poly::extension_eval(P, A);
    const auto outer = poly::extension_eval(Q, inner.family);
    const auto expected = oracle::extension_counts(Q, oracle::extension_counts(P, a));
    c.expect(fiber_sizes(whole.family.proj) == fiber_sizes(outer.family.proj),
             "fibre sizes of (Q∘P)(A) and Q(P(A)) differ");
    c.expect(fiber_sizes(outer.family.proj) == expected, "fibre sizes of Q(P(A)) differ from the counting oracle");
    c.expect(oracle::extension_counts(QP, a) == expected, "counting oracle differs on Q∘P");
    const auto cmp = poly::composition_comparison(Q, P, comp, A);
    c.expect(is_bijective(cmp.map), "comparison (Q∘P)(A) -> Q(P(A)) is not a bijection");
    if (k >= 2)
      continue;
    // naturality along a random map of families
    std::size_t extra = 1;
    poly::FamilyMap phi = gen::family_map(r, A, extra);
    for (;;) {
      const auto a2 = fiber_sizes(phi.target.proj);
      const auto pa2 = oracle::extension_counts(P, a2);
      if (oracle::total(oracle::extension_counts(QP, a2)) <= limit &&
          oracle::total(oracle::extension_counts(Q, pa2)) <= limit && oracle::total(pa2) <= limit)
        break;
      extra = 0;
      phi = poly::identity_family_map(A);
    }
    const auto cmp2 = poly::composition_comparison(Q, P, comp, phi.target);
    const auto lhs = poly::compose(cmp2, poly::extension_on_map(QP, phi));
    const auto rhs = poly::compose(poly::extension_on_map(Q, poly::extension_on_map(P, phi)), cmp);
    c.expect(lhs.map == rhs.map, "comparison is not natural in A");
  }
}

// ---------------------------------------------------------------------------
// distributivity

namespace oracle {

/// Number of morphisms (t, s) from `other` into `target`, counted per y'
/// as Σ_{r y = r' y'} Π_{q' x' = y'} #{x : q x = y, p x = p' x'}.
inline std::size_t pb_around_morphisms(const spn::PBAround &target, const spn::PBAround &other) {
  std::size_t total = 1;
  for (Index yp = 0; yp < other.r.dom.size; ++yp) {
    std::size_t sum = 0;
    for (Index y = 0; y < target.r.dom.size; ++y) {
      if (target.r(y) != other.r(yp))
        continue;
      std::size_t prod = 1;
      for (Index xp = 0; xp < other.q.dom.size; ++xp) {
        if (other.q(xp) != yp)
          continue;
        std::size_t n = 0;
        for (Index x = 0; x < target.q.dom.size; ++x)
          if (target.q(x) == y && target.p(x) == other.p(xp))
            ++n;
        prod *= n;
      }
      sum += prod;
    }
    total *= sum;
  }
  return total;
}

/// The same count by running over every map t : Y' -> Y with r∘t = r'.
inline std::size_t pb_around_morphisms_by_enumeration(const spn::PBAround &target, const spn::PBAround &other,
                                                      std::size_t budget, bool &done) {
  std::vector<std::size_t> bounds(other.r.dom.size, target.r.dom.size);
  std::size_t space = 1;
  for (auto b : bounds) {
    if (b != 0 && space > budget / b) {
      done = false;
      return 0;
    }
    space *= b;
  }
  done = true;
  std::size_t count = 0;
  for_each_tuple(bounds, [&](const std::vector<Index> &t) {
    for (Index yp = 0; yp < t.size(); ++yp)
      if (target.r(t[yp]) != other.r(yp))
        return;
    std::size_t ways = 1;
    for (Index xp = 0; xp < other.q.dom.size && ways; ++xp) {
      std::size_t n = 0;
      for (Index x = 0; x < target.q.dom.size; ++x)
        if (target.q(x) == t[other.q(xp)] && target.p(x) == other.p(xp))
          ++n;
      ways *= n;
    }
    count += ways;
  });
  return count;
}

} // namespace oracle

inline void distributivity_case(Case &c) {
  auto &r = c.rng;
  const FinSetObj A(r.between(0, 4)), B(r.between(1, 4));
  const FinSetObj Z(A.size == 0 ? 0 : r.between(0, 4));
  const auto f = gen::map(r, A, B);
  const auto g = gen::map(r, Z, A);
  c.instance = io::Json{{"f", io::encode(f)}, {"g", io::encode(g)}}.dump();
  const auto dist = spn::distributivity_pullback(f, g);
  c.expect(dist.is_pullback(), "distributivity square is not a pullback");
  for (int k = 0; k < 5; ++k) {
    const auto other = gen::pb_around(r, f, g, 3);
    c.expect(other.is_pullback(), "generated pullback around is not a pullback");
    const std::size_t n = oracle::pb_around_morphisms(dist, other);
    c.expect(n == 1, "exhaustive count found " + std::to_string(n) + " morphisms into the distributivity pullback");
    bool done = false;
    const std::size_t m = oracle::pb_around_morphisms_by_enumeration(dist, other, 50000, done);
    if (done)
      c.expect(m == 1, "enumeration over all maps found " + std::to_string(m) + " morphisms");
    c.expect(spn::count_pb_around_morphisms(dist, other) == 1, "library count differs from one");
    try {
      const FinSetMap t = spn::mediate_pb_around(dist, other);
      c.expect(compose(dist.r, t) == other.r, "mediator does not commute over B");
    } catch (const MediatorError &e) {
      c.expect(false, std::string("mediator search failed: ") + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// maps

namespace oracle {

/// Whether some span r : Y -> X with apex at most `max_apex` is right
/// adjoint to s, by trying every unit and counit.
inline bool has_right_adjoint(const spn::Span &s, std::size_t max_apex) {
  const FinSetObj &X = s.left_foot, &Y = s.right_foot;
  for (std::size_t n = 0; n <= max_apex; ++n) {
    bool found = false;
    for_each_map(n, Y, [&](const FinSetMap &rl) {
      if (found)
        return;
      for_each_map(n, X, [&](const FinSetMap &rr) {
        if (found)
          return;
        const spn::Span r(rl, rr);
        const spn::Span rs = spn::compose_spans(r, s), sr = spn::compose_spans(s, r);
        spn::for_each_cell(spn::identity_span(X), rs, [&](const spn::SpanCell &unit) {
          if (found)
            return;
          spn::for_each_cell(sr, spn::identity_span(Y), [&](const spn::SpanCell &counit) {
            if (!found && spn::triangles_hold(spn::Adjunction{s, r, unit, counit}))
              found = true;
          });
        });
      });
    });
    if (found)
      return true;
  }
  return false;
}

} // namespace oracle

/// Exhaustive over feet and apex of size at most 3; the adjoint search runs
/// where all sizes are at most 2.
inline Report maps_suite(std::uint64_t seed, std::size_t) {
  Report rep;
  rep.suite = "maps";
  rep.seed = seed;
  std::size_t index = 0;
  for (std::size_t x = 0; x <= 3; ++x)
    for (std::size_t y = 0; y <= 3; ++y)
      for (std::size_t n = 0; n <= 3; ++n)
        for_each_map(n, x, [&](const FinSetMap &left) {
          for_each_map(n, y, [&](const FinSetMap &right) {
            Case c(index++, 0);
            const spn::Span s(left, right);
            c.instance = io::encode(s).dump();
            try {
              const bool bij = is_bijective(left);
              const auto adj = spn::is_map(s);
              c.expect(adj.has_value() == bij, "is_map disagrees with bijectivity of the left leg");
              if (adj) {
                c.expect(spn::triangles_hold(*adj), "triangle identities fail");
                const auto f = compose(right, inverse(left));
                c.expect(spn::find_span_iso(s, spn::graph(f)).has_value(), "span is not isomorphic to a graph");
              }
              if (x <= 2 && y <= 2 && n <= 2)
                c.expect(oracle::has_right_adjoint(s, 2) == bij, "adjoint search disagrees with bijectivity");
            } catch (const std::exception &e) {
              c.failed = std::string("unexpected error: ") + e.what();
            }
            ++rep.cases;
            rep.checks += c.checks;
            if (!c.failed.empty())
              rep.failures.push_back({c.index, c.seed, c.failed, c.instance});
          });
        });
  return rep;
}

// ---------------------------------------------------------------------------
// rel-kleisli and rel-hk

inline void rel_kleisli_case(Case &c) {
  auto &r = c.rng;
  const FinSetObj X(r.between(0, 5)), C(r.between(0, 5)), D(r.between(0, 5));
  const auto P = gen::rel_polynomial(r, X, C);
  const auto Q = gen::rel_polynomial(r, C, D);
  c.instance = io::Json{{"Q", io::encode(Q)}, {"P", io::encode(P)}}.dump();
  const auto lhs = rel::to_partial_map(rel::compose_polyrel(Q, P));
  const auto rhs = rel::kleisli_compose(rel::to_partial_map(Q), rel::to_partial_map(P));
  c.expect(lhs == rhs, "partial map of Q∘P differs from the Kleisli composite");
  c.expect(rel::from_partial_map(rel::to_partial_map(P)) == P, "partial map roundtrip changes P");
}

inline void rel_hk_case(Case &c) {
  auto &r = c.rng;
  const FinSetObj K(r.between(0, 4)), X(r.between(0, 4)), C(r.between(0, 4)), D(r.between(0, 4));
  const auto P = gen::rel_polynomial(r, X, C);
  const auto Q = gen::rel_polynomial(r, C, D);
  const auto s = gen::relation(r, K, X, 2, 3);
  c.instance = io::Json{{"Q", io::encode(Q)}, {"P", io::encode(P)}, {"s", io::encode(s)}}.dump();
  const auto h = rel::hK_rel(K, P, s);
  c.expect(h == rel::hK_rel_via_rif(K, P, s), "comma formula differs from lifting then composing");
  c.expect(rel::hK_rel(K, Q, h) == rel::hK_rel(K, rel::compose_polyrel(Q, P), s), "H_K(Q∘P) differs from H_K(Q)H_K(P)");
  c.expect(rel::hK_rel(K, rel::identity_polyrel(X), s) == s, "H_K(identity) is not the identity");
  auto extra = gen::relation(r, K, X, 1, 3);
  std::vector<rel::Pair> both = s.pairs;
  both.insert(both.end(), extra.pairs.begin(), extra.pairs.end());
  const auto s2 = rel::Relation::normalized(K, X, both);
  c.expect(rel::leq(h, rel::hK_rel(K, P, s2)), "H_K(P) is not monotone");
}

// ---------------------------------------------------------------------------
// grothendieck, comprehensive, gfib

inline cat::Functor inverse_iso(const cat::Functor &f) {
  std::vector<Index> o(f.obj.size()), m(f.mor.size());
  for (Index i = 0; i < o.size(); ++i)
    o[f.obj[i]] = i;
  for (Index i = 0; i < m.size(); ++i)
    m[f.mor[i]] = i;
  return {f.cod, f.dom, std::move(o), std::move(m)};
}

inline void grothendieck_case(Case &c) {
  auto &r = c.rng;
  const auto C = gen::any_category(r, 4, 12);
  const auto P = gen::presheaf(r, C, 3);
  c.instance = io::encode(*C).dump();
  const auto el = cat::elements(P);
  c.expect(cat::is_discrete_fibration(el.projection), "elements projection is not a discrete fibration");
  c.expect(cat::is_er_fibration(el.projection, true) && cat::morphisms_determined_by_image(el.projection),
           "elements projection fails the fibration characterisation");
  c.expect(cat::find_presheaf_iso(cat::fibers(el.projection), P).has_value(), "fibres of elements(P) are not P");
  // a discrete fibration with shuffled labels
  const auto P2 = gen::presheaf(r, C, 3);
  const auto el2 = cat::elements(P2);
  const auto R = gen::relabel(r, el2.projection.dom);
  const auto p = cat::compose(el2.projection, inverse_iso(R));
  const auto back = cat::elements(cat::fibers(p));
  c.expect(cat::find_iso_over(back.projection, p).has_value(), "elements(fibres(p)) is not p");
}

inline cat::Functor point(const cat::CatPtr &c, Index x) {
  return {cat::terminal(), c, {x}, {c->id(x)}};
}

inline bool tables_bijective(const cat::Functor &j) {
  auto perm = [](const std::vector<Index> &t, std::size_t n) {
    if (t.size() != n)
      return false;
    std::vector<bool> seen(n, false);
    for (Index v : t) {
      if (v >= n || seen[v])
        return false;
      seen[v] = true;
    }
    return true;
  };
  return perm(j.obj, j.cod->objects()) && perm(j.mor, j.cod->morphisms());
}

inline void comprehensive_case(Case &c) {
  auto &r = c.rng;
  const auto A = gen::any_category(r, 3, 8);
  const auto B = gen::any_category(r, 3, 8);
  const auto g = gen::functor(r, A, B);
  c.instance = io::encode(g).dump();
  const auto cf = cat::comprehensive_factorization(g);
  c.expect(cat::compose(cf.s, cf.j) == g, "s∘j differs from g");
  c.expect(cat::is_discrete_fibration(cf.s), "s is not a discrete fibration");
  c.expect(cat::is_final(cf.j), "j is not final");
  for (Index d = 0; d < cf.j.cod->objects(); ++d) {
    const auto com = cat::comma(point(cf.j.cod, d), cf.j);
    std::size_t n = 0;
    cat::connected_components(*com.cat, &n);
    c.expect(n == 1, "comma category d/j has " + std::to_string(n) + " components");
  }
  const auto P = gen::presheaf(r, B, 2);
  const auto p = cat::elements(P).projection;
  const auto cf2 = cat::comprehensive_factorization(p);
  c.expect(tables_bijective(cf2.j), "j is not an isomorphism for a discrete fibration");
  c.expect(cat::find_iso_over(cf2.s, p).has_value(), "s is not p for a discrete fibration");
}

inline cat::Functor projection_left(const cat::CatPtr &a, const cat::CatPtr &b) {
  auto prod = cat::product(*a, *b);
  std::vector<Index> o(prod->objects()), m(prod->morphisms());
  for (Index i = 0; i < o.size(); ++i)
    o[i] = i / b->objects();
  for (Index i = 0; i < m.size(); ++i)
    m[i] = i / b->morphisms();
  return {prod, a, std::move(o), std::move(m)};
}

inline cat::Functor any_functor(Rng &r) {
  switch (r.below(6)) {
  case 0: {
    const auto C = gen::any_category(r, 3, 6);
    return cat::elements(gen::presheaf(r, C, 2)).projection;
  }
  case 1:
    return cat::to_terminal(gen::any_category(r, 3, 8));
  case 2: {
    const auto A = gen::any_category(r, 2, 4);
    const auto B = gen::any_category(r, 2, 3);
    return projection_left(A, B);
  }
  case 3: {
    const auto C = gen::any_category(r, 3, 8);
    return gen::relabel(r, C);
  }
  default: {
    const auto A = gen::any_category(r, 3, 8);
    const auto B = gen::any_category(r, 3, 8);
    return gen::functor(r, A, B);
  }
  }
}

inline void gfib_case(Case &c) {
  const auto p = any_functor(c.rng);
  c.instance = io::encode(p).dump();
  c.expect(cat::is_groupoid_fibration(p) == cat::gfib_via_cotensor(p),
           "direct definition and arrow-category criterion disagree");
}

// ---------------------------------------------------------------------------
// mod-hk

inline bool natural_bijection(const mod::Profunctor &from, const mod::Profunctor &to, const std::vector<Index> &map) {
  const auto a = mod::flatten(from), b = mod::flatten(to);
  if (a.set.size() != b.set.size())
    return false;
  std::vector<bool> seen(b.set.size(), false);
  for (Index v : map) {
    if (v >= seen.size() || seen[v])
      return false;
    seen[v] = true;
  }
  return detail::is_hom(a.set, b.set, map);
}

inline void mod_hk_case(Case &c) {
  auto &r = c.rng;
  const auto K = gen::any_category(r, 2, 4);
  const auto X = gen::any_category(r, 3, 8);
  const auto Y = gen::any_category(r, 3, 8);
  const auto Z = gen::any_category(r, 3, 8);
  const auto P = gen::mod_polynomial(r, X, Y, 3);
  const auto Q = gen::mod_polynomial(r, Y, Z, 3);
  const auto u = gen::profunctor(r, K, X, 3, 3);
  c.instance = io::Json{{"Q", io::encode(Q)}, {"P", io::encode(P)}, {"u", io::encode(u)}}.dump();
  const auto qp = mod::compose_polymod_detailed(Q, P);
  c.expect(mod::isomorphic(mod::prof_compose(mod::graph_module(P.p), qp.n),
                           mod::prof_compose(Q.m, mod::graph_module(qp.Y.projection))),
           "square of the composite does not commute up to isomorphism");
  const auto hp = mod::hK_mod(K, P, u);
  const auto lhs = mod::hK_mod(K, qp.poly, u);
  const auto rhs = mod::hK_mod(K, Q, hp);
  c.expect(mod::isomorphic(lhs, rhs), "H_K(Q∘P) is not isomorphic to H_K(Q)H_K(P)");
  auto both_paths = [&](const mod::ModPolynomial &poly, const mod::Profunctor &arg, const mod::Profunctor &a,
                        const char *label) {
    const auto fib = mod::hK_mod_fiberwise(K, poly, arg);
    const auto cmp = mod::hK_comparison(K, poly, arg, fib);
    c.expect(natural_bijection(fib.prof, a, cmp), std::string("the two H_K paths disagree on ") + label);
  };
  both_paths(P, u, hp, "P");
  both_paths(Q, hp, rhs, "Q");
  both_paths(qp.poly, u, lhs, "Q∘P");
}

// ---------------------------------------------------------------------------
// discrete-reduction

/// The matrix embedding of a polynomial between discrete categories.
inline poly::Polynomial to_set_polynomial(const mod::ModPolynomial &P) {
  const std::size_t nx = P.X->objects(), ns = P.S->objects();
  std::vector<Index> m1, m2;
  for (Index s = 0; s < ns; ++s)
    for (Index x = 0; x < nx; ++x)
      for (Index v = 0; v < P.m.size(x, s); ++v) {
        m1.push_back(x);
        m2.push_back(s);
      }
  const FinSetObj E(m1.size());
  return {FinSetMap(E, nx, std::move(m1)), FinSetMap(E, ns, std::move(m2)), FinSetMap(ns, P.Y->objects(), P.p.obj)};
}

/// m : A -> B between discrete categories as a span A <- Σ m -> B.
inline spn::Span to_span(const mod::Profunctor &m) {
  std::vector<Index> l, rr;
  for (Index b = 0; b < m.nb(); ++b)
    for (Index a = 0; a < m.na(); ++a)
      for (Index v = 0; v < m.size(b, a); ++v) {
        l.push_back(a);
        rr.push_back(b);
      }
  const FinSetObj apex(l.size());
  return {FinSetMap(apex, m.na(), std::move(l)), FinSetMap(apex, m.nb(), std::move(rr))};
}

inline void discrete_reduction_case(Case &c) {
  auto &r = c.rng;
  const auto X = cat::discrete(r.between(1, 3));
  const auto Y = cat::discrete(r.between(1, 3));
  const auto Z = cat::discrete(r.between(1, 3));
  const auto K = cat::discrete(r.between(1, 2));
  const auto P = gen::discrete_mod_polynomial(r, X, Y, 3, 2);
  const auto Q = gen::discrete_mod_polynomial(r, Y, Z, 3, 2);
  const auto u = gen::discrete_profunctor(r, K, X, 2);
  c.instance = io::Json{{"Q", io::encode(Q)}, {"P", io::encode(P)}, {"u", io::encode(u)}}.dump();
  const auto sp = to_set_polynomial(P), sq = to_set_polynomial(Q);
  const auto qp = mod::compose_polymod(Q, P);
  c.expect(qp.S->morphisms() == qp.S->objects(), "composite over discrete categories is not discrete");
  c.expect(poly::find_poly_iso(to_set_polynomial(qp), poly::compose_poly(sq, sp)).has_value(),
           "composite differs from the finite-set composite");
  const auto h = mod::hK_mod(K, P, u);
  c.expect(spn::find_span_iso(to_span(h), poly::hK_span(K->objects(), sp, to_span(u))).has_value(),
           "H_K differs from the span computation");
  const auto hq = mod::hK_mod(K, qp, u);
  c.expect(spn::find_span_iso(to_span(hq), poly::hK_span(K->objects(), poly::compose_poly(sq, sp), to_span(u)))
               .has_value(),
           "H_K of the composite differs from the span computation");
}

// ---------------------------------------------------------------------------
// determinism

inline void determinism_case(Case &c) {
  const std::uint64_t s = c.rng.next();
  for (const auto &kind : io::kinds()) {
    const auto d1 = gen::random_document(kind, s);
    const auto d2 = gen::random_document(kind, s);
    const std::string t1 = io::serialize(d1);
    c.expect(t1 == io::serialize(d2), kind + ": same seed gave different bytes");
    const auto parsed = io::parse(t1);
    c.expect(parsed == d1, kind + ": parse after serialize changes the document");
    c.expect(io::serialize(parsed) == t1, kind + ": serialize after parse changes the text");
  }
}

// ---------------------------------------------------------------------------
// registry

struct Suite {
  const char *name;
  std::size_t default_count;
  const char *description;
  std::function<Report(std::uint64_t, std::size_t)> run;
};

inline const std::vector<Suite> &suites() {
  auto cases = [](const char *name, void (*body)(Case &)) {
    return [name, body](std::uint64_t seed, std::size_t count) { return run_cases(name, seed, count, body); };
  };
  static const std::vector<Suite> all{
      {"extension", 200, "extension of Q∘P against Q after P", cases("extension", extension_case)},
      {"distributivity", 200, "distributivity pullback is terminal", cases("distributivity", distributivity_case)},
      {"maps", 0, "spans with a right adjoint are the graphs", maps_suite},
      {"rel-kleisli", 300, "relation polynomials as partial maps into powersets",
       cases("rel-kleisli", rel_kleisli_case)},
      {"grothendieck", 100, "elements and fibres are inverse", cases("grothendieck", grothendieck_case)},
      {"comprehensive", 100, "comprehensive factorization", cases("comprehensive", comprehensive_case)},
      {"gfib", 200, "groupoid fibration criteria agree", cases("gfib", gfib_case)},
      {"mod-hk", 100, "H_K on profunctor polynomials", cases("mod-hk", mod_hk_case)},
      {"rel-hk", 100, "H_K on relation polynomials", cases("rel-hk", rel_hk_case)},
      {"discrete-reduction", 50, "discrete categories reduce to finite sets",
       cases("discrete-reduction", discrete_reduction_case)},
      {"determinism", 20, "seeded documents are byte-stable", cases("determinism", determinism_case)},
  };
  return all;
}

inline const Suite *find_suite(const std::string &name) {
  for (const auto &s : suites())
    if (name == s.name)
      return &s;
  return nullptr;
}

} // namespace polyspan::check
