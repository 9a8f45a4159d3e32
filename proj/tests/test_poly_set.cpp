#include "catch_amalgamated.hpp"

#include <fstream>
#include <sstream>

#include "polyspan/io.hpp"
#include "polyspan/random.hpp"

using namespace polyspan;
using namespace polyspan::poly;

namespace {

Polynomial make(std::size_t x, std::size_t e, std::size_t s, std::size_t y, std::vector<Index> m1,
                std::vector<Index> m2, std::vector<Index> p) {
  return {FinSetMap(e, x, std::move(m1)), FinSetMap(e, s, std::move(m2)), FinSetMap(s, y, std::move(p))};
}

/// Fibre sizes of P(A) by direct enumeration of (s, σ).
std::vector<std::size_t> fibres_by_enumeration(const Polynomial &P, const IndexedFamily &A) {
  std::vector<std::size_t> out(P.Y.size, 0);
  const auto af = fibers_of(A.proj);
  for (Index s = 0; s < P.S.size; ++s) {
    std::vector<std::size_t> bounds;
    for (Index e = 0; e < P.E.size; ++e)
      if (P.m2(e) == s)
        bounds.push_back(af[P.m1(e)].size());
    for_each_tuple(bounds, [&](const std::vector<Index> &) { ++out[P.p(s)]; });
  }
  return out;
}

std::vector<std::size_t> sizes(const IndexedFamily &A) {
  std::vector<std::size_t> out(A.base.size, 0);
  for (Index v : A.proj.table)
    ++out[v];
  return out;
}

std::string slurp(const std::string &name) {
  std::ifstream in(std::string(POLYSPAN_GOLDEN_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// P' with the same S and p, keeping only the directions in `keep`, and the
/// inclusion as a (generally non-strong) morphism P => P'.
PolyMorphism restriction(const Polynomial &P, const std::vector<Index> &keep) {
  std::vector<Index> m1, m2;
  for (Index e : keep) {
    m1.push_back(P.m1(e));
    m2.push_back(P.m2(e));
  }
  const Polynomial T(FinSetMap(keep.size(), P.X, m1), FinSetMap(keep.size(), P.S, m2), P.p);
  return make_polymorph(P, T, identity_map(P.S), [&](Index, Index e2) { return keep[e2]; });
}

/// A relabelled copy of P and the strong morphism onto it.
PolyMorphism relabelling(Rng &rng, const Polynomial &P) {
  const auto b = gen::bijection(rng, P.S);
  const auto g = gen::bijection(rng, P.E);
  const auto gi = inverse(g);
  std::vector<Index> m1(P.E.size), m2(P.E.size), p(P.S.size);
  for (Index e = 0; e < P.E.size; ++e) {
    m1[g(e)] = P.m1(e);
    m2[g(e)] = b(P.m2(e));
  }
  for (Index s = 0; s < P.S.size; ++s)
    p[b(s)] = P.p(s);
  const Polynomial T(FinSetMap(P.E, P.X, m1), FinSetMap(P.E, P.S, m2), FinSetMap(P.S, P.Y, p));
  return make_polymorph(P, T, b, [&](Index, Index e2) { return gi(e2); });
}

PolyMorphism random_morphism(Rng &rng, const Polynomial &P) {
  if (rng.chance(1, 2))
    return relabelling(rng, P);
  std::vector<Index> keep;
  for (Index e = 0; e < P.E.size; ++e)
    if (rng.chance(2, 3))
      keep.push_back(e);
  return restriction(P, keep);
}

} // namespace

TEST_CASE("extension of a square monomial") {
  const auto P = make(1, 2, 1, 1, {0, 0}, {0, 0}, {0});
  const IndexedFamily A(terminal_map(3));
  const auto ext = extension_eval(P, A);
  CHECK(ext.family.total.size == 9);
  CHECK(ext.sigma.front() == std::vector<Index>{0, 0});
  CHECK(ext.sigma.back() == std::vector<Index>{2, 2});
}

TEST_CASE("empty sums and empty products") {
  // S over y = 1 is empty; s = 1 has no directions
  const auto P = make(1, 1, 2, 2, {0}, {0}, {0, 0});
  const IndexedFamily A(terminal_map(2));
  const auto sz = sizes(extension_eval(P, A).family);
  CHECK(sz == std::vector<std::size_t>{3, 0});
  CHECK(sz == fibres_by_enumeration(P, A));
}

TEST_CASE("extension with a mismatched base is rejected") {
  const auto P = make(2, 0, 0, 1, {}, {}, {});
  CHECK_THROWS_AS(extension_eval(P, IndexedFamily(terminal_map(3))), BoundaryMismatch);
}

TEST_CASE("identity polynomial extends to the identity") {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const FinSetObj X(rng.between(0, 3));
    const auto A = gen::family(rng, X, 5);
    CHECK(sizes(extension_eval(identity_poly(X), A).family) == sizes(A));
  }
  CHECK(extension_eval(identity_poly(0), IndexedFamily(FinSetMap(0, 0, {}))).family.total.size == 0);
}

TEST_CASE("extension matches the enumeration oracle") {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const FinSetObj X(rng.between(1, 3)), Y(rng.between(1, 3));
    const auto P = gen::polynomial(rng, X, Y, 4, 4);
    const auto A = gen::family(rng, X, 4);
    REQUIRE(sizes(extension_eval(P, A).family) == fibres_by_enumeration(P, A));
  }
}

TEST_CASE("extension acts functorially on family maps") {
  Rng rng(37);
  for (int i = 0; i < 100; ++i) {
    const FinSetObj X(rng.between(1, 3)), Y(rng.between(1, 3));
    const auto P = gen::polynomial(rng, X, Y, 3, 3);
    const auto A = gen::family(rng, X, 4);
    const auto id = extension_on_map(P, identity_family_map(A));
    REQUIRE(id.map == identity_map(id.source.total));
    const auto f = gen::family_map(rng, A, 1);
    const auto g = gen::family_map(rng, f.target, 1);
    REQUIRE(extension_on_map(P, compose(g, f)).map ==
            polyspan::compose(extension_on_map(P, g).map, extension_on_map(P, f).map));
  }
}

TEST_CASE("extension of a constant-collapse map") {
  const auto P = make(1, 2, 1, 1, {0, 0}, {0, 0}, {0});
  const IndexedFamily A(terminal_map(2)), B(terminal_map(1));
  const FamilyMap collapse(A, B, constant_map(2, 1, 0));
  const auto image = extension_on_map(P, collapse);
  CHECK(image.map.table == std::vector<Index>{0, 0, 0, 0});
}

TEST_CASE("composing two monomials multiplies exponents") {
  const auto P = make(1, 2, 1, 1, {0, 0}, {0, 0}, {0});
  const auto Q = make(1, 3, 1, 1, {0, 0, 0}, {0, 0, 0}, {0});
  const auto QP = compose_poly(Q, P);
  CHECK(QP.E.size == 6);
  CHECK(QP.S.size == 1);
  const auto A6 = make(1, 6, 1, 1, {0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0}, {0});
  CHECK(find_poly_iso(QP, A6).has_value());
  CHECK(sizes(extension_eval(QP, IndexedFamily(terminal_map(2))).family) == std::vector<std::size_t>{64});
  CHECK(find_poly_iso(io::decode_polynomial(io::parse(slurp("a6.json")).payload), A6).has_value());
}

TEST_CASE("composing two affine polynomials") {
  const auto P = make(1, 1, 2, 1, {0}, {0}, {0, 0});
  const auto Q = make(1, 1, 2, 1, {0}, {0}, {0, 0});
  const auto QP = compose_poly(Q, P);
  CHECK(QP.S.size == 3);
  CHECK(QP.E.size == 1);
  const auto A2 = make(1, 1, 3, 1, {0}, {0}, {0, 0, 0});
  CHECK(find_poly_iso(QP, A2).has_value());
  CHECK(find_poly_iso(io::decode_polynomial(io::parse(slurp("a_plus_2.json")).payload), A2).has_value());
}

TEST_CASE("composition with mismatched boundaries is rejected") {
  CHECK_THROWS_AS(compose_poly(identity_poly(2), identity_poly(3)), BoundaryMismatch);
}

TEST_CASE("identity polynomials are units") {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    const FinSetObj X(rng.between(0, 3)), Y(rng.between(1, 3));
    const auto P = gen::polynomial(rng, X, Y, 3, 3);
    REQUIRE(find_poly_iso(compose_poly(identity_poly(Y), P), P).has_value());
    REQUIRE(find_poly_iso(compose_poly(P, identity_poly(X)), P).has_value());
  }
}

TEST_CASE("composite extensions agree with iterated extensions") {
  Rng rng(43);
  for (int i = 0; i < 200; ++i) {
    const FinSetObj X(rng.between(1, 3)), Y(rng.between(1, 3)), Z(rng.between(1, 3));
    const auto P = gen::polynomial(rng, X, Y, 3, 3);
    const auto Q = gen::polynomial(rng, Y, Z, 3, 3);
    const auto c = compose_poly_detailed(Q, P);
    for (int k = 0; k < 3; ++k) {
      const auto A = gen::family(rng, X, 3);
      const auto PA = extension_eval(P, A).family;
      REQUIRE(sizes(extension_eval(c.poly, A).family) == fibres_by_enumeration(Q, PA));
      const auto cmp = composition_comparison(Q, P, c, A);
      REQUIRE(is_bijective(cmp.map));
      const auto f = gen::family_map(rng, A, 1);
      const auto cmp2 = composition_comparison(Q, P, c, f.target);
      const auto lhs = polyspan::compose(cmp2.map, extension_on_map(c.poly, f).map);
      const auto rhs = polyspan::compose(extension_on_map(Q, extension_on_map(P, f)).map, cmp.map);
      REQUIRE(lhs == rhs);
    }
  }
}

TEST_CASE("composition is associative on extensions") {
  Rng rng(47);
  for (int i = 0; i < 50; ++i) {
    const FinSetObj W(rng.between(1, 2)), X(rng.between(1, 2)), Y(rng.between(1, 2)), Z(rng.between(1, 2));
    const auto P = gen::polynomial(rng, W, X, 2, 2);
    const auto Q = gen::polynomial(rng, X, Y, 2, 2);
    const auto R = gen::polynomial(rng, Y, Z, 2, 2);
    const auto l = compose_poly(compose_poly(R, Q), P);
    const auto r = compose_poly(R, compose_poly(Q, P));
    const auto A = gen::family(rng, W, 3);
    REQUIRE(sizes(extension_eval(l, A).family) == sizes(extension_eval(r, A).family));
    REQUIRE(find_poly_iso(l, r).has_value());
  }
}

TEST_CASE("H_K at a point is the extension") {
  Rng rng(53);
  for (int i = 0; i < 100; ++i) {
    const FinSetObj X(rng.between(1, 3)), Y(rng.between(1, 3));
    const auto P = gen::polynomial(rng, X, Y, 3, 3);
    const auto A = gen::family(rng, X, 4);
    const auto h = hK_span(1, P, family_as_span(A));
    std::vector<std::size_t> fib(Y.size, 0);
    for (Index v : h.right_leg.table)
      ++fib[v];
    REQUIRE(fib == sizes(extension_eval(P, A).family));
  }
}

TEST_CASE("H_K examples") {
  const auto u = spn::identity_span(2);
  CHECK(spn::find_span_iso(hK_span(2, identity_poly(2), u), u).has_value());
  const auto P = make(1, 2, 1, 1, {0, 0}, {0, 0}, {0});
  const spn::Span w(FinSetMap(3, 2, {0, 0, 1}), terminal_map(3));
  // 2 choices squared over k = 0, one over k = 1
  CHECK(hK_span(2, P, w).apex.size == 5);
}

TEST_CASE("H_K respects composition") {
  Rng rng(59);
  for (int i = 0; i < 100; ++i) {
    const FinSetObj K(rng.between(1, 2)), X(rng.between(1, 2)), Y(rng.between(1, 2)), Z(rng.between(1, 2));
    const auto P = gen::polynomial(rng, X, Y, 3, 2);
    const auto Q = gen::polynomial(rng, Y, Z, 3, 2);
    const auto u = gen::span(rng, K, X, 3);
    const auto lhs = hK_span(K, compose_poly(Q, P), u);
    const auto rhs = hK_span(K, Q, hK_span(K, P, u));
    REQUIRE(spn::find_span_iso(lhs, rhs).has_value());
  }
}

TEST_CASE("identity morphisms compose to the identity") {
  const auto P = make(2, 3, 2, 1, {0, 1, 1}, {0, 0, 1}, {0, 0});
  const auto id = identity_polymorph(P);
  const auto idid = vcompose_polymorph(id, id);
  CHECK(is_strong(idid));
  CHECK(are_isomorphic_polymorph(idid, id));
  CHECK(idid.phi() == identity_map(2));
  CHECK(polymorph_component(id, IndexedFamily(FinSetMap(3, 2, {0, 1, 1}))).map == identity_map(4));
}

TEST_CASE("strong morphisms compose to strong ones") {
  Rng rng(61);
  for (int i = 0; i < 50; ++i) {
    const auto P = gen::polynomial(rng, 2, 2, 4, 3);
    const auto f = relabelling(rng, P);
    const auto g = relabelling(rng, f.target);
    REQUIRE(is_strong(f));
    REQUIRE(is_strong(vcompose_polymorph(g, f)));
  }
}

TEST_CASE("restricting directions gives a non-strong morphism") {
  const auto P = make(1, 2, 1, 1, {0, 0}, {0, 0}, {0});
  const auto f = restriction(P, {1});
  CHECK_FALSE(is_strong(f));
  // (a, b) goes to b
  const auto c = polymorph_component(f, IndexedFamily(terminal_map(2)));
  CHECK(c.map.table == std::vector<Index>{0, 1, 0, 1});
}

TEST_CASE("vertical composition matches components") {
  Rng rng(67);
  for (int i = 0; i < 100; ++i) {
    const auto P = gen::polynomial(rng, 2, 2, 3, 3);
    const auto f = random_morphism(rng, P);
    const auto g = random_morphism(rng, f.target);
    const auto gf = vcompose_polymorph(g, f);
    REQUIRE(is_bijective(gf.h.left_leg));
    const auto A = gen::family(rng, 2, 3);
    REQUIRE(polymorph_component(gf, A).map ==
            polyspan::compose(polymorph_component(g, A).map, polymorph_component(f, A).map));
  }
}

TEST_CASE("isomorphism of morphisms") {
  Rng rng(71);
  const auto P = make(1, 2, 1, 1, {0, 0}, {0, 0}, {0});
  const auto f = relabelling(rng, P);
  CHECK(are_isomorphic_polymorph(f, f));
  const auto swap = make_polymorph(P, P, identity_map(1), [](Index, Index e) { return 1 - e; });
  CHECK_FALSE(are_isomorphic_polymorph(swap, identity_polymorph(P)));
  // swapping two parallel summands is not isomorphic to the identity
  const auto Q = make(1, 0, 2, 1, {}, {}, {0, 0});
  const auto idq = identity_polymorph(Q);
  const auto flip = make_polymorph(Q, Q, FinSetMap(2, 2, {1, 0}), [](Index, Index e) { return e; });
  CHECK_FALSE(are_isomorphic_polymorph(idq, flip));
}

TEST_CASE("horizontal composition is natural on extensions") {
  Rng rng(73);
  for (int i = 0; i < 100; ++i) {
    const FinSetObj X(rng.between(1, 2)), Y(rng.between(1, 2)), Z(rng.between(1, 2));
    const auto P = gen::polynomial(rng, X, Y, 3, 2);
    const auto Q = gen::polynomial(rng, Y, Z, 3, 2);
    const auto h = random_morphism(rng, P);
    const auto k = random_morphism(rng, Q);
    const auto kh = hcompose_polymorph(k, h);
    REQUIRE(is_bijective(kh.h.left_leg));
    if (is_strong(h) && is_strong(k))
      REQUIRE(is_strong(kh));
    const auto A = gen::family(rng, X, 3);
    const auto src = compose_poly_detailed(Q, P);
    const auto tgt = compose_poly_detailed(k.target, h.target);
    const auto hA = polymorph_component(h, A);
    const auto lhs = polyspan::compose(composition_comparison(k.target, h.target, tgt, A).map,
                                       polymorph_component(kh, A).map);
    const auto rhs = polyspan::compose(polymorph_component(k, hA.target).map,
                                       polyspan::compose(extension_on_map(Q, hA).map,
                                                         composition_comparison(Q, P, src, A).map));
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("horizontal composite of identities is an identity") {
  Rng rng(79);
  for (int i = 0; i < 30; ++i) {
    const auto P = gen::polynomial(rng, 2, 2, 3, 2);
    const auto Q = gen::polynomial(rng, 2, 1, 3, 2);
    const auto kh = hcompose_polymorph(identity_polymorph(Q), identity_polymorph(P));
    REQUIRE(are_isomorphic_polymorph(kh, identity_polymorph(compose_poly(Q, P))));
  }
}
