#include "catch_amalgamated.hpp"

#include "polyspan/check.hpp"
#include "polyspan/random.hpp"

using namespace polyspan;
using namespace polyspan::mod;
using cat::CatPtr;
using cat::Functor;

namespace {

std::size_t power(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--)
    r *= b;
  return r;
}

/// Cells that are bijections on every component.
std::vector<std::vector<Index>> isos(const Profunctor &m, const Profunctor &n) {
  std::vector<std::vector<Index>> out;
  for (auto &c : cells(m, n)) {
    auto s = c;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) == s.end() && c.size() == flatten(n).set.size())
      out.push_back(std::move(c));
  }
  return out;
}

std::vector<Index> invert(const std::vector<Index> &f) {
  std::vector<Index> g(f.size());
  for (Index i = 0; i < f.size(); ++i)
    g[f[i]] = i;
  return g;
}

} // namespace

TEST_CASE("hom modules are units for composition") {
  Rng rng(1);
  for (int i = 0; i < 40; ++i) {
    const auto A = gen::any_category(rng, 3, 6);
    const auto B = gen::any_category(rng, 3, 6);
    const auto m = gen::profunctor(rng, A, B, 2);
    REQUIRE(isomorphic(prof_compose(m, hom_module(A)), m));
    REQUIRE(isomorphic(prof_compose(hom_module(B), m), m));
  }
}

TEST_CASE("composition over discrete categories is a matrix product") {
  Rng rng(2);
  for (int i = 0; i < 60; ++i) {
    const auto A = cat::discrete(rng.between(0, 3));
    const auto B = cat::discrete(rng.between(0, 3));
    const auto C = cat::discrete(rng.between(0, 3));
    const auto m = gen::discrete_profunctor(rng, A, B, 3);
    const auto n = gen::discrete_profunctor(rng, B, C, 3);
    const auto nm = prof_compose(n, m);
    for (Index c = 0; c < C->objects(); ++c)
      for (Index a = 0; a < A->objects(); ++a) {
        std::size_t expect = 0;
        for (Index b = 0; b < B->objects(); ++b)
          expect += m.size(b, a) * n.size(c, b);
        REQUIRE(nm.size(c, a) == expect);
      }
  }
}

TEST_CASE("an arrow in the middle glues elements") {
  const auto two = cat::ordinal(2);
  const auto m = from_presheaf(cat::representable(two, 1));
  const auto n = graph_module(cat::to_terminal(two));
  CHECK(m.total() == 2);
  CHECK(n.total() == 2);
  CHECK(prof_compose(n, m).total() == 1);
}

TEST_CASE("graph modules") {
  const auto C = cat::ordinal(3);
  CHECK(graph_module(cat::identity_functor(C)) == hom_module(C));
  CHECK(hom_module(C).total() == 6);
  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    const auto A = gen::any_category(rng, 3, 5);
    const auto B = gen::any_category(rng, 3, 5);
    const auto D = gen::any_category(rng, 3, 5);
    const auto f = gen::functor(rng, A, B);
    const auto g = gen::functor(rng, B, D);
    REQUIRE(isomorphic(prof_compose(graph_module(g), graph_module(f)), graph_module(cat::compose(g, f))));
  }
}

TEST_CASE("right lifting through the hom module") {
  Rng rng(4);
  for (int i = 0; i < 30; ++i) {
    const auto K = gen::any_category(rng, 2, 4);
    const auto Y = gen::any_category(rng, 3, 6);
    const auto u = gen::profunctor(rng, K, Y, 2);
    REQUIRE(isomorphic(rif_mod(hom_module(Y), u), u));
  }
}

TEST_CASE("right lifting over discrete categories counts maps") {
  Rng rng(5);
  for (int i = 0; i < 60; ++i) {
    const auto K = cat::discrete(rng.between(0, 2));
    const auto S = cat::discrete(rng.between(0, 3));
    const auto Y = cat::discrete(rng.between(0, 3));
    const auto n = gen::discrete_profunctor(rng, S, Y, 2);
    const auto u = gen::discrete_profunctor(rng, K, Y, 3);
    const auto r = rif_mod(n, u);
    for (Index s = 0; s < S->objects(); ++s)
      for (Index k = 0; k < K->objects(); ++k) {
        std::size_t expect = 1;
        for (Index y = 0; y < Y->objects(); ++y)
          expect *= power(u.size(y, k), n.size(y, s));
        REQUIRE(r.size(s, k) == expect);
      }
  }
}

TEST_CASE("right lifting along an empty column is a point") {
  const auto S = cat::terminal();
  const auto Y = cat::ordinal(2);
  const auto n = from_presheaf(cat::constant_presheaf(Y, 0));
  const auto u = from_presheaf(cat::representable(Y, 0));
  CHECK(rif_mod(n, u).size(0, 0) == 1);
  CHECK(rif_mod(from_presheaf(cat::constant_presheaf(Y, 1)), u).size(0, 0) == 0);
}

TEST_CASE("right lifting has the universal property") {
  Rng rng(6);
  std::size_t nonempty = 0;
  for (int i = 0; i < 40; ++i) {
    const auto K = gen::any_category(rng, 2, 3);
    const auto S = gen::any_category(rng, 2, 3);
    const auto Y = gen::any_category(rng, 2, 4);
    const auto n = gen::profunctor(rng, S, Y, 2);
    const auto u = gen::profunctor(rng, K, Y, 2);
    const auto v = gen::profunctor(rng, K, S, 2);
    const auto rif = rif_mod_detailed(n, u);
    const auto lhs = cells(prof_compose(n, v), u).size();
    REQUIRE(lhs == cells(v, rif.prof).size());
    nonempty += lhs > 0;
    const auto nr = prof_compose_detailed(n, rif.prof);
    const auto counits = cells(nr.prof, u);
    REQUIRE(std::find(counits.begin(), counits.end(), rif_counit(n, u, rif, nr)) != counits.end());
  }
  CHECK(nonempty > 10);
}

TEST_CASE("tabulation examples") {
  const auto C = cat::ordinal(3);
  const auto slice = tabulate_mod(cat::representable(C, 2));
  CHECK(slice.projection.dom->objects() == 3);
  CHECK(slice.projection.dom->morphisms() == 6);
  const auto below = tabulate_mod(cat::representable(C, 0));
  CHECK(below.projection.dom->objects() == 1);
  const auto whole = tabulate_mod(cat::constant_presheaf(C, 1));
  CHECK(whole.projection.dom->objects() == 3);
  CHECK(whole.projection.dom->morphisms() == 6);
  CHECK(tabulate_mod(cat::constant_presheaf(C, 0)).projection.dom->objects() == 0);
}

TEST_CASE("fibres of a tabulation recover the presheaf") {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto C = gen::any_category(rng, 3, 6);
    const auto P = gen::presheaf(rng, C, 3);
    const auto el = tabulate_mod(P);
    REQUIRE(cat::find_presheaf_iso(fiber_presheaf(el.projection), P).has_value());
    REQUIRE(isomorphic(fiber_presheaf_via_coend(el.projection), from_presheaf(fiber_presheaf(el.projection))));
  }
}

TEST_CASE("the square of a composite commutes through fiberwise forms") {
  Rng rng(8);
  std::size_t transported = 0;
  for (int i = 0; i < 25; ++i) {
    const auto X = gen::any_category(rng, 2, 4);
    const auto Y = gen::any_category(rng, 2, 4);
    const auto Z = gen::any_category(rng, 2, 4);
    const auto P = gen::mod_polynomial(rng, X, Y, 2);
    const auto Q = gen::mod_polynomial(rng, Y, Z, 2);
    const auto qp = compose_polymod_detailed(Q, P);
    const auto &r = qp.Y.projection;

    const auto sum = fiberwise_sum(P.p, qp.n);
    const auto co_l = prof_compose_detailed(graph_module(P.p), qp.n);
    const auto L = fiberwise_to_coend_left(P.p, qp.n, sum, co_l);
    REQUIRE(check::natural_bijection(sum, co_l.prof, L));

    const auto restricted = restrict_along(Q.m, r);
    const auto co_r = prof_compose_detailed(Q.m, graph_module(r));
    const auto R = fiberwise_to_coend_right(r, Q.m, restricted, co_r);
    REQUIRE(check::natural_bijection(restricted, co_r.prof, R));

    const auto phis = isos(sum, restricted);
    const auto thetas = isos(co_l.prof, co_r.prof);
    REQUIRE(!phis.empty());
    REQUIRE(phis.size() == thetas.size());
    const auto Linv = invert(L);
    std::set<std::vector<Index>> images;
    for (const auto &phi : phis) {
      std::vector<Index> theta(Linv.size());
      for (Index e = 0; e < Linv.size(); ++e)
        theta[e] = R[phi[Linv[e]]];
      REQUIRE(std::find(thetas.begin(), thetas.end(), theta) != thetas.end());
      images.insert(theta);
      ++transported;
    }
    REQUIRE(images.size() == thetas.size());
  }
  CHECK(transported > 0);
}

TEST_CASE("identity polynomials act trivially") {
  Rng rng(9);
  for (int i = 0; i < 25; ++i) {
    const auto K = gen::any_category(rng, 2, 3);
    const auto X = gen::any_category(rng, 3, 5);
    const auto Y = gen::any_category(rng, 3, 5);
    const auto u = gen::profunctor(rng, K, X, 2);
    REQUIRE(isomorphic(hK_mod(K, identity_polymod(X), u), u));
    const auto P = gen::mod_polynomial(rng, X, Y, 2);
    const auto hp = hK_mod(K, P, u);
    REQUIRE(isomorphic(hK_mod(K, compose_polymod(identity_polymod(Y), P), u), hp));
    REQUIRE(isomorphic(hK_mod(K, compose_polymod(P, identity_polymod(X)), u), hp));
  }
}

TEST_CASE("discrete categories reduce to finite sets") {
  Rng rng(10);
  for (int i = 0; i < 60; ++i) {
    const auto X = cat::discrete(rng.between(1, 3));
    const auto Y = cat::discrete(rng.between(1, 3));
    const auto Z = cat::discrete(rng.between(1, 3));
    const auto K = cat::discrete(rng.between(1, 2));
    const auto P = gen::discrete_mod_polynomial(rng, X, Y, 3, 2);
    const auto Q = gen::discrete_mod_polynomial(rng, Y, Z, 3, 2);
    const auto u = gen::discrete_profunctor(rng, K, X, 2);
    const auto sp = check::to_set_polynomial(P), sq = check::to_set_polynomial(Q);
    const auto qp = compose_polymod(Q, P);
    REQUIRE(qp.S->morphisms() == qp.S->objects());
    REQUIRE(poly::find_poly_iso(check::to_set_polynomial(qp), poly::compose_poly(sq, sp)).has_value());
    REQUIRE(spn::find_span_iso(check::to_span(hK_mod(K, P, u)), poly::hK_span(K->objects(), sp, check::to_span(u)))
                .has_value());
  }
}

TEST_CASE("the two H_K paths agree and compose") {
  Rng rng(11);
  for (int i = 0; i < 30; ++i) {
    const auto K = gen::any_category(rng, 2, 4);
    const auto X = gen::any_category(rng, 3, 6);
    const auto Y = gen::any_category(rng, 3, 6);
    const auto Z = gen::any_category(rng, 3, 6);
    const auto P = gen::mod_polynomial(rng, X, Y, 2);
    const auto Q = gen::mod_polynomial(rng, Y, Z, 2);
    const auto u = gen::profunctor(rng, K, X, 2, 3);
    const auto hp = hK_mod(K, P, u);
    const auto fib = hK_mod_fiberwise(K, P, u);
    REQUIRE(check::natural_bijection(fib.prof, hp, hK_comparison(K, P, u, fib)));
    REQUIRE(isomorphic(hK_mod(K, compose_polymod(Q, P), u), hK_mod(K, Q, hp)));
  }
}

TEST_CASE("H_K of the identity polynomial on a point") {
  const auto one = cat::terminal();
  const auto u = from_presheaf(cat::constant_presheaf(one, 3));
  CHECK(hK_mod(one, identity_polymod(one), u).total() == 3);
}

TEST_CASE("cotensor with the arrow examples") {
  const auto pt = cotensor2_mod(cat::terminal());
  CHECK(pt.cat->objects() == 2);
  CHECK(pt.cat->morphisms() == 3);
  CHECK(*pt.cat == *cat::opposite(*cat::ordinal(2)));
  const auto d = cotensor2_mod(cat::discrete(3));
  CHECK(d.cat->objects() == 6);
  CHECK(d.cat->morphisms() == 9);
  std::size_t components = 0;
  cat::connected_components(*d.cat, &components);
  CHECK(components == 3);
}

TEST_CASE("modules into the cotensor are cells") {
  Rng rng(12);
  for (int i = 0; i < 20; ++i) {
    const auto K = gen::any_category(rng, 2, 3);
    const auto A = gen::any_category(rng, 2, 4);
    const auto ct = cotensor2_mod(A);
    const auto w = gen::profunctor(rng, K, ct.cat, 2);
    const auto x = decompose_cotensor(ct, w);
    const auto between = cells(x.w0, x.w1);
    REQUIRE(std::find(between.begin(), between.end(), x.cell) != between.end());
    REQUIRE(assemble_cotensor(ct, x) == w);
    const auto y = decompose_cotensor(ct, assemble_cotensor(ct, x));
    REQUIRE(y.w0 == x.w0);
    REQUIRE(y.w1 == x.w1);
    REQUIRE(y.cell == x.cell);
  }
}

TEST_CASE("pushing a discrete fibration along the identity") {
  Rng rng(13);
  for (int i = 0; i < 30; ++i) {
    const auto C = gen::any_category(rng, 3, 6);
    const auto g = tabulate_mod(gen::presheaf(rng, C, 3)).projection;
    const auto s = psh_on_dfib(g, cat::identity_functor(g.dom));
    REQUIRE(cat::find_iso_over(s, g).has_value());
  }
}

TEST_CASE("pushing forward to a point counts components") {
  const auto G = cat::cyclic_group(3);
  const auto s = psh_on_dfib(cat::to_terminal(G), cat::identity_functor(G));
  CHECK(s.dom->objects() == 1);
  const auto D = cat::discrete(3);
  CHECK(psh_on_dfib(cat::to_terminal(D), cat::identity_functor(D)).dom->objects() == 3);
  CHECK_THROWS_AS(psh_on_dfib(cat::identity_functor(G), cat::to_terminal(G)), InvariantError);
}
