#include "catch_amalgamated.hpp"

#include "polyspan/random.hpp"

using namespace polyspan;
using namespace polyspan::rel;

namespace {

Relation compose_oracle(const Relation &n, const Relation &m) {
  std::vector<Pair> ps;
  for (Index x = 0; x < m.src.size; ++x)
    for (Index z = 0; z < n.tgt.size; ++z)
      for (Index y = 0; y < m.tgt.size; ++y)
        if (m.contains(x, y) && n.contains(y, z)) {
          ps.emplace_back(x, z);
          break;
        }
  return {m.src, n.tgt, ps};
}

Relation rif_oracle(const Relation &n, const Relation &u) {
  std::vector<Pair> ps;
  for (Index k = 0; k < u.src.size; ++k)
    for (Index t = 0; t < n.src.size; ++t) {
      bool ok = true;
      for (Index y = 0; y < n.tgt.size; ++y)
        if (n.contains(t, y) && !u.contains(k, y))
          ok = false;
      if (ok)
        ps.emplace_back(k, t);
    }
  return {u.src, n.src, ps};
}

std::vector<Relation> all_relations(const FinSetObj &a, const FinSetObj &b) {
  std::vector<Relation> out;
  const std::size_t n = a.size * b.size;
  for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
    std::vector<Pair> ps;
    for (Index i = 0; i < n; ++i)
      if ((m >> i) & 1)
        ps.emplace_back(i / b.size, i % b.size);
    out.emplace_back(a, b, ps);
  }
  return out;
}

/// The relation polynomial with the given relation into the given subset of C.
RelPolynomial polyrel(std::size_t x, std::size_t c, std::vector<Index> z, std::vector<Pair> a) {
  const std::size_t nz = z.size();
  return {x, Subset(c, std::move(z)), Relation(x, nz, std::move(a))};
}

} // namespace

TEST_CASE("relations are kept in normal form") {
  CHECK_THROWS_AS(Relation(2, 2, {{1, 0}, {0, 1}}), InvariantError);
  CHECK_THROWS_AS(Relation(2, 2, {{0, 2}}), InvariantError);
  const auto r = Relation::normalized(2, 2, {{1, 0}, {0, 1}, {1, 0}});
  CHECK(r.pairs == std::vector<Pair>{{0, 1}, {1, 0}});
  CHECK(Relation::normalized(2, 2, r.pairs) == r);
}

TEST_CASE("relation composition examples") {
  const Relation m(3, 3, {{0, 1}, {2, 2}});
  CHECK(rel_compose(identity_relation(3), m) == m);
  CHECK(rel_compose(m, identity_relation(3)) == m);
  CHECK(rel_compose(m, Relation(2, 3, {})).pairs.empty());
  const Relation chain(3, 3, {{0, 1}, {1, 2}});
  CHECK(rel_compose(chain, chain).pairs == std::vector<Pair>{{0, 2}});
  CHECK_THROWS_AS(rel_compose(identity_relation(2), identity_relation(3)), BoundaryMismatch);
}

TEST_CASE("relation composition matches the oracle and is associative") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const FinSetObj a(rng.between(0, 4)), b(rng.between(0, 4)), c(rng.between(0, 4)), d(rng.between(0, 4));
    const auto m = gen::relation(rng, a, b);
    const auto n = gen::relation(rng, b, c);
    const auto o = gen::relation(rng, c, d);
    REQUIRE(rel_compose(n, m) == compose_oracle(n, m));
    REQUIRE(rel_compose(o, rel_compose(n, m)) == rel_compose(rel_compose(o, n), m));
  }
}

TEST_CASE("right lifting of relations examples") {
  const Relation u(2, 3, {{0, 0}, {1, 2}});
  CHECK(rel_rif(identity_relation(3), u) == u);
  // total with singleton images: the preimage relation
  const auto f = graph_relation(FinSetMap(4, 3, {0, 2, 2, 1}));
  CHECK(rel_rif(f, u).pairs == std::vector<Pair>{{0, 0}, {1, 1}, {1, 2}});
  // an empty row is related to everything
  const Relation n(2, 3, {{0, 1}});
  CHECK(rel_rif(n, u).pairs == std::vector<Pair>{{0, 1}, {1, 1}});
}

TEST_CASE("right lifting is right adjoint to precomposition") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const FinSetObj k(rng.between(0, 3)), t(rng.between(0, 3)), y(rng.between(0, 3));
    const auto n = gen::relation(rng, t, y);
    const auto u = gen::relation(rng, k, y);
    const auto r = rel_rif(n, u);
    REQUIRE(r == rif_oracle(n, u));
    for (const auto &v : all_relations(k, t))
      REQUIRE(leq(rel_compose(n, v), u) == leq(v, r));
  }
}

TEST_CASE("tabulation from a point") {
  CHECK(tabulate_rel(Relation(1, 3, {{0, 0}, {0, 1}, {0, 2}})) == identity_map(3));
  CHECK(tabulate_rel(Relation(1, 3, {})).dom.size == 0);
  const auto odd = tabulate_rel(Relation(1, 4, {{0, 1}, {0, 3}}));
  CHECK(odd.dom.size == 2);
  CHECK(odd.table == std::vector<Index>{1, 3});
  CHECK(is_injective(odd));
  CHECK_THROWS_AS(tabulate_rel(Relation(2, 1, {})), InvariantError);
}

TEST_CASE("composition of singleton relation polynomials") {
  // P : {x} -> {c} with Z = {c}; Q : {c} -> {d} with Z = {d}, relating c to d
  const auto P = polyrel(1, 1, {0}, {{0, 0}});
  const auto Q = polyrel(1, 1, {0}, {{0, 0}});
  const auto QP = compose_polyrel(Q, P);
  CHECK(QP.Z.members == std::vector<Index>{0});
  CHECK(QP.A.pairs == std::vector<Pair>{{0, 0}});
  CHECK(to_partial_map(QP) == kleisli_compose(to_partial_map(Q), to_partial_map(P)));
}

TEST_CASE("composition with an empty relation") {
  const auto P = polyrel(2, 3, {0, 2}, {{0, 0}, {1, 1}});
  const auto Q = polyrel(3, 4, {1, 2, 3}, {});
  const auto QP = compose_polyrel(Q, P);
  CHECK(QP.Z.members == std::vector<Index>{1, 2, 3});
  CHECK(QP.A.pairs.empty());
}

TEST_CASE("composition drops elements seeing outside the subset") {
  const auto P = polyrel(1, 2, {0}, {{0, 0}});
  const auto Q = polyrel(2, 2, {0, 1}, {{0, 0}, {1, 1}});
  const auto QP = compose_polyrel(Q, P);
  CHECK(QP.Z.members == std::vector<Index>{0});
  CHECK(QP.A.pairs == std::vector<Pair>{{0, 0}});
}

TEST_CASE("identity relation polynomials are units") {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const FinSetObj X(rng.between(0, 4)), C(rng.between(0, 4));
    const auto P = gen::rel_polynomial(rng, X, C);
    REQUIRE(compose_polyrel(identity_polyrel(C), P) == P);
    REQUIRE(compose_polyrel(P, identity_polyrel(X)) == P);
  }
}

TEST_CASE("partial map round trips") {
  const auto empty = polyrel(2, 3, {}, {});
  CHECK(from_partial_map(to_partial_map(empty)) == empty);
  const auto full = polyrel(2, 2, {0, 1}, {{0, 0}, {0, 1}, {1, 1}});
  CHECK(from_partial_map(to_partial_map(full)) == full);
  Rng rng(10);
  for (int i = 0; i < 100; ++i) {
    const auto P = gen::rel_polynomial(rng, rng.between(0, 5), rng.between(0, 5));
    REQUIRE(from_partial_map(to_partial_map(P)) == P);
  }
}

TEST_CASE("Kleisli composition examples") {
  // f total with singleton values: a relabelling
  const PartialMapToPower f(2, full_subset(2), {Subset(2, {1}), Subset(2, {0})});
  const PartialMapToPower g(2, Subset(3, {0, 2}), {Subset(2, {0}), Subset(2, {0, 1})});
  const auto gf = kleisli_compose(g, f);
  CHECK(gf.domain.members == std::vector<Index>{0, 2});
  CHECK(gf.value[0].members == std::vector<Index>{1});
  CHECK(gf.value[1].members == std::vector<Index>{0, 1});
  // an empty value stays defined, with empty union
  const PartialMapToPower h(2, Subset(1, {0}), {Subset(2, {})});
  const auto hf = kleisli_compose(h, f);
  CHECK(hf.domain.members == std::vector<Index>{0});
  CHECK(hf.value[0].members.empty());
}

TEST_CASE("relation polynomial composition is Kleisli composition") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const FinSetObj X(rng.between(0, 5)), C(rng.between(0, 5)), D(rng.between(0, 5));
    const auto P = gen::rel_polynomial(rng, X, C);
    const auto Q = gen::rel_polynomial(rng, C, D);
    REQUIRE(to_partial_map(compose_polyrel(Q, P)) == kleisli_compose(to_partial_map(Q), to_partial_map(P)));
  }
}

TEST_CASE("H_K on relation polynomials examples") {
  const Relation s(2, 3, {{0, 0}, {0, 1}, {1, 2}});
  CHECK(hK_rel(2, identity_polyrel(3), s) == s);
  const auto P = polyrel(3, 2, {0, 1}, {{0, 0}, {1, 0}, {2, 1}});
  const Relation full(2, 3, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}});
  CHECK(hK_rel(2, P, full).pairs == std::vector<Pair>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(hK_rel(2, P, s).pairs == std::vector<Pair>{{0, 0}, {1, 1}});
}

TEST_CASE("H_K on relation polynomials is functorial and monotone") {
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const FinSetObj K(rng.between(0, 3)), X(rng.between(0, 4)), C(rng.between(0, 4)), D(rng.between(0, 4));
    const auto P = gen::rel_polynomial(rng, X, C);
    const auto Q = gen::rel_polynomial(rng, C, D);
    const auto s = gen::relation(rng, K, X);
    REQUIRE(hK_rel(K, P, s) == hK_rel_via_rif(K, P, s));
    REQUIRE(hK_rel(K, compose_polyrel(Q, P), s) == hK_rel(K, Q, hK_rel(K, P, s)));
    const auto t = Relation::normalized(K, X, [&] {
      auto ps = s.pairs;
      const auto extra = gen::relation(rng, K, X);
      ps.insert(ps.end(), extra.pairs.begin(), extra.pairs.end());
      return ps;
    }());
    REQUIRE(leq(hK_rel(K, P, s), hK_rel(K, P, t)));
  }
}
