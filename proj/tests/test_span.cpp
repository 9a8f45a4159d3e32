#include "catch_amalgamated.hpp"

#include "polyspan/random.hpp"

using namespace polyspan;
using namespace polyspan::spn;

namespace {

Span random_span(Rng &rng, const FinSetObj &l, const FinSetObj &r, std::size_t max_apex) {
  return gen::span(rng, l, r, max_apex);
}

/// Every cell v => target whose paste equals c.
std::size_t pasting_preimages(const Span &m, const RightLifting &rif, const Span &v, const SpanCell &c) {
  std::size_t n = 0;
  for_each_cell(v, rif.lifting, [&](const SpanCell &d) { n += rif_paste(m, rif, d).h == c.h; });
  return n;
}

/// u on T ×_B A induced by a pullback around (f, g).
FinSetMap cone_map(const PBAround &other) {
  const Pullback tb = pullback(other.r, other.f);
  std::vector<Index> u(tb.apex.size, npos);
  for (Index i = 0; i < tb.apex.size; ++i)
    for (Index x = 0; x < other.q.dom.size; ++x)
      if (other.q(x) == tb.pr1(i) && other.g(other.p(x)) == tb.pr2(i))
        u[i] = other.p(x);
  return {tb.apex, other.g.dom, u};
}

} // namespace

TEST_CASE("composing with the identity span") {
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto t = random_span(rng, 3, 2, 5);
    CHECK(find_span_iso(compose_spans(t, identity_span(3)), t).has_value());
    CHECK(find_span_iso(compose_spans(identity_span(2), t), t).has_value());
  }
}

TEST_CASE("span composition examples") {
  const Span one(identity_map(1), identity_map(1));
  CHECK(compose_spans(one, one).apex.size == 1);
  const Span s(terminal_map(2), terminal_map(2));
  const Span t(terminal_map(3), terminal_map(3));
  const auto c = compose_spans(t, s);
  CHECK(c.apex.size == 6);
  CHECK_THROWS_AS(compose_spans(s, Span(identity_map(2), identity_map(2))), BoundaryMismatch);
}

TEST_CASE("graphs and cographs") {
  CHECK(graph(identity_map(3)) == identity_span(3));
  const auto f = terminal_map(2);
  CHECK(cograph(f).apex.size == 2);
  const FinSetMap g(4, 3, {0, 2, 2, 1});
  const auto gc = compose_spans(graph(g), cograph(g));
  CHECK(gc.apex.size == 4);
}

TEST_CASE("is_map examples") {
  const FinSetMap f(3, 2, {0, 1, 1});
  const auto w = is_map(graph(f));
  REQUIRE(w.has_value());
  CHECK(triangles_hold(*w));
  CHECK_FALSE(is_map(cograph(f)).has_value());
  const auto id = is_map(identity_span(2));
  REQUIRE(id.has_value());
  CHECK(id->unit.h == identity_map(2));
  CHECK(id->counit.h == identity_map(2));
  CHECK(triangles_hold(*id));
}

TEST_CASE("is_map succeeds exactly for bijective left legs") {
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const FinSetObj x(rng.between(0, 3)), y(rng.between(1, 3));
    Span s = random_span(rng, x, y, 4);
    if (rng.chance(1, 2))
      s = Span(gen::bijection(rng, x), gen::map(rng, x, y));
    const auto w = is_map(s);
    REQUIRE(w.has_value() == is_bijective(s.left_leg));
    if (w)
      REQUIRE(triangles_hold(*w));
  }
}

TEST_CASE("composition is associative and unital up to isomorphism") {
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const FinSetObj a(rng.between(1, 3)), b(rng.between(1, 3)), c(rng.between(1, 3)), d(rng.between(1, 3));
    const auto s = random_span(rng, a, b, 4);
    const auto t = random_span(rng, b, c, 4);
    const auto r = random_span(rng, c, d, 4);
    const auto lhs = compose_spans(compose_spans(r, t), s);
    const auto rhs = compose_spans(r, compose_spans(t, s));
    REQUIRE(find_span_iso(lhs, rhs).has_value());
    REQUIRE(associator(r, t, s).invertible());
    REQUIRE(vcompose(associator_inverse(r, t, s), associator(r, t, s)).h == identity_map(lhs.apex));
    REQUIRE(left_unitor(s).invertible());
    REQUIRE(right_unitor(s).invertible());
  }
}

TEST_CASE("right lifting through the identity") {
  Rng rng(3);
  const auto u = random_span(rng, 2, 3, 5);
  const auto rif = rif_span(identity_span(3), u);
  CHECK(find_span_iso(rif.lifting, u).has_value());
}

TEST_CASE("right lifting along an empty apex") {
  const Span m(FinSetMap(0, 3, {}), FinSetMap(0, 2, {}));
  const Span u(FinSetMap(1, 4, {2}), FinSetMap(1, 2, {0}));
  const auto rif = rif_span(m, u);
  CHECK(rif.lifting.apex.size == 12);
}

TEST_CASE("right lifting counts sections") {
  const Span m(terminal_map(2), terminal_map(2));
  const Span u(terminal_map(3), terminal_map(3));
  const auto rif = rif_span(m, u);
  CHECK(rif.lifting.apex.size == 9);
}

TEST_CASE("right lifting has the universal property") {
  Rng rng(19);
  std::size_t cells = 0;
  for (int i = 0; i < 100; ++i) {
    const FinSetObj k(rng.between(1, 2)), x(rng.between(1, 2)), s(rng.between(1, 2));
    const auto m = random_span(rng, s, x, 3);
    const auto u = random_span(rng, k, x, 3);
    const auto v = random_span(rng, k, s, 3);
    const auto rif = rif_span(m, u);
    const auto mv = compose_spans(m, v);
    for_each_cell(mv, u, [&](const SpanCell &c) {
      ++cells;
      REQUIRE(pasting_preimages(m, rif, v, c) == 1);
      REQUIRE(rif_paste(m, rif, rif_transpose(m, rif, v, c)).h == c.h);
    });
  }
  CHECK(cells > 50);
}

TEST_CASE("distributivity pullback examples") {
  const FinSetMap a(3, 2, {0, 1, 1});
  const auto id = distributivity_pullback(a, identity_map(3));
  CHECK(id.r.dom.size == 2);
  CHECK(is_bijective(id.r));

  const FinSetMap f(2, 1, {0, 0});
  const FinSetMap g(5, 2, {0, 0, 1, 1, 1});
  const auto d = distributivity_pullback(f, g);
  CHECK(d.r.dom.size == 6);
  CHECK(d.q.dom.size == 12);
  CHECK(d.is_pullback());

  const FinSetMap e(1, 2, {0});
  const auto de = distributivity_pullback(e, FinSetMap(2, 1, {0, 0}));
  CHECK(fibers_of(de.r)[1].size() == 1);
}

TEST_CASE("the distributivity pullback is terminal") {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const FinSetObj A(rng.between(0, 4)), B(rng.between(1, 4));
    const FinSetObj Z(A.size == 0 ? 0 : rng.between(0, 4));
    const auto f = gen::map(rng, A, B);
    const auto g = gen::map(rng, Z, A);
    const auto dist = distributivity_pullback(f, g);
    CHECK(mediate_pb_around(dist, dist) == identity_map(dist.r.dom));
    for (int k = 0; k < 5; ++k) {
      const auto other = gen::pb_around(rng, f, g, 3);
      const auto t = mediate_pb_around(dist, other);
      REQUIRE(compose(dist.r, t) == other.r);
      REQUIRE(count_pb_around_morphisms(dist, other) == 1);
      const auto ks = factor_through_distributivity(dist, other.r, cone_map(other));
      REQUIRE(ks.size() == 1);
      REQUIRE(ks.front() == t);
    }
  }
}

TEST_CASE("a pullback around a missing section has no mediator") {
  const auto f = identity_map(1);
  const FinSetMap g(0, 1, {});
  const auto dist = distributivity_pullback(f, g);
  CHECK(dist.r.dom.size == 0);
  const PBAround other(f, g, FinSetMap(0, 0, {}), FinSetMap(0, 1, {}), FinSetMap(1, 1, {0}));
  try {
    mediate_pb_around(dist, other);
    FAIL("expected a mediator error");
  } catch (const MediatorError &e) {
    CHECK(e.kind() == MediatorError::Kind::none_found);
    CHECK(e.clause() == "no mediator");
  }
}

TEST_CASE("random pullbacks around are seeded") {
  const FinSetMap f(3, 2, {0, 1, 1});
  const FinSetMap g(4, 3, {0, 1, 2, 2});
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto a = gen::random_pb_around(f, g, seed);
    const auto b = gen::random_pb_around(f, g, seed);
    CHECK(a.r == b.r);
    CHECK(a.p == b.p);
    CHECK(a.is_pullback());
  }
}

TEST_CASE("the square of graphs over a pullback factors cones") {
  Rng rng(29);
  for (int i = 0; i < 60; ++i) {
    const FinSetObj A(rng.between(1, 3)), B(rng.between(1, 3)), C(rng.between(1, 2)), K(rng.between(1, 2));
    const auto f = gen::map(rng, A, C);
    const auto g = gen::map(rng, B, C);
    const auto pb = pullback(f, g);
    if (pb.apex.size == 0)
      continue;
    const auto w0 = random_span(rng, K, pb.apex, 3);
    const Span u = compose_spans(graph(pb.pr1), w0);
    const Span v = compose_spans(graph(pb.pr2), w0);
    const auto theta = find_span_iso(graph_after(f, u).span, graph_after(g, v).span);
    REQUIRE(theta.has_value());
    const Cone cone{u, v, *theta};
    const auto fac = factor_through_pullback(pb, f, g, cone);
    REQUIRE(pastes_to(pb, f, g, cone, fac));
    REQUIRE(find_span_iso(fac.w, w0).has_value());
    REQUIRE(count_connecting_cells(pb, fac, fac) == 1);
  }
}

TEST_CASE("the pullback's own cone factors through an isomorphism") {
  const FinSetMap f(3, 2, {0, 1, 1});
  const FinSetMap g(2, 2, {1, 0});
  const auto pb = pullback(f, g);
  const Span u = graph(pb.pr1), v = graph(pb.pr2);
  const auto theta = find_span_iso(graph_after(f, u).span, graph_after(g, v).span);
  REQUIRE(theta.has_value());
  const auto fac = factor_through_pullback(pb, f, g, Cone{u, v, *theta});
  CHECK(is_bijective(fac.w.right_leg));
  CHECK(fac.lambda.invertible());
  CHECK(fac.rho.invertible());
}
