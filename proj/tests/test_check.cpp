#include "catch_amalgamated.hpp"

#include "polyspan/cli.hpp"

using namespace polyspan;

TEST_CASE("every suite passes a short run") {
  for (const auto &s : check::suites()) {
    const auto r = cli::cmd_check(s.name, 7, s.default_count == 0 ? 0 : 5);
    INFO(r.text());
    CHECK(r.ok());
  }
}

TEST_CASE("suite runs are reproducible") {
  const auto a = cli::cmd_check("rel-kleisli", 3, 20);
  const auto b = cli::cmd_check("rel-kleisli", 3, 20);
  CHECK(a.text() == b.text());
}

TEST_CASE("unknown suites are rejected") {
  CHECK(check::find_suite("nonsense") == nullptr);
  try {
    (void)cli::cmd_check("nonsense", 1, 1);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.clause() == "suite name");
  }
}

TEST_CASE("extension counts by enumeration") {
  // A^2 at |A| = 3 over a point
  const poly::Polynomial sq(terminal_map(2), terminal_map(2), identity_map(1));
  CHECK(check::oracle::extension_counts(sq, {3}) == std::vector<std::size_t>{9});
}
