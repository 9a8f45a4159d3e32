// One line per acceptance criterion; exit status is nonzero if any fails.

#include <cstdio>
#include <string>
#include <vector>

#include "polyspan/cli.hpp"

using namespace polyspan;

namespace {

constexpr std::uint64_t seed = 42;

struct Line {
  int number;
  const char *suite;
  const char *title;
};

std::string golden(const std::string &name) { return std::string(POLYSPAN_GOLDEN_DIR) + "/" + name; }

/// Byte equality of command output with the frozen documents.
bool goldens_match(std::string &detail) {
  struct Expect {
    std::string file;
    io::Document doc;
  };
  std::vector<Expect> expect;
  try {
    expect.push_back({"a6.json", cli::cmd_compose("set", cli::read_file(golden("a2.json")), cli::read_file(golden("b3.json")))});
    expect.push_back({"a_plus_2.json", cli::cmd_compose("set", cli::read_file(golden("a_plus_1.json")),
                                                        cli::read_file(golden("b_plus_1.json")))});
    expect.push_back({"random_polynomial_8.json", cli::cmd_random("polynomial", 8)});
    expect.push_back({"random_rel_polynomial_7.json", cli::cmd_random("rel-polynomial", 7)});
    expect.push_back({"random_mod_polynomial_3.json", cli::cmd_random("mod-polynomial", 3)});
    std::size_t same = 0;
    for (const auto &e : expect) {
      if (io::serialize(e.doc) == cli::read_file(golden(e.file)))
        ++same;
      else
        detail += " differs: " + e.file;
    }
    detail = std::to_string(same) + "/" + std::to_string(expect.size()) + " golden files match" + detail;
    return same == expect.size();
  } catch (const std::exception &e) {
    detail = e.what();
    return false;
  }
}

} // namespace

int main() {
  const std::vector<Line> lines{
      {1, "extension", "extension oracle"},
      {2, "distributivity", "distributivity terminality"},
      {3, "maps", "maps are graphs"},
      {4, "rel-kleisli", "relation polynomials and Kleisli composition"},
      {5, "grothendieck", "elements and fibres"},
      {6, "comprehensive", "comprehensive factorization"},
      {7, "gfib", "groupoid fibration criteria"},
      {8, "mod-hk", "H_K on profunctor polynomials"},
      {9, "rel-hk", "H_K on relation polynomials"},
      {10, "discrete-reduction", "discrete reduction"},
  };
  int failed = 0;
  for (const auto &l : lines) {
    const auto rep = cli::cmd_check(l.suite, seed, 0);
    std::printf("%s criterion %d (%s): %s\n", rep.ok() ? "PASS" : "FAIL", l.number, l.title, rep.summary().c_str());
    if (!rep.ok()) {
      ++failed;
      std::fputs(rep.text().c_str(), stdout);
    }
  }
  std::string detail;
  const bool gold = goldens_match(detail);
  const auto det = cli::cmd_check("determinism", seed, 0);
  const bool ok = gold && det.ok();
  std::printf("%s criterion 11 (CLI determinism): %s; %s\n", ok ? "PASS" : "FAIL", detail.c_str(),
              det.summary().c_str());
  if (!ok)
    ++failed;
  return failed == 0 ? 0 : 1;
}
