#pragma once

// The commands behind the `polyspan` executable. Each takes document text
// and returns a document or a report; exit codes are decided by the caller.

#include <fstream>
#include <sstream>
#include <string>

#include "check.hpp"
#include "error.hpp"
#include "io.hpp"
#include "mod.hpp"
#include "poly_set.hpp"
#include "random.hpp"
#include "rel.hpp"

namespace polyspan::cli {

enum ExitCode : int { ok = 0, property_failure = 1, input_error = 2 };

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("input file", "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("output file", "cannot write " + path);
  out << text;
}

/// LHS after RHS: `compose LHS RHS` applies RHS first.
inline io::Document cmd_compose(const std::string &kind, const std::string &lhs, const std::string &rhs) {
  const io::Document l = io::parse(lhs), r = io::parse(rhs);
  if (kind == "set") {
    io::expect_kind(l, "polynomial");
    io::expect_kind(r, "polynomial");
    return io::document("polynomial",
                        poly::compose_poly(io::decode_polynomial(l.payload), io::decode_polynomial(r.payload)));
  }
  if (kind == "rel") {
    io::expect_kind(l, "rel-polynomial");
    io::expect_kind(r, "rel-polynomial");
    return io::document("rel-polynomial", rel::compose_polyrel(io::decode_rel_polynomial(l.payload),
                                                               io::decode_rel_polynomial(r.payload)));
  }
  if (kind == "mod") {
    io::expect_kind(l, "mod-polynomial");
    io::expect_kind(r, "mod-polynomial");
    return io::document("mod-polynomial", mod::compose_polymod(io::decode_mod_polynomial(l.payload),
                                                               io::decode_mod_polynomial(r.payload)));
  }
  throw BoundaryMismatch("kind mismatch", "compose kind must be set, rel or mod, not " + kind);
}

/// The extension of a polynomial at a family over its source.
inline io::Document cmd_eval(const std::string &polynomial, const std::string &family) {
  const io::Document p = io::parse(polynomial), a = io::parse(family);
  io::expect_kind(p, "polynomial");
  io::expect_kind(a, "family");
  return io::document("family",
                      poly::extension_eval(io::decode_polynomial(p.payload), io::decode_family(a.payload)).family);
}

/// Runs a suite; a count of zero means the suite's default.
inline check::Report cmd_check(const std::string &suite, std::uint64_t seed, std::size_t count) {
  const auto *s = check::find_suite(suite);
  if (!s) {
    std::string names;
    for (const auto &x : check::suites())
      names += std::string(names.empty() ? "" : ", ") + x.name;
    throw Error("suite name", "unknown suite " + suite + " (known: " + names + ")");
  }
  return s->run(seed, count == 0 ? s->default_count : count);
}

inline io::Document cmd_random(const std::string &kind, std::uint64_t seed) {
  return gen::random_document(kind, seed);
}

} // namespace polyspan::cli
