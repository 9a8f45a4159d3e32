#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "polyspan/cli.hpp"

namespace {

using namespace polyspan;

void emit(const io::Document &d, const std::string &out) {
  const std::string text = io::serialize(d);
  if (out.empty())
    std::cout << text;
  else
    cli::write_file(out, text);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Polynomials in spans, relations and profunctors over finite data"};
  app.require_subcommand(1);

  std::string kind, lhs, rhs, out;
  auto *compose = app.add_subcommand("compose", "compose two polynomials: LHS after RHS");
  compose->add_option("--kind", kind, "set, rel or mod")->required()->check(CLI::IsMember({"set", "rel", "mod"}));
  compose->add_option("LHS", lhs, "outer polynomial document")->required();
  compose->add_option("RHS", rhs, "inner polynomial document")->required();
  compose->add_option("-o,--output", out, "write the result here instead of stdout");

  std::string poly_file, family_file;
  auto *eval = app.add_subcommand("eval", "evaluate a polynomial at a family");
  eval->add_option("POLY", poly_file, "polynomial document")->required();
  eval->add_option("FAMILY", family_file, "family document")->required();
  eval->add_option("-o,--output", out, "write the result here instead of stdout");

  std::string suite;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  auto *check = app.add_subcommand("check", "run a property suite");
  check->add_option("SUITE", suite, "suite name")->required();
  check->add_option("--seed", seed, "base seed")->required();
  check->add_option("--count", count, "number of cases (default: the suite's own)");

  std::string rkind;
  auto *random = app.add_subcommand("random", "print a seeded random document");
  random->add_option("--kind", rkind, "document kind")->required()->check(CLI::IsMember(io::kinds()));
  random->add_option("--seed", seed, "seed")->required();
  random->add_option("-o,--output", out, "write the result here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? cli::ok : cli::input_error;
  }

  try {
    if (*compose) {
      emit(cli::cmd_compose(kind, cli::read_file(lhs), cli::read_file(rhs)), out);
    } else if (*eval) {
      emit(cli::cmd_eval(cli::read_file(poly_file), cli::read_file(family_file)), out);
    } else if (*check) {
      const auto report = cli::cmd_check(suite, seed, count);
      std::cout << report.text();
      return report.ok() ? cli::ok : cli::property_failure;
    } else if (*random) {
      emit(cli::cmd_random(rkind, seed), out);
    }
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::input_error;
  }
  return cli::ok;
}
