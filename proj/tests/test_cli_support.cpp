#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "qsph/cli_support.hpp"

using namespace qsph;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "qsph_test_tmp_" + std::to_string(counter++) + ".txt";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config parsing: sections, comments, whitespace") {
  const auto cfg = Config::parse_text(
      "top = 1\n"
      "[experiment]\n"
      "ell = 2   # trailing comment\n"
      "q=0.25\n"
      "\n"
      "; full-line comment\n"
      "[output]\n"
      "report = out.json\n");
  CHECK(cfg.get_int("top", 0) == 1);
  CHECK(cfg.get_int("experiment.ell", 0) == 2);
  CHECK(cfg.get_double("experiment.q", 0.0) == 0.25);
  CHECK(cfg.get_string("output.report", "") == "out.json");
  CHECK(cfg.get_int("missing", 42) == 42);
  CHECK(cfg.has("experiment.q"));
  CHECK_FALSE(cfg.has("experiment.zz"));
}

TEST_CASE("config parsing: malformed input is rejected") {
  CHECK_THROWS_AS(Config::parse_text("just a line\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_text("[unclosed\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_text("= value\n"), ConfigError);
  const auto cfg = Config::parse_text("[a]\nx = hello\n");
  CHECK_THROWS_AS(cfg.get_int("a.x", 0), ConfigError);
  CHECK_THROWS_AS(cfg.get_double("a.x", 0.0), ConfigError);
}

TEST_CASE("command-line overrides replace config values") {
  auto cfg = Config::parse_text("[experiment]\nell = 1\n");
  cfg.set_override("experiment.ell=3");
  CHECK(cfg.get_int("experiment.ell", 0) == 3);
  cfg.set_override("experiment.q = 0.75");
  CHECK(cfg.get_double("experiment.q", 0.0) == 0.75);
  CHECK_THROWS_AS(cfg.set_override("no-equals"), ConfigError);
}

TEST_CASE("experiment config validation") {
  const auto good = ExperimentConfig::from_config(
      Config::parse_text("[experiment]\nell = 2\nq = 0.5\nn_max = 8\nm_max = 9\n"));
  CHECK(good.ell == 2);
  CHECK(good.truncation().size() == 9 * 9 * 19);
  CHECK(good.make_dirac().name == "torus");

  CHECK_THROWS_AS(
      ExperimentConfig::from_config(Config::parse_text("[experiment]\nq = 1.0\n")), ConfigError);
  CHECK_THROWS_AS(
      ExperimentConfig::from_config(Config::parse_text("[experiment]\nq = -0.5\n")), ConfigError);
  CHECK_THROWS_AS(
      ExperimentConfig::from_config(Config::parse_text("[experiment]\nell = 0\n")), ConfigError);
  CHECK_THROWS_AS(
      ExperimentConfig::from_config(Config::parse_text("[thresholds]\nnorm_tolerance = 0\n")),
      ConfigError);
}

TEST_CASE("expression evaluation over lattice points") {
  const LatticePoint p({2, 3, -4});
  CHECK(Expression::parse("1 + 2 * 3").evaluate(p) == 7.0);
  CHECK(Expression::parse("(1 + 2) * 3").evaluate(p) == 9.0);
  CHECK(Expression::parse("2 ^ 3 ^ 2").evaluate(p) == 512.0);  // right-associative
  CHECK(Expression::parse("-g3").evaluate(p) == 4.0);
  CHECK(Expression::parse("g1 + g2").evaluate(p) == 5.0);
  CHECK(Expression::parse("deg").evaluate(p) == 9.0);
  CHECK(Expression::parse("abs(g3)").evaluate(p) == 4.0);
  CHECK(Expression::parse("min(g1, g2)").evaluate(p) == 2.0);
  CHECK(Expression::parse("max(g1, 2.5)").evaluate(p) == 2.5);
  CHECK(Expression::parse("deg / 2 - 1").evaluate(p) == 3.5);
}

TEST_CASE("expression errors") {
  CHECK_THROWS_AS(Expression::parse("1 +"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("foo"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("min(1)"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("(1"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("1 2"), ExpressionError);
  const LatticePoint p({1, 0});
  CHECK_THROWS_AS(Expression::parse("g5").evaluate(p), ExpressionError);
}

TEST_CASE("spectrum tables with fallback expressions") {
  TempFile csv(
      "# fallback = deg * (g2 / max(abs(g2), 1)) + 0.0\n"
      "0, 0, 0.5\n"
      "1, -2, -3\n");
  const auto D = dirac_from_table(csv.path, 1);
  CHECK(D(LatticePoint({0, 0})) == 0.5);
  CHECK(D(LatticePoint({1, -2})) == -3.0);
  // off-table: fallback = signed weighted degree
  CHECK(D(LatticePoint({2, 3})) == 5.0);
  CHECK(D(LatticePoint({0, -4})) == -4.0);
}

TEST_CASE("spectrum tables without fallback reject unknown points") {
  TempFile csv("0, 0, 1.5\n");
  const auto D = dirac_from_table(csv.path, 1);
  CHECK(D(LatticePoint({0, 0})) == 1.5);
  CHECK_THROWS_AS(D(LatticePoint({1, 1})), ConfigError);
}

TEST_CASE("spectrum tables: malformed rows") {
  TempFile bad("1, 2\n");
  CHECK_THROWS_AS(dirac_from_table(bad.path, 1), ConfigError);
  TempFile nan("a, 0, 1\n");
  CHECK_THROWS_AS(dirac_from_table(nan.path, 1), ConfigError);
  CHECK_THROWS_AS(dirac_from_table("definitely_missing.csv", 1), ConfigError);
}

TEST_CASE("builtin spectra by name") {
  CHECK(dirac_builtin("torus", 2).name == "torus");
  CHECK(dirac_builtin("neg_torus", 2)(LatticePoint({1, 0, 2})) == -3.0);
  CHECK(dirac_builtin("abs_torus", 2)(LatticePoint({1, 0, -2})) == 3.5);
  CHECK_THROWS_AS(dirac_builtin("nope", 1), ConfigError);
}
