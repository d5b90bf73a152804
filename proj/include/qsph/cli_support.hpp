#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "qsph/dirac.hpp"

namespace qsph {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key-value config with [section] headers; keys are reported as
/// "section.key" ("key" for the preamble).  '#' and ';' start comments.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text);

  /// Applies a "section.key=value" override string.
  void set_override(const std::string& spec);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  int get_int(const std::string& key, int fallback) const;
  double get_double(const std::string& key, double fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Experiment parameters shared by all subcommands.
struct ExperimentConfig {
  int ell = 1;
  double q = 0.5;
  int n_max = 10;
  int m_max = 10;
  int interior_margin = 1;
  std::string dirac = "torus";  // builtin name or path to a CSV table
  double norm_tolerance = 1e-10;
  double trend_threshold = 1e-3;
  std::string output = "";  // report path; empty writes to stdout

  static ExperimentConfig from_config(const Config& cfg);
  Truncation truncation() const;
  EquivariantDirac make_dirac() const;
};

struct ExpressionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Arithmetic over the lattice coordinates: variables g1..g{ell+1} and deg,
/// operators + - * / ^, functions abs/min/max, parentheses, decimal
/// literals.  Parsed once, evaluated per point.
class Expression {
 public:
  static Expression parse(const std::string& text);
  double evaluate(const LatticePoint& gamma) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
};

/// Eigenvalue table from CSV rows "g1,...,g{ell+1},d" with an optional
/// "# fallback = <expression>" header used off-table.  Without a fallback,
/// off-table lookups throw.
EquivariantDirac dirac_from_table(const std::string& path, int ell);

/// Builtin spectra by name ("torus", "neg_torus", "abs_torus").
EquivariantDirac dirac_builtin(const std::string& name, int ell);

}  // namespace qsph
