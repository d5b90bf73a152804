#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsph/lattice.hpp"
#include "qsph/qoperators.hpp"
#include "qsph/sparse.hpp"

namespace qsph {

/// An equivariant Dirac operator is determined by its real eigenvalue
/// function on Gamma.  The zero policy replaces exact zeros so the sign
/// projection is total.
struct EquivariantDirac {
  std::string name;
  std::function<double(const LatticePoint&)> raw;
  double zero_replacement = 0.5;

  double operator()(const LatticePoint& gamma) const {
    const double v = raw(gamma);
    return v == 0.0 ? zero_replacement : v;
  }
};

/// d(gamma) = +/- weighted_degree(gamma), sign taken from the bilateral
/// coordinate; d(0) = +1/2 under the zero policy.
EquivariantDirac d_torus(int ell);
EquivariantDirac d_neg_torus(int ell);
/// |d_torus| + 1/2, everywhere positive.
EquivariantDirac d_abs_torus(int ell);

SparseOperator diagonal_of(const EquivariantDirac& D, const Truncation& trunc);

struct BoundednessReport {
  // sup over the window of |d(gamma+eps_k)-d(gamma)| q^{gamma(1)+...+gamma(k-1)}
  std::vector<double> sup_per_k;          // on the full window
  std::vector<std::vector<double>> trend; // per k, over nested growing sub-windows
  std::vector<int> window_sizes;          // n_max of each sub-window
  double trend_threshold = 1e-3;
  bool bounded = false;

  // The constant c feeding the growth graph.
  double edge_constant() const;
};

BoundednessReport commutator_bound_check(const EquivariantDirac& D, double q,
                                         const Truncation& trunc);

/// op_norm([diag(d), z_k]) per k, on the assembled sparse operators.
std::vector<double> commutator_norms(const EquivariantDirac& D, const GeneratorSet& gens);

struct BallExitsWindow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// #{gamma in window : |d(gamma)| <= n}; throws BallExitsWindow when a
/// counted point touches the window boundary.
long long counting_function(const EquivariantDirac& D, const Truncation& trunc, double n);

/// Least-squares slope of log N(n) vs log n over integer n in [n_lo, n_hi].
double spectral_dimension_estimate(const EquivariantDirac& D, const Truncation& trunc,
                                   int n_lo, int n_hi);

struct OptimalityReport {
  double a = 0.0;
  double b = 0.0;
  bool linear = false;  // verdict "O(degree)"
  std::vector<double> a_trend;
  std::vector<double> b_trend;
};

/// Fits |d| <= a + b * weighted_degree on nested sub-windows and reports
/// whether (a, b) stabilize.
OptimalityReport optimality_check(const EquivariantDirac& D, const Truncation& trunc);

}  // namespace qsph
