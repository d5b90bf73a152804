#pragma once

#include <span>
#include <string>
#include <vector>

#include "qsph/lattice.hpp"
#include "qsph/sparse.hpp"

namespace qsph {

/// Generator z_k of the sphere algebra in the torus-covariant
/// representation, compressed to the window.  For k <= ell,
///   z_k e_gamma = q^{gamma(1)+...+gamma(k-1)} sqrt(1-q^{2 gamma(k)+2}) e_{gamma+eps_k},
/// and z_{ell+1} e_gamma = q^{gamma(1)+...+gamma(ell)} e_{gamma+eps_{ell+1}}.
/// Images leaving the window are dropped.
SparseOperator generator_z(int k, double q, const Truncation& trunc);

struct GeneratorSet {
  double q;
  int ell;
  Truncation trunc;
  std::vector<SparseOperator> z;  // z[k-1] is z_k, k in [1, ell+1]
};

GeneratorSet build_generators(double q, const Truncation& trunc);

/// Diagonal unitary with entry prod_i w_i^{gamma(i)} at e_gamma.
SparseOperator torus_unitary(std::span<const Complex> w, const Truncation& trunc);

/// max_k || w_k z_k - U_w z_k U_w* ||.
double covariance_residual(const GeneratorSet& gens, std::span<const Complex> w);

struct RelationResidualEntry {
  std::string relation;
  double residual;
};

/// Residuals of the four defining relation families, measured as the max
/// norm of (LHS - RHS) e_gamma over interior basis vectors; the sphere
/// relation sum z_i z_i* = 1 is checked over the full window.
struct RelationResiduals {
  double max_zz_twist = 0.0;       // z_i z_j = q z_j z_i, j < i
  double max_zzstar_twist = 0.0;   // z_i* z_j = q z_j z_i*, i != j
  double max_ladder = 0.0;         // z_i z_i* - z_i* z_i + (1-q^2) sum_{k>i} z_k z_k* = 0
  double sphere = 0.0;             // sum_i z_i z_i* = 1, full window
  std::vector<RelationResidualEntry> details;
  double max_interior() const;
};

RelationResiduals relation_residuals(const GeneratorSet& gens);

}  // namespace qsph
