#pragma once

#include <functional>
#include <optional>
#include <string>

#include "qsph/dirac.hpp"
#include "qsph/lattice.hpp"
#include "qsph/qoperators.hpp"
#include "qsph/sparse.hpp"

namespace qsph {

/// An operator that maps basis vectors to basis vectors (or to zero),
/// represented by its action on Gamma.  The lattice lines on which it
/// differs from the identity are listed so index computations can confine
/// themselves to those lines.
struct BasisPartialMap {
  std::function<std::optional<LatticePoint>(const LatticePoint&)> apply;
  std::function<std::optional<LatticePoint>(const LatticePoint&)> apply_inverse;
  std::string describe;
};

/// The combinatorial action of the unitary u on Gamma:
/// e_gamma -> e_{gamma+eps_{ell+1}} when the N-coordinates vanish,
/// identity otherwise.
BasisPartialMap combinatorial_u(int ell);

struct UnitaryU {
  SparseOperator op;  // functional-calculus route on the window
  BasisPartialMap map;
};

/// Builds u two ways: combinatorially and as
/// chi_{1}(z* z)(z - 1) + 1 with z = z_{ell+1} via exact spectral
/// projection on the truncated spectrum.  Throws when the routes disagree
/// on any certifiable column.
UnitaryU build_u(double q, const Truncation& trunc, const GeneratorSet& gens);

/// Predicate for Gamma+ = {d > 0}.
std::function<bool(const LatticePoint&)> sign_projection(const EquivariantDirac& D);

/// Exact Fredholm index of PuP by orbit analysis along the zero line,
/// scanning the bilateral coordinate in [-scan_radius, scan_radius] and
/// certifying that the sign is constant on both tails.
int fredholm_index(const std::function<bool(const LatticePoint&)>& positive, int ell,
                   int scan_radius = 200, int tail_certificate = 32);

/// Window-based numerical cross-check: support analysis of the compressed
/// matrix P u P built from the operator-side u, with window-edge columns
/// and rows excluded.
int fredholm_index_window(const EquivariantDirac& D, const SparseOperator& u_op,
                          const Truncation& trunc);

struct PairingReport {
  int index = 0;
  int index_window = 0;
  std::string dirac_name;
  int ell = 0;
  double q = 0.0;
};

/// Full pipeline build_u -> sign_projection -> fredholm_index, with the
/// numerical cross-check; throws on any inconsistency.  Result is asserted
/// to lie in {-1, 0, +1}.
PairingReport pairing(const EquivariantDirac& D, double q, const Truncation& trunc);

}  // namespace qsph
