#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsph/lattice.hpp"
#include "qsph/sparse.hpp"

namespace qsph {

/// One letter of a monomial: a generator index (1-based) with an optional
/// adjoint star.
struct Letter {
  int index = 0;
  bool star = false;
  bool operator==(const Letter&) const = default;
};

/// A word over the generator alphabet, z- or y-flavoured depending on
/// context.  Parsed from strings like "z1 z2* z1" or "y3 y1*".
struct Monomial {
  std::vector<Letter> letters;

  static Monomial parse(const std::string& text);
  std::string str(char alphabet) const;

  Monomial adjoint() const;
  Monomial concat(const Monomial& other) const;
  bool operator==(const Monomial&) const = default;
};

/// Quotient map on words: y_i -> z_i for i <= ell+1, any occurrence of
/// y_{ell+2} (or its adjoint) kills the monomial.
std::optional<Monomial> sigma_quotient(const Monomial& yword, int ell);

/// Truncated model of L2(N^{ell+1}) tensor the Fourier picture of C(S^1).
/// The sigma-tilde representation additionally needs a bilateral middle
/// coordinate; its index space is
///   (n_1..n_ell in [0, n_max]) x (m in [-m_neg, n_max]) x (f in [-f_max, f_max]).
/// The psi-side space identifies m >= 0 with the (ell+1)-th N-coordinate,
/// giving the Truncation(ell+1, n_max, f_max).
struct ModuleSpaceModel {
  int ell;
  int n_max;
  int m_neg;
  int f_max;

  ModuleSpaceModel(int ell_, int n_max_, int m_neg_, int f_max_);

  Truncation psi_trunc() const { return Truncation(ell + 1, n_max, f_max, 0); }

  std::size_t tilde_dim() const;
  // coords: n[0..ell-1], m, f
  std::size_t tilde_index(const std::vector<int>& n, int m, int f) const;
  void tilde_coords(std::size_t idx, std::vector<int>& n, int& m, int& f) const;
};

/// psi_{ell+1} on words: the generator representation of the larger sphere
/// on L2(N^{ell+1}) with the Fourier shift in place of the bilateral shift.
SparseOperator psi_rep(const Monomial& yword, double q, const ModuleSpaceModel& model);

/// sigma-tilde on words: generators of the smaller sphere acting on
/// H_ell tensor C(S^1), identity on the Fourier factor.
SparseOperator sigma_tilde(const Monomial& zword, double q, const ModuleSpaceModel& model);

/// The completely positive lift: compression Q sigma_tilde(word) Q to the
/// m >= 0 corner, expressed on the psi-side space.
SparseOperator sigma_hat(const Monomial& zword, double q, const ModuleSpaceModel& model);

/// Norm of (sigma_hat(word) - psi(matched y-word)) compressed to the
/// complement of the N-degree-R box (Fourier modes unconstrained).
double lift_residual(const Monomial& zword, double q, const ModuleSpaceModel& model, int R);

/// Exact spectral projection of a diagonal operator at the given value.
SparseOperator spectral_projection_diagonal(const SparseOperator& diag, double value,
                                            double rel_tol);

struct ReconstructionReport {
  SparseOperator built;
  double max_mismatch = 0.0;
  std::string word;
  Complex amplitude = 0.0;  // the constant normalized away
};

/// Builds the elementary operator p_{i1 j1} x ... x p_{il jl} x S^k from
/// spectral projections of the X_r and powers of the generators, and
/// compares it entry-wise with the directly constructed operator.
ReconstructionReport reconstruct_elementary(const std::vector<int>& i,
                                            const std::vector<int>& j, int k, double q,
                                            const Truncation& trunc);

struct Ev1Report {
  bool fourier_independent = false;
  long long mismatches = 0;
  double trace_mismatch = 0.0;
};

/// Evaluation-at-1 localization: collapsing the Fourier factor must carry
/// 2Q - I to sign(D_torus) as a diagonal +/-1 operator, entry-wise.
Ev1Report ev1_pullback_check(double q, const Truncation& trunc, int f_max);

}  // namespace qsph
