#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qsph {

using Complex = std::complex<double>;

/// Column-major complex sparse matrix on a fixed finite-dimensional space.
/// Entries with modulus below kDropTol are dropped by the arithmetic
/// routines, so products of shift-type operators stay genuinely sparse.
class SparseOperator {
 public:
  static constexpr double kDropTol = 1e-15;

  using Column = std::map<std::size_t, Complex>;

  explicit SparseOperator(std::size_t dim) : dim_(dim), cols_(dim) {}

  static SparseOperator identity(std::size_t dim);

  std::size_t dim() const { return dim_; }

  void set(std::size_t row, std::size_t col, Complex amp);
  void add_to(std::size_t row, std::size_t col, Complex amp);
  Complex entry(std::size_t row, std::size_t col) const;
  const Column& col(std::size_t c) const { return cols_[c]; }

  std::size_t nnz() const;
  double max_abs_entry() const;

  SparseOperator adjoint() const;
  SparseOperator scaled(Complex alpha) const;

  /// l2 norm of (this - other) restricted to column c.
  double column_diff_norm(const SparseOperator& other, std::size_t c) const;
  double column_norm(std::size_t c) const;

  std::vector<Complex> apply(std::span<const Complex> x) const;
  std::vector<Complex> apply_adjoint(std::span<const Complex> x) const;

  /// True when every column has at most one entry and no two columns share
  /// a row: a weighted partial permutation, whose largest singular value is
  /// exactly the largest entry modulus.
  bool is_partial_permutation() const;

  /// Coordinate-list text dump: `row col re im` per line after a header.
  void dump(std::ostream& os, const std::string& header) const;

  friend SparseOperator multiply(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator add(const SparseOperator& a, const SparseOperator& b,
                            Complex alpha, Complex beta);

 private:
  std::size_t dim_;
  std::vector<Column> cols_;
};

SparseOperator multiply(const SparseOperator& a, const SparseOperator& b);
SparseOperator add(const SparseOperator& a, const SparseOperator& b,
                   Complex alpha = 1.0, Complex beta = 1.0);

struct OpNormOptions {
  double rel_tol = 1e-10;
  int max_iter = 10000;
};

/// Largest singular value on the truncated space.  Weighted partial
/// permutations are resolved exactly from the entry list; otherwise power
/// iteration on A*A from the deterministic all-ones start vector.  Throws
/// on non-convergence within the iteration cap.
double op_norm(const SparseOperator& a, const OpNormOptions& opts = {});

}  // namespace qsph
