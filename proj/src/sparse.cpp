#include "qsph/sparse.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace qsph {

SparseOperator SparseOperator::identity(std::size_t dim) {
  SparseOperator id(dim);
  for (std::size_t i = 0; i < dim; ++i) id.cols_[i][i] = 1.0;
  return id;
}

void SparseOperator::set(std::size_t row, std::size_t col, Complex amp) {
  if (row >= dim_ || col >= dim_) throw std::out_of_range("SparseOperator::set");
  if (std::abs(amp) < kDropTol) {
    cols_[col].erase(row);
  } else {
    cols_[col][row] = amp;
  }
}

void SparseOperator::add_to(std::size_t row, std::size_t col, Complex amp) {
  if (row >= dim_ || col >= dim_) throw std::out_of_range("SparseOperator::add_to");
  auto& cell = cols_[col][row];
  cell += amp;
  if (std::abs(cell) < kDropTol) cols_[col].erase(row);
}

Complex SparseOperator::entry(std::size_t row, std::size_t col) const {
  const auto& c = cols_[col];
  auto it = c.find(row);
  return it == c.end() ? Complex(0.0) : it->second;
}

std::size_t SparseOperator::nnz() const {
  std::size_t n = 0;
  for (const auto& c : cols_) n += c.size();
  return n;
}

double SparseOperator::max_abs_entry() const {
  double m = 0.0;
  for (const auto& c : cols_) {
    for (const auto& [r, v] : c) m = std::max(m, std::abs(v));
  }
  return m;
}

SparseOperator SparseOperator::adjoint() const {
  SparseOperator out(dim_);
  for (std::size_t c = 0; c < dim_; ++c) {
    for (const auto& [r, v] : cols_[c]) out.cols_[r][c] = std::conj(v);
  }
  return out;
}

SparseOperator SparseOperator::scaled(Complex alpha) const {
  SparseOperator out(dim_);
  for (std::size_t c = 0; c < dim_; ++c) {
    for (const auto& [r, v] : cols_[c]) {
      const Complex w = alpha * v;
      if (std::abs(w) >= kDropTol) out.cols_[c][r] = w;
    }
  }
  return out;
}

double SparseOperator::column_diff_norm(const SparseOperator& other, std::size_t c) const {
  double s = 0.0;
  const auto& a = cols_[c];
  const auto& b = other.cols_[c];
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      s += std::norm(ia->second);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      s += std::norm(ib->second);
      ++ib;
    } else {
      s += std::norm(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return std::sqrt(s);
}

double SparseOperator::column_norm(std::size_t c) const {
  double s = 0.0;
  for (const auto& [r, v] : cols_[c]) s += std::norm(v);
  return std::sqrt(s);
}

std::vector<Complex> SparseOperator::apply(std::span<const Complex> x) const {
  if (x.size() != dim_) throw std::invalid_argument("SparseOperator::apply: size mismatch");
  std::vector<Complex> y(dim_, Complex(0.0));
  for (std::size_t c = 0; c < dim_; ++c) {
    const Complex xc = x[c];
    if (xc == Complex(0.0)) continue;
    for (const auto& [r, v] : cols_[c]) y[r] += v * xc;
  }
  return y;
}

std::vector<Complex> SparseOperator::apply_adjoint(std::span<const Complex> x) const {
  if (x.size() != dim_) throw std::invalid_argument("SparseOperator::apply_adjoint: size mismatch");
  std::vector<Complex> y(dim_, Complex(0.0));
  for (std::size_t c = 0; c < dim_; ++c) {
    Complex acc(0.0);
    for (const auto& [r, v] : cols_[c]) acc += std::conj(v) * x[r];
    y[c] = acc;
  }
  return y;
}

bool SparseOperator::is_partial_permutation() const {
  std::unordered_set<std::size_t> rows;
  for (const auto& c : cols_) {
    if (c.size() > 1) return false;
    if (c.size() == 1 && !rows.insert(c.begin()->first).second) return false;
  }
  return true;
}

void SparseOperator::dump(std::ostream& os, const std::string& header) const {
  os << "# " << header << "\n";
  for (std::size_t c = 0; c < dim_; ++c) {
    for (const auto& [r, v] : cols_[c]) {
      os << r << " " << c << " " << v.real() << " " << v.imag() << "\n";
    }
  }
}

SparseOperator multiply(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("multiply: truncation mismatch");
  SparseOperator out(a.dim_);
  for (std::size_t c = 0; c < b.dim_; ++c) {
    auto& dest = out.cols_[c];
    for (const auto& [k, bv] : b.cols_[c]) {
      for (const auto& [r, av] : a.cols_[k]) {
        dest[r] += av * bv;
      }
    }
    for (auto it = dest.begin(); it != dest.end();) {
      if (std::abs(it->second) < SparseOperator::kDropTol) {
        it = dest.erase(it);
      } else {
        ++it;
      }
    }
  }
  return out;
}

SparseOperator add(const SparseOperator& a, const SparseOperator& b, Complex alpha, Complex beta) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("add: truncation mismatch");
  SparseOperator out(a.dim_);
  for (std::size_t c = 0; c < a.dim_; ++c) {
    auto& dest = out.cols_[c];
    for (const auto& [r, v] : a.cols_[c]) dest[r] += alpha * v;
    for (const auto& [r, v] : b.cols_[c]) dest[r] += beta * v;
    for (auto it = dest.begin(); it != dest.end();) {
      if (std::abs(it->second) < SparseOperator::kDropTol) {
        it = dest.erase(it);
      } else {
        ++it;
      }
    }
  }
  return out;
}

double op_norm(const SparseOperator& a, const OpNormOptions& opts) {
  const double top = a.max_abs_entry();
  if (top == 0.0) return 0.0;
  if (a.is_partial_permutation()) return top;

  const std::size_t n = a.dim();
  std::vector<Complex> v(n, Complex(1.0 / std::sqrt(static_cast<double>(n))));
  double lambda_prev = -1.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    std::vector<Complex> w = a.apply(v);
    double wn2 = 0.0;
    for (const Complex& x : w) wn2 += std::norm(x);
    const double lambda = wn2;  // v normalized, so ||Av||^2 is the Rayleigh quotient of A*A
    if (lambda == 0.0) return 0.0;
    if (lambda_prev >= 0.0 && std::abs(lambda - lambda_prev) <= opts.rel_tol * lambda) {
      return std::sqrt(lambda);
    }
    lambda_prev = lambda;
    std::vector<Complex> s = a.apply_adjoint(w);
    double sn2 = 0.0;
    for (const Complex& x : s) sn2 += std::norm(x);
    const double sn = std::sqrt(sn2);
    if (sn == 0.0) return 0.0;
    for (Complex& x : s) x /= sn;
    v = std::move(s);
  }
  throw std::runtime_error("op_norm: power iteration did not converge within cap");
}

}  // namespace qsph
