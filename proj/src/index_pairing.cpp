#include "qsph/index_pairing.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace qsph {

namespace {

bool on_zero_line(const LatticePoint& gamma, int ell) {
  for (int i = 1; i <= ell; ++i) {
    if (gamma.coord(i) != 0) return false;
  }
  return true;
}

LatticePoint zero_line_point(int ell, int m) {
  std::vector<int> c(static_cast<std::size_t>(ell + 1), 0);
  c[static_cast<std::size_t>(ell)] = m;
  return LatticePoint(std::move(c));
}

}  // namespace

BasisPartialMap combinatorial_u(int ell) {
  BasisPartialMap u;
  u.describe = "e_gamma -> e_{gamma+eps_{ell+1}} on the zero line, identity elsewhere";
  u.apply = [ell](const LatticePoint& gamma) -> std::optional<LatticePoint> {
    if (on_zero_line(gamma, ell)) return add_epsilon(gamma, ell + 1);
    return gamma;
  };
  u.apply_inverse = [ell](const LatticePoint& gamma) -> std::optional<LatticePoint> {
    if (on_zero_line(gamma, ell)) {
      LatticePoint p = gamma;
      --p.c[static_cast<std::size_t>(ell)];
      return p;
    }
    return gamma;
  };
  return u;
}

UnitaryU build_u(double q, const Truncation& trunc, const GeneratorSet& gens) {
  if (gens.ell != trunc.ell()) throw std::invalid_argument("build_u: truncation mismatch");
  const int ell = trunc.ell();
  const SparseOperator& z = gens.z[static_cast<std::size_t>(ell)];
  const SparseOperator zstarz = multiply(z.adjoint(), z);

  // chi_{1}(z* z): the truncated spectrum is {q^{2s}} plus window-edge
  // zeros, so the eigenvalue-1 projection is exact.
  SparseOperator chi(trunc.size());
  const double gap = 0.5 * (1.0 - q * q);
  for (std::size_t i = 0; i < trunc.size(); ++i) {
    if (std::abs(zstarz.entry(i, i).real() - 1.0) < gap) chi.set(i, i, 1.0);
  }

  const SparseOperator id = SparseOperator::identity(trunc.size());
  // u = chi (z - 1) + 1 = chi z - chi + 1
  SparseOperator u_op = add(add(multiply(chi, z), chi, 1.0, -1.0), id);

  const BasisPartialMap u_map = combinatorial_u(ell);

  // Compare the routes entry-wise.  Zero-line columns within two steps of
  // the top of the bilateral window are truncation artifacts of the
  // spectral projection and are skipped.
  double worst = 0.0;
  trunc.for_each([&](const LatticePoint& gamma, std::size_t col) {
    if (on_zero_line(gamma, ell) && gamma.coord(ell + 1) > trunc.m_max() - 2) return;
    SparseOperator expect(trunc.size());
    if (auto target = u_map.apply(gamma)) {
      if (auto row = trunc.index_of(*target)) expect.set(*row, col, 1.0);
    }
    worst = std::max(worst, u_op.column_diff_norm(expect, col));
  });
  if (worst > 1e-12) {
    throw std::runtime_error("build_u: combinatorial and functional-calculus routes disagree (" +
                             std::to_string(worst) + ")");
  }
  return {std::move(u_op), u_map};
}

std::function<bool(const LatticePoint&)> sign_projection(const EquivariantDirac& D) {
  return [&D](const LatticePoint& gamma) { return D(gamma) > 0.0; };
}

int fredholm_index(const std::function<bool(const LatticePoint&)>& positive, int ell,
                   int scan_radius, int tail_certificate) {
  // u moves only the zero line, by one step upward; everywhere else PuP is
  // the identity on Gamma+ and contributes nothing.  On the line, kernel
  // points are positives whose successor is negative, cokernel points are
  // positives whose predecessor is negative.
  auto pos = [&](int m) { return positive(zero_line_point(ell, m)); };

  for (int m = scan_radius - tail_certificate; m < scan_radius; ++m) {
    if (pos(m) != pos(scan_radius) || pos(-m) != pos(-scan_radius)) {
      throw std::runtime_error("fredholm_index: sign not constant on the scan tails; "
                               "increase scan_radius");
    }
  }
  int kernel = 0;
  int cokernel = 0;
  for (int m = -scan_radius; m <= scan_radius; ++m) {
    if (!pos(m)) continue;
    if (!pos(m + 1)) ++kernel;
    if (!pos(m - 1)) ++cokernel;
  }
  return kernel - cokernel;
}

int fredholm_index_window(const EquivariantDirac& D, const SparseOperator& u_op,
                          const Truncation& trunc) {
  const int ell = trunc.ell();
  // PuP with P from sign(d); index counted only over certifiable zero-line
  // slots, m in [-m_max+1, m_max-2], so edge-truncated columns are ignored.
  auto certifiable = [&](const LatticePoint& gamma) {
    if (!on_zero_line(gamma, ell)) return true;
    const int m = gamma.coord(ell + 1);
    return m >= -trunc.m_max() + 1 && m <= trunc.m_max() - 2;
  };

  std::unordered_set<std::size_t> hit_rows;
  int kernel = 0;
  trunc.for_each([&](const LatticePoint& gamma, std::size_t col) {
    if (!(D(gamma) > 0.0)) return;
    // column of PuP: entries of u in positive rows.  Hits are collected
    // from every positive column; the kernel is counted only over
    // certifiable columns, since edge-truncated columns go to zero as a
    // window artifact.
    bool any = false;
    for (const auto& [row, amp] : u_op.col(col)) {
      if (std::abs(amp) < 1e-12) continue;
      const LatticePoint target = trunc.point_at(row);
      if (D(target) > 0.0) {
        hit_rows.insert(row);
        any = true;
      }
    }
    if (!any && certifiable(gamma)) ++kernel;
  });
  int cokernel = 0;
  trunc.for_each([&](const LatticePoint& gamma, std::size_t row) {
    if (!(D(gamma) > 0.0) || !certifiable(gamma)) return;
    if (!hit_rows.count(row)) ++cokernel;
  });
  return kernel - cokernel;
}

PairingReport pairing(const EquivariantDirac& D, double q, const Truncation& trunc) {
  const GeneratorSet gens = build_generators(q, trunc);
  const UnitaryU u = build_u(q, trunc, gens);
  const auto positive = sign_projection(D);

  PairingReport rep;
  rep.dirac_name = D.name;
  rep.ell = trunc.ell();
  rep.q = q;
  rep.index = fredholm_index(positive, trunc.ell());
  rep.index_window = fredholm_index_window(D, u.op, trunc);
  if (rep.index != rep.index_window) {
    throw std::runtime_error("pairing: combinatorial index " + std::to_string(rep.index) +
                             " disagrees with window support analysis " +
                             std::to_string(rep.index_window));
  }
  if (rep.index < -1 || rep.index > 1) {
    throw std::runtime_error("pairing: index outside {-1, 0, +1}");
  }
  return rep;
}

}  // namespace qsph
