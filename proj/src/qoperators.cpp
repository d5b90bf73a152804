#include "qsph/qoperators.hpp"

#include <cmath>
#include <stdexcept>

namespace qsph {

SparseOperator generator_z(int k, double q, const Truncation& trunc) {
  if (k < 1 || k > trunc.ell() + 1) {
    throw std::invalid_argument("generator_z: k out of range");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("generator_z: q must lie in (0,1)");
  }
  SparseOperator z(trunc.size());
  trunc.for_each([&](const LatticePoint& gamma, std::size_t col) {
    int prefix = 0;
    for (int i = 1; i < k; ++i) prefix += gamma.coord(i);
    double amp = std::pow(q, prefix);
    if (k <= trunc.ell()) {
      amp *= std::sqrt(1.0 - std::pow(q, 2 * gamma.coord(k) + 2));
    }
    const LatticePoint target = add_epsilon(gamma, k);
    if (auto row = trunc.index_of(target)) {
      z.set(*row, col, amp);
    }
  });
  return z;
}

GeneratorSet build_generators(double q, const Truncation& trunc) {
  GeneratorSet gens{q, trunc.ell(), trunc, {}};
  gens.z.reserve(static_cast<std::size_t>(trunc.ell() + 1));
  for (int k = 1; k <= trunc.ell() + 1; ++k) {
    gens.z.push_back(generator_z(k, q, trunc));
  }
  return gens;
}

SparseOperator torus_unitary(std::span<const Complex> w, const Truncation& trunc) {
  if (static_cast<int>(w.size()) != trunc.ell() + 1) {
    throw std::invalid_argument("torus_unitary: phase vector length mismatch");
  }
  for (const Complex& wi : w) {
    if (std::abs(std::abs(wi) - 1.0) > 1e-12) {
      throw std::invalid_argument("torus_unitary: non-unimodular phase");
    }
  }
  SparseOperator u(trunc.size());
  trunc.for_each([&](const LatticePoint& gamma, std::size_t idx) {
    Complex phase(1.0);
    for (int i = 1; i <= trunc.ell() + 1; ++i) {
      const int e = gamma.coord(i);
      // integer powers, including negative ones for the bilateral coordinate
      Complex p(1.0);
      const Complex base = e >= 0 ? w[static_cast<std::size_t>(i - 1)]
                                  : Complex(1.0) / w[static_cast<std::size_t>(i - 1)];
      for (int t = 0; t < std::abs(e); ++t) p *= base;
      phase *= p;
    }
    u.set(idx, idx, phase);
  });
  return u;
}

double covariance_residual(const GeneratorSet& gens, std::span<const Complex> w) {
  const SparseOperator u = torus_unitary(w, gens.trunc);
  const SparseOperator ustar = u.adjoint();
  double worst = 0.0;
  for (int k = 1; k <= gens.ell + 1; ++k) {
    const SparseOperator& zk = gens.z[static_cast<std::size_t>(k - 1)];
    const SparseOperator conj = multiply(u, multiply(zk, ustar));
    const SparseOperator diff = add(zk.scaled(w[static_cast<std::size_t>(k - 1)]), conj, 1.0, -1.0);
    worst = std::max(worst, op_norm(diff));
  }
  return worst;
}

namespace {

double max_interior_column_diff(const SparseOperator& lhs, const SparseOperator& rhs,
                                const Truncation& trunc, int margin) {
  double worst = 0.0;
  trunc.for_each([&](const LatticePoint& gamma, std::size_t col) {
    if (!trunc.is_interior(gamma, margin)) return;
    worst = std::max(worst, lhs.column_diff_norm(rhs, col));
  });
  return worst;
}

}  // namespace

double RelationResiduals::max_interior() const {
  return std::max(std::max(max_zz_twist, max_zzstar_twist), max_ladder);
}

RelationResiduals relation_residuals(const GeneratorSet& gens) {
  const Truncation& trunc = gens.trunc;
  const int ell = gens.ell;
  const double q = gens.q;
  const int margin = std::max(1, trunc.interior_margin());
  RelationResiduals out;

  std::vector<SparseOperator> zstar;
  zstar.reserve(static_cast<std::size_t>(ell + 1));
  for (const auto& zk : gens.z) zstar.push_back(zk.adjoint());

  auto record = [&out](const std::string& name, double r, double& family_max) {
    family_max = std::max(family_max, r);
    out.details.push_back({name, r});
  };

  // z_i z_j = q z_j z_i for j < i
  for (int i = 2; i <= ell + 1; ++i) {
    for (int j = 1; j < i; ++j) {
      const SparseOperator lhs = multiply(gens.z[static_cast<std::size_t>(i - 1)],
                                          gens.z[static_cast<std::size_t>(j - 1)]);
      const SparseOperator rhs = multiply(gens.z[static_cast<std::size_t>(j - 1)],
                                          gens.z[static_cast<std::size_t>(i - 1)]).scaled(q);
      record("z" + std::to_string(i) + " z" + std::to_string(j) + " = q z" +
                 std::to_string(j) + " z" + std::to_string(i),
             max_interior_column_diff(lhs, rhs, trunc, margin), out.max_zz_twist);
    }
  }

  // z_i* z_j = q z_j z_i* for i != j (the Vaksman-Soibelman convention
  // satisfied by this representation)
  for (int i = 1; i <= ell + 1; ++i) {
    for (int j = 1; j <= ell + 1; ++j) {
      if (i == j) continue;
      const SparseOperator lhs = multiply(zstar[static_cast<std::size_t>(i - 1)],
                                          gens.z[static_cast<std::size_t>(j - 1)]);
      const SparseOperator rhs = multiply(gens.z[static_cast<std::size_t>(j - 1)],
                                          zstar[static_cast<std::size_t>(i - 1)]).scaled(q);
      record("z" + std::to_string(i) + "* z" + std::to_string(j) + " = q z" +
                 std::to_string(j) + " z" + std::to_string(i) + "*",
             max_interior_column_diff(lhs, rhs, trunc, margin), out.max_zzstar_twist);
    }
  }

  // precompute the diagonals z_k z_k*
  std::vector<SparseOperator> zzstar;
  zzstar.reserve(static_cast<std::size_t>(ell + 1));
  for (int k = 1; k <= ell + 1; ++k) {
    zzstar.push_back(multiply(gens.z[static_cast<std::size_t>(k - 1)],
                              zstar[static_cast<std::size_t>(k - 1)]));
  }

  // z_i z_i* - z_i* z_i + (1-q^2) sum_{k>i} z_k z_k* = 0
  for (int i = 1; i <= ell + 1; ++i) {
    SparseOperator acc = add(zzstar[static_cast<std::size_t>(i - 1)],
                             multiply(zstar[static_cast<std::size_t>(i - 1)],
                                      gens.z[static_cast<std::size_t>(i - 1)]),
                             1.0, -1.0);
    for (int k = i + 1; k <= ell + 1; ++k) {
      acc = add(acc, zzstar[static_cast<std::size_t>(k - 1)], 1.0, 1.0 - q * q);
    }
    const SparseOperator zero(trunc.size());
    record("ladder relation i=" + std::to_string(i),
           max_interior_column_diff(acc, zero, trunc, margin), out.max_ladder);
  }

  // sum_i z_i z_i* = 1, checked on every window vector.  The bilateral
  // coordinate is two-sided, so compressing z_{ell+1} z_{ell+1}* to the
  // window loses the m = -m_max diagonal entry; evaluating the products one
  // bilateral step wider and reading off the nominal window restores the
  // exact corner compression for every reported column.
  const Truncation wide(ell, trunc.n_max(), trunc.m_max() + 1, trunc.interior_margin());
  SparseOperator sum(wide.size());
  for (int k = 1; k <= ell + 1; ++k) {
    const SparseOperator zk = generator_z(k, q, wide);
    sum = add(sum, multiply(zk, zk.adjoint()));
  }
  const SparseOperator id = SparseOperator::identity(wide.size());
  double sphere = 0.0;
  trunc.for_each([&](const LatticePoint& gamma, std::size_t) {
    const std::size_t col = *wide.index_of(gamma);
    sphere = std::max(sphere, sum.column_diff_norm(id, col));
  });
  out.sphere = sphere;
  out.details.push_back({"sphere relation sum z_i z_i* = 1", out.sphere});

  return out;
}

}  // namespace qsph
