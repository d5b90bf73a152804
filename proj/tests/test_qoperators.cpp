#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "qsph/qoperators.hpp"

using namespace qsph;

namespace {

std::size_t idx(const Truncation& t, std::vector<int> coords) {
  return t.index_of(LatticePoint(std::move(coords))).value();
}

}  // namespace

TEST_CASE("generator coefficients, ell = 1") {
  Truncation t(1, 8, 8);
  const double q = 0.5;
  const auto z1 = generator_z(1, q, t);
  const auto z2 = generator_z(2, q, t);

  // z1 e_(0,0) = sqrt(1 - q^2) e_(1,0)
  CHECK(z1.entry(idx(t, {1, 0}), idx(t, {0, 0})).real() ==
        doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
  // z2 e_(3,m) = q^3 e_(3,m+1)
  CHECK(z2.entry(idx(t, {3, 1}), idx(t, {3, 0})).real() == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(z2.entry(idx(t, {3, -2}), idx(t, {3, -3})).real() ==
        doctest::Approx(0.125).epsilon(1e-12));
  // window edge: raising out of the window gives a zero column
  CHECK(z1.col(idx(t, {8, 0})).empty());
  CHECK(z2.col(idx(t, {0, 8})).empty());
}

TEST_CASE("adjoint and products of generators") {
  Truncation t(1, 8, 8);
  const auto z2 = generator_z(2, 0.5, t);
  const auto z2s = z2.adjoint();
  CHECK(z2s.entry(idx(t, {3, 0}), idx(t, {3, 1})).real() == doctest::Approx(0.125));
  const auto d = multiply(z2s, z2);
  CHECK(d.entry(idx(t, {3, 0}), idx(t, {3, 0})).real() == doctest::Approx(0.015625));
}

TEST_CASE("generator norms on the window") {
  Truncation t(1, 8, 8);
  const double q = 0.5;
  const auto z1 = generator_z(1, q, t);
  // the largest surviving coefficient sits on the column gamma(1) = n_max - 1;
  // the gamma(1) = n_max column is dropped by the window
  CHECK(op_norm(z1) == doctest::Approx(std::sqrt(1.0 - std::pow(q, 16))).epsilon(1e-12));
  const auto z2 = generator_z(2, q, t);
  CHECK(op_norm(z2) == doctest::Approx(1.0).epsilon(1e-12));
  for (int ell = 1; ell <= 2; ++ell) {
    Truncation tt(ell, 5, 5);
    for (int k = 1; k <= ell + 1; ++k) {
      CHECK(op_norm(generator_z(k, 0.7, tt)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("generator_z validates its arguments") {
  Truncation t(1, 4, 4);
  CHECK_THROWS_AS(generator_z(0, 0.5, t), std::invalid_argument);
  CHECK_THROWS_AS(generator_z(3, 0.5, t), std::invalid_argument);
  CHECK_THROWS_AS(generator_z(1, 0.0, t), std::invalid_argument);
  CHECK_THROWS_AS(generator_z(1, 1.0, t), std::invalid_argument);
}

TEST_CASE("z_k z_k* is the diagonal X_{k-1}^2 - X_k^2") {
  const double q = 0.6;
  for (int ell = 1; ell <= 2; ++ell) {
    Truncation t(ell, 6, 6);
    const auto gens = build_generators(q, t);
    for (int k = 1; k <= ell + 1; ++k) {
      const auto zzs = multiply(gens.z[static_cast<std::size_t>(k - 1)],
                                gens.z[static_cast<std::size_t>(k - 1)].adjoint());
      t.for_each([&](const LatticePoint& gamma, std::size_t i) {
        int prefix = 0;
        for (int r = 1; r < k; ++r) prefix += gamma.coord(r);
        double expect = std::pow(q, 2 * prefix);
        if (k <= ell) expect *= 1.0 - std::pow(q, 2 * gamma.coord(k));
        // z_k* lowers coordinate k; at the lower window edge the column is
        // dropped and the diagonal entry is zero (for k <= ell the closed
        // form already vanishes there)
        LatticePoint down = gamma;
        --down.c[static_cast<std::size_t>(k - 1)];
        if (!t.contains(down)) expect = 0.0;
        CHECK(std::abs(zzs.entry(i, i).real() - expect) < 1e-12);
      });
    }
  }
}

TEST_CASE("defining relations hold on the interior, sphere relation everywhere") {
  for (int ell = 1; ell <= 2; ++ell) {
    for (double q : {0.3, 0.7}) {
      CAPTURE(ell);
      CAPTURE(q);
      Truncation t(ell, 8, 8);
      const auto rr = relation_residuals(build_generators(q, t));
      CHECK(rr.max_zz_twist <= 1e-12);
      CHECK(rr.max_zzstar_twist <= 1e-12);
      CHECK(rr.max_ladder <= 1e-12);
      CHECK(rr.sphere <= 1e-12);
      CHECK(rr.max_interior() <= 1e-12);
      CHECK(rr.details.size() > 0);
    }
  }
}

TEST_CASE("z_{ell+1} is normal on interior vectors") {
  Truncation t(1, 8, 8);
  const auto gens = build_generators(0.5, t);
  const auto& z = gens.z[1];
  const auto comm = add(multiply(z.adjoint(), z), multiply(z, z.adjoint()), 1.0, -1.0);
  t.for_each([&](const LatticePoint& gamma, std::size_t i) {
    if (!t.is_interior(gamma, 1)) return;
    CHECK(comm.column_norm(i) <= 1e-12);
  });
}

TEST_CASE("torus unitary and covariance") {
  Truncation t(1, 6, 6);
  const auto gens = build_generators(0.5, t);

  SUBCASE("trivial phases give the identity") {
    std::vector<Complex> w = {1.0, 1.0};
    const auto u = torus_unitary(w, t);
    CHECK(add(u, SparseOperator::identity(t.size()), 1.0, -1.0).max_abs_entry() == 0.0);
    CHECK(covariance_residual(gens, w) <= 1e-12);
  }

  SUBCASE("example w = (i, 1)") {
    std::vector<Complex> w = {Complex(0.0, 1.0), 1.0};
    const auto u = torus_unitary(w, t);
    const auto i3 = t.index_of(LatticePoint({3, 0})).value();
    CHECK(std::abs(u.entry(i3, i3) - Complex(0.0, -1.0)) < 1e-12);  // i^3
    CHECK(covariance_residual(gens, w) <= 1e-12);
  }

  SUBCASE("sign flip on the bilateral generator") {
    std::vector<Complex> w = {1.0, -1.0};
    CHECK(covariance_residual(gens, w) <= 1e-12);
  }

  SUBCASE("random phase vectors") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 2.0 * 3.14159265358979);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<Complex> w = {std::polar(1.0, dist(rng)), std::polar(1.0, dist(rng))};
      CHECK(covariance_residual(gens, w) <= 1e-12);
    }
  }

  SUBCASE("non-unimodular phases are rejected") {
    std::vector<Complex> w = {2.0, 1.0};
    CHECK_THROWS_AS(torus_unitary(w, t), std::invalid_argument);
  }
}
