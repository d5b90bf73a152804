#include "qsph/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qsph {

EquivariantDirac d_torus(int ell) {
  (void)ell;
  return {"torus",
          [](const LatticePoint& gamma) {
            const int deg = weighted_degree(gamma);
            return gamma.coord(gamma.size()) >= 0 ? static_cast<double>(deg)
                                                  : -static_cast<double>(deg);
          },
          0.5};
}

EquivariantDirac d_neg_torus(int ell) {
  EquivariantDirac base = d_torus(ell);
  return {"neg_torus",
          [f = base.raw](const LatticePoint& gamma) { return -f(gamma); }, -0.5};
}

EquivariantDirac d_abs_torus(int ell) {
  (void)ell;
  return {"abs_torus",
          [](const LatticePoint& gamma) { return weighted_degree(gamma) + 0.5; }, 0.5};
}

SparseOperator diagonal_of(const EquivariantDirac& D, const Truncation& trunc) {
  SparseOperator out(trunc.size());
  trunc.for_each([&](const LatticePoint& gamma, std::size_t idx) {
    out.set(idx, idx, D(gamma));
  });
  return out;
}

double BoundednessReport::edge_constant() const {
  double c = 0.0;
  for (double s : sup_per_k) c = std::max(c, s);
  return c;
}

namespace {

std::vector<double> weighted_diff_sups(const EquivariantDirac& D, double q,
                                       const Truncation& trunc) {
  const int ell = trunc.ell();
  std::vector<double> sups(static_cast<std::size_t>(ell + 1), 0.0);
  trunc.for_each([&](const LatticePoint& gamma, std::size_t) {
    const double d0 = D(gamma);
    double weight = 1.0;
    for (int k = 1; k <= ell + 1; ++k) {
      const double diff = std::abs(D(add_epsilon(gamma, k)) - d0);
      sups[static_cast<std::size_t>(k - 1)] =
          std::max(sups[static_cast<std::size_t>(k - 1)], diff * weight);
      if (k <= ell) weight *= std::pow(q, gamma.coord(k));
    }
  });
  return sups;
}

// Nested sub-window sizes: roughly quarters of the full window, at least 1.
std::vector<int> nested_sizes(int n_max, int m_max) {
  const int full = std::min(n_max, m_max);
  std::vector<int> sizes;
  for (int t = 1; t <= 4; ++t) {
    const int s = std::max(1, full * t / 4);
    if (sizes.empty() || sizes.back() != s) sizes.push_back(s);
  }
  return sizes;
}

}  // namespace

BoundednessReport commutator_bound_check(const EquivariantDirac& D, double q,
                                         const Truncation& trunc) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("commutator_bound_check: bad q");
  BoundednessReport rep;
  const int ell = trunc.ell();
  rep.trend.assign(static_cast<std::size_t>(ell + 1), {});
  for (int s : nested_sizes(trunc.n_max(), trunc.m_max())) {
    rep.window_sizes.push_back(s);
    const Truncation sub(ell, std::min(s, trunc.n_max()), std::min(s, trunc.m_max()), 0);
    const auto sups = weighted_diff_sups(D, q, sub);
    for (int k = 0; k <= ell; ++k) {
      rep.trend[static_cast<std::size_t>(k)].push_back(sups[static_cast<std::size_t>(k)]);
    }
  }
  rep.sup_per_k = weighted_diff_sups(D, q, trunc);

  // Bounded verdict: relative growth below threshold over the last two
  // window increments, for every k.
  rep.bounded = true;
  for (int k = 0; k <= ell; ++k) {
    const auto& tr = rep.trend[static_cast<std::size_t>(k)];
    const std::size_t n = tr.size();
    if (n < 3) continue;
    for (std::size_t i = n - 2; i < n; ++i) {
      const double prev = tr[i - 1];
      const double cur = tr[i];
      const double denom = std::max(cur, 1e-300);
      if ((cur - prev) / denom >= rep.trend_threshold) rep.bounded = false;
    }
  }
  return rep;
}

std::vector<double> commutator_norms(const EquivariantDirac& D, const GeneratorSet& gens) {
  const SparseOperator diag = diagonal_of(D, gens.trunc);
  std::vector<double> norms;
  norms.reserve(gens.z.size());
  for (const auto& zk : gens.z) {
    const SparseOperator comm = add(multiply(diag, zk), multiply(zk, diag), 1.0, -1.0);
    norms.push_back(op_norm(comm));
  }
  return norms;
}

long long counting_function(const EquivariantDirac& D, const Truncation& trunc, double n) {
  long long count = 0;
  bool exits = false;
  trunc.for_each([&](const LatticePoint& gamma, std::size_t) {
    if (std::abs(D(gamma)) <= n) {
      ++count;
      if (!trunc.is_interior(gamma, 1)) exits = true;
    }
  });
  if (exits) {
    throw BallExitsWindow("counting_function: the ball {|d| <= n} touches the window boundary");
  }
  return count;
}

double spectral_dimension_estimate(const EquivariantDirac& D, const Truncation& trunc,
                                   int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi <= n_lo) {
    throw std::invalid_argument("spectral_dimension_estimate: bad range");
  }
  // one pass: sort |d| over the window, then count by binary search
  std::vector<double> values;
  values.reserve(trunc.size());
  double boundary_min = std::numeric_limits<double>::infinity();
  trunc.for_each([&](const LatticePoint& gamma, std::size_t) {
    const double v = std::abs(D(gamma));
    values.push_back(v);
    if (!trunc.is_interior(gamma, 1)) boundary_min = std::min(boundary_min, v);
  });
  if (static_cast<double>(n_hi) >= boundary_min) {
    throw BallExitsWindow("spectral_dimension_estimate: range reaches the window boundary");
  }
  std::sort(values.begin(), values.end());

  std::vector<double> xs, ys;
  for (int n = n_lo; n <= n_hi; ++n) {
    const auto it = std::upper_bound(values.begin(), values.end(), static_cast<double>(n));
    const long long count = static_cast<long long>(it - values.begin());
    if (count <= 0) continue;
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(static_cast<double>(count)));
  }
  if (xs.size() < 2) throw std::invalid_argument("spectral_dimension_estimate: empty counts");
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= static_cast<double>(xs.size());
  ym /= static_cast<double>(ys.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - xm) * (ys[i] - ym);
    den += (xs[i] - xm) * (xs[i] - xm);
  }
  return num / den;
}

namespace {

// (a, b) for one window: b is the steepest chord slope of the degreewise
// maxima h(t) = max{|d| : degree = t}, a the resulting offset.
std::pair<double, double> affine_envelope(const EquivariantDirac& D, const Truncation& trunc) {
  std::vector<double> h;
  trunc.for_each([&](const LatticePoint& gamma, std::size_t) {
    const int t = weighted_degree(gamma);
    if (t >= static_cast<int>(h.size())) h.resize(static_cast<std::size_t>(t + 1), -1.0);
    h[static_cast<std::size_t>(t)] = std::max(h[static_cast<std::size_t>(t)], std::abs(D(gamma)));
  });
  double b = 0.0;
  for (std::size_t t1 = 0; t1 < h.size(); ++t1) {
    if (h[t1] < 0.0) continue;
    for (std::size_t t2 = t1 + 1; t2 < h.size(); ++t2) {
      if (h[t2] < 0.0) continue;
      b = std::max(b, (h[t2] - h[t1]) / static_cast<double>(t2 - t1));
    }
  }
  double a = 0.0;
  for (std::size_t t = 0; t < h.size(); ++t) {
    if (h[t] >= 0.0) a = std::max(a, h[t] - b * static_cast<double>(t));
  }
  return {a, b};
}

}  // namespace

OptimalityReport optimality_check(const EquivariantDirac& D, const Truncation& trunc) {
  OptimalityReport rep;
  for (int s : nested_sizes(trunc.n_max(), trunc.m_max())) {
    const Truncation sub(trunc.ell(), std::min(s, trunc.n_max()), std::min(s, trunc.m_max()), 0);
    const auto [a, b] = affine_envelope(D, sub);
    rep.a_trend.push_back(a);
    rep.b_trend.push_back(b);
  }
  const auto [a, b] = affine_envelope(D, trunc);
  rep.a = a;
  rep.b = b;
  const std::size_t n = rep.b_trend.size();
  rep.linear = n >= 2 && std::abs(rep.b_trend[n - 1] - rep.b_trend[n - 2]) <= 1e-9 &&
               std::abs(rep.a_trend[n - 1] - rep.a_trend[n - 2]) <= 1e-9;
  return rep;
}

}  // namespace qsph
