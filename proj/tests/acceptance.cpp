// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "qsph/dirac.hpp"
#include "qsph/extension.hpp"
#include "qsph/growth_graph.hpp"
#include "qsph/index_pairing.hpp"
#include "qsph/qoperators.hpp"

using namespace qsph;

namespace {

int failures = 0;

void report(int criterion, const char* what, bool ok) {
  std::printf("%s  criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, what);
  if (!ok) ++failures;
}

LatticePoint random_point(const Truncation& t, std::mt19937& rng) {
  std::vector<int> c;
  std::uniform_int_distribution<int> nd(0, t.n_max());
  std::uniform_int_distribution<int> md(-t.m_max(), t.m_max());
  for (int i = 0; i < t.ell(); ++i) c.push_back(nd(rng));
  c.push_back(md(rng));
  return LatticePoint(std::move(c));
}

// criteria 1 and 2: defining relations and torus covariance on the window
void relations_and_covariance() {
  bool relations_ok = true;
  bool covariance_ok = true;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
  for (int ell : {1, 2, 3}) {
    Truncation t(ell, 12, 12);
    for (double q : {0.3, 0.5, 0.8}) {
      const auto gens = build_generators(q, t);
      const auto rr = relation_residuals(gens);
      relations_ok = relations_ok && rr.max_interior() <= 1e-10 && rr.sphere <= 1e-12;
      for (int probe = 0; probe < 20; ++probe) {
        std::vector<Complex> w;
        for (int i = 0; i <= ell; ++i) w.push_back(std::polar(1.0, angle(rng)));
        covariance_ok = covariance_ok && covariance_residual(gens, w) <= 1e-12;
      }
    }
  }
  report(1, "defining relations: interior residuals <= 1e-10, sphere exact on the window",
         relations_ok);
  report(2, "torus covariance residual <= 1e-12 for 20 random phase vectors per (ell, q)",
         covariance_ok);
}

// criterion 3: boundedness characterization with closed-form suprema
void characterization() {
  bool ok = true;
  for (int ell : {1, 2, 3}) {
    Truncation t(ell, 12, 12);
    for (double q : {0.3, 0.5, 0.8}) {
      const auto rep = commutator_bound_check(d_torus(ell), q, t);
      ok = ok && rep.bounded;
      // closed form: for k <= ell the eigenvalue jump is always 1 and the
      // damping weight peaks at 1.  In the bilateral direction the step
      // m = -1 -> 0 over an N-prefix of degree s flips the sign of d, a
      // jump 2s+1 damped by q^s; s = 0 contributes the zero-policy jump
      // |-1 - 1/2| = 3/2.
      for (int k = 1; k <= ell; ++k) {
        ok = ok && std::abs(rep.sup_per_k[static_cast<std::size_t>(k - 1)] - 1.0) <= 1e-10;
      }
      double bilateral = 1.5;
      for (int s = 1; s <= ell * 12; ++s) {
        bilateral = std::max(bilateral, (2.0 * s + 1.0) * std::pow(q, s));
      }
      ok = ok && std::abs(rep.sup_per_k[static_cast<std::size_t>(ell)] - bilateral) <= 1e-10;
    }
  }
  // growing spectra must be flagged
  EquivariantDirac exp2{"exp2",
                        [](const LatticePoint& g) {
                          const double v = std::pow(2.0, g.coord(1));
                          return g.coord(g.size()) >= 0 ? v : -v;
                        },
                        0.5};
  EquivariantDirac degsq{"degree_squared",
                         [](const LatticePoint& g) {
                           const double v =
                               static_cast<double>(weighted_degree(g)) * weighted_degree(g);
                           return g.coord(g.size()) >= 0 ? v : -v;
                         },
                         0.5};
  Truncation t1(1, 12, 12);
  ok = ok && !commutator_bound_check(exp2, 0.5, t1).bounded;
  ok = ok && !commutator_bound_check(degsq, 0.5, t1).bounded;
  report(3, "commutator bound certificate: torus bounded with closed-form sups, "
            "exponential/quadratic spectra diverge",
         ok);
}

// criterion 4: index pairing trichotomy, stable across nested windows
void index_pairing() {
  bool ok = true;
  for (int ell : {1, 2, 3}) {
    for (int n : {8, 10, 12}) {
      Truncation t(ell, n, n);
      ok = ok && pairing(d_torus(ell), 0.5, t).index == -1;
      ok = ok && pairing(d_neg_torus(ell), 0.5, t).index == +1;
      ok = ok && pairing(d_abs_torus(ell), 0.5, t).index == 0;
    }
  }
  report(4, "index of PuP: -1 / +1 / 0 for the torus trichotomy, ell in {1,2,3}, "
            "3 nested windows",
         ok);
}

// criterion 5: summability - counting function and log-log slope
void summability() {
  bool ok = true;
  {
    Truncation t(1, 40, 40);
    for (int n = 1; n <= 30; ++n) {
      ok = ok && counting_function(d_torus(1), t, n) == count_ball_brute(1, n);
    }
    Truncation t2(2, 32, 32);
    for (int n = 1; n <= 30; ++n) {
      ok = ok && counting_function(d_torus(2), t2, n) == count_ball_brute(2, n);
    }
  }
  {
    Truncation t(1, 51, 51);
    ok = ok && std::abs(spectral_dimension_estimate(d_torus(1), t, 10, 50) - 2.0) < 0.1;
    Truncation t2(2, 91, 91);
    ok = ok && std::abs(spectral_dimension_estimate(d_torus(2), t2, 30, 90) - 3.0) < 0.1;
  }
  report(5, "eigenvalue counting equals ball counts (n <= 30); log-log slope within "
            "0.1 of ell+1",
         ok);
}

// criterion 6: sign classification and agreement of the two index routes
void sign_classification() {
  bool ok = true;
  {
    Truncation t(2, 10, 10);
    const auto p = classify_sign_pattern(d_torus(2), t);
    ok = ok && p.form == SignForm::A1UnionB;
    ok = ok && p.M == std::vector<int>{0, 0, 0};
    ok = ok && p.exceptional.size() == 1 &&
         p.exceptional[0] == LatticePoint({0, 0, 0});
    ok = ok && khomology_class(p) == -1 &&
         khomology_class(p) == fredholm_index(sign_projection(d_torus(2)), 2);
  }
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> md(0, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  const int ell = 2;
  Truncation t(ell, 10, 10);
  int done = 0;
  while (done < 50) {
    SignPattern p;
    p.ell = ell;
    p.M.clear();
    for (int i = 0; i <= ell; ++i) p.M.push_back(md(rng));
    p.form = static_cast<SignForm>(std::uniform_int_distribution<int>(0, 3)(rng));
    std::set<BIndex> chosen;
    for (int rep_i = 0; rep_i < 4; ++rep_i) {
      BIndex b;
      b.k = std::uniform_int_distribution<int>(1, ell)(rng);
      for (int r = b.k + 1; r <= ell; ++r) b.tail.push_back(md(rng));
      b.tail.push_back((coin(rng) ? 1 : -1) * md(rng));
      chosen.insert(b);
    }
    p.E.assign(chosen.begin(), chosen.end());
    if (coin(rng)) {
      p.exceptional.push_back(LatticePoint({0, 0, 0}));
    }
    ++done;
    EquivariantDirac D{"pattern",
                       [&p](const LatticePoint& g) { return p.positive(g) ? 1.0 : -1.0; },
                       0.5};
    try {
      const auto back = classify_sign_pattern(D, t, 5);
      bool same = back.form == p.form;
      t.for_each([&](const LatticePoint& gamma, std::size_t) {
        same = same && back.positive(gamma) == p.positive(gamma);
      });
      ok = ok && same;
      // independent routes: canonical-form class vs zero-line orbit index
      auto positive = [&p](const LatticePoint& gamma) { return p.positive(gamma); };
      ok = ok && khomology_class(back) == fredholm_index(positive, ell);
    } catch (const std::exception&) {
      ok = false;
    }
  }
  report(6, "sign classification: torus pattern is A1-union-B with M = 0 and "
            "exceptional {0}; 50 random patterns round-trip; class matches orbit index",
         ok);
}

// criterion 7: constructive path lemmas
void path_lemmas() {
  bool ok = true;
  std::mt19937 rng(5);
  for (int ell : {1, 2, 3}) {
    const auto D = d_torus(ell);
    Truncation t(ell, 6, 6);
    const auto bound = commutator_bound_check(D, 0.5, t);
    const GrowthGraph g = build_graph(D, bound.edge_constant(), t);
    std::uniform_int_distribution<int> kd(1, ell + 1);
    int done = 0;
    while (done < 100) {
      const int k = kd(rng);
      const LatticePoint from = random_point(t, rng);
      LatticePoint to = from;
      for (int j = 1; j < k; ++j) to.c[static_cast<std::size_t>(j - 1)] = 0;
      to.c[static_cast<std::size_t>(k - 1)] =
          k <= ell ? std::uniform_int_distribution<int>(0, t.n_max())(rng)
                   : std::uniform_int_distribution<int>(-t.m_max(), t.m_max())(rng);
      if (from == to) continue;
      ++done;
      long long expect = 1;
      for (int j = 1; j < k; ++j) expect += std::abs(from.coord(j));
      expect += std::abs(from.coord(k) - to.coord(k));
      try {
        const auto path = lemma_path(g, from, to, k);  // throws on a non-edge step
        ok = ok && static_cast<long long>(path.size()) == expect;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          ok = ok && g.is_edge(path[i], path[i + 1]);
        }
      } catch (const std::exception&) {
        ok = false;
      }
    }
  }
  report(7, "constructive paths: edge-valid with closed-form lengths on 100 random "
            "pairs per ell",
         ok);
}

// criterion 8: completely positive lift of the extension
void extension_lift() {
  bool ok = true;
  for (int ell : {1, 2}) {
    ModuleSpaceModel model(ell, ell == 1 ? 14 : 10, ell == 1 ? 14 : 10, 2);
    const auto w = Monomial::parse("z" + std::to_string(ell + 1));
    double prev = -1.0;
    for (int R = 1; R <= 5; ++R) {
      const double r = lift_residual(w, 0.5, model, R);
      if (prev >= 0.0) {
        ok = ok && r < prev;              // strictly decreasing
        ok = ok && r / prev <= 0.55;      // decay factor per unit R
      }
      prev = r;
    }
    // words in the first ell generators lift exactly
    for (int r = 1; r <= ell; ++r) {
      ok = ok && lift_residual(Monomial::parse("z" + std::to_string(r)), 0.5, model, 2) == 0.0;
    }
  }
  report(8, "extension lift: residual decays with factor <= 0.55 per unit R; pure "
            "z_1..z_ell words lift exactly",
         ok);
}

// criterion 9: reconstruction of elementary ideal operators
void ideal_reconstruction() {
  bool ok = true;
  for (int ell : {1, 2}) {
    Truncation t(ell, 6, 6);
    std::vector<int> i(static_cast<std::size_t>(ell), 0);
    std::vector<int> j(static_cast<std::size_t>(ell), 0);
    long long span = 1;
    for (int r = 0; r < 2 * ell; ++r) span *= 3;
    for (long long code = 0; code < span; ++code) {
      long long rem = code;
      for (int r = 0; r < ell; ++r) {
        i[static_cast<std::size_t>(r)] = static_cast<int>(rem % 3);
        rem /= 3;
      }
      for (int r = 0; r < ell; ++r) {
        j[static_cast<std::size_t>(r)] = static_cast<int>(rem % 3);
        rem /= 3;
      }
      for (int k = -2; k <= 2; ++k) {
        try {
          ok = ok && reconstruct_elementary(i, j, k, 0.5, t).max_mismatch <= 1e-10;
        } catch (const std::exception&) {
          ok = false;
        }
      }
    }
  }
  report(9, "elementary operators rebuilt from generator words to 1e-10, entries <= 2, "
            "|k| <= 2, ell in {1,2}",
         ok);
}

// criterion 10: evaluation-at-1 pullback
void ev1_pullback() {
  bool ok = true;
  for (int ell : {1, 2}) {
    Truncation t(ell, 8, 8);
    const auto rep = ev1_pullback_check(0.5, t, 3);
    ok = ok && rep.fourier_independent && rep.mismatches == 0;
  }
  report(10, "evaluation at 1 carries 2Q - I to sign(D) exactly on every basis vector",
         ok);
}

}  // namespace

int main() {
  relations_and_covariance();
  characterization();
  index_pairing();
  summability();
  sign_classification();
  path_lemmas();
  extension_lift();
  ideal_reconstruction();
  ev1_pullback();
  if (failures == 0) {
    std::printf("all 10 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", failures);
  return 1;
}
