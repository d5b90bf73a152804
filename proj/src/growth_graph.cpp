#include "qsph/growth_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qsph {

GrowthGraph::GrowthGraph(const EquivariantDirac& D, double c, Truncation trunc)
    : D_(&D), c_(c), trunc_(std::move(trunc)) {
  if (!(c > 0.0)) throw std::invalid_argument("GrowthGraph: c must be positive");
}

bool GrowthGraph::is_edge(const LatticePoint& a, const LatticePoint& b) const {
  if (a == b) return false;
  if (!trunc_.contains(a) || !trunc_.contains(b)) return false;
  return std::abs((*D_)(a) - (*D_)(b)) <= c_;
}

std::vector<LatticePoint> GrowthGraph::generator_neighbors(const LatticePoint& gamma) const {
  std::vector<LatticePoint> out;
  for (int k = 1; k <= trunc_.ell() + 1; ++k) {
    LatticePoint up = add_epsilon(gamma, k);
    if (is_edge(gamma, up)) out.push_back(std::move(up));
    LatticePoint down = gamma;
    --down.c[static_cast<std::size_t>(k - 1)];
    if (is_edge(gamma, down)) out.push_back(std::move(down));
  }
  return out;
}

GrowthGraph build_graph(const EquivariantDirac& D, double c, const Truncation& trunc) {
  return GrowthGraph(D, c, trunc);
}

std::vector<LatticePoint> lemma_path(const GrowthGraph& g, const LatticePoint& gamma,
                                     const LatticePoint& gamma_prime, int k) {
  const int n = gamma.size();
  if (gamma_prime.size() != n || k < 1 || k > n) {
    throw std::invalid_argument("lemma_path: bad arguments");
  }
  if (gamma == gamma_prime) return {};
  for (int r = k + 1; r <= n; ++r) {
    if (gamma.coord(r) != gamma_prime.coord(r)) {
      throw std::invalid_argument("lemma_path: points differ beyond coordinate k");
    }
  }
  auto zero_prefixed = [k](const LatticePoint& p) {
    for (int j = 1; j < k; ++j) {
      if (p.coord(j) != 0) return false;
    }
    return true;
  };
  bool reversed = false;
  LatticePoint from = gamma;
  LatticePoint to = gamma_prime;
  if (!zero_prefixed(to)) {
    if (!zero_prefixed(from)) {
      throw std::invalid_argument("lemma_path: neither endpoint has a zero prefix");
    }
    std::swap(from, to);
    reversed = true;
  }

  std::vector<LatticePoint> path;
  path.push_back(from);
  auto step_to = [&](int coordinate, int target) {
    while (path.back().coord(coordinate) != target) {
      LatticePoint next = path.back();
      int& v = next.c[static_cast<std::size_t>(coordinate - 1)];
      v += target > v ? 1 : -1;
      if (!g.is_edge(path.back(), next)) {
        throw std::logic_error("lemma_path: constructed step is not a graph edge");
      }
      path.push_back(std::move(next));
    }
  };
  for (int j = 1; j < k; ++j) step_to(j, 0);
  step_to(k, to.coord(k));
  if (reversed) std::reverse(path.begin(), path.end());
  return path;
}

std::string to_string(SignForm f) {
  switch (f) {
    case SignForm::A1UnionB: return "A1_UNION_B";
    case SignForm::A2UnionB: return "A2_UNION_B";
    case SignForm::A1A2UnionB: return "A1_A2_UNION_B";
    case SignForm::BOnly: return "B_ONLY";
  }
  return "?";
}

namespace {

// Region of a point relative to a candidate M: A1/A2 by the bilateral
// coordinate, one of the disjoint B-sets, or the finite M-box.
struct Region {
  enum class Kind { A1, A2, B, Box } kind;
  BIndex b;  // valid when kind == B
};

Region region_of(const LatticePoint& gamma, const std::vector<int>& M, int ell) {
  const int m = gamma.coord(ell + 1);
  const int M_last = M[static_cast<std::size_t>(ell)];
  if (m > M_last) return {Region::Kind::A1, {}};
  if (m < -M_last) return {Region::Kind::A2, {}};
  for (int k = ell; k >= 1; --k) {
    if (gamma.coord(k) > M[static_cast<std::size_t>(k - 1)]) {
      BIndex b;
      b.k = k;
      for (int r = k + 1; r <= ell + 1; ++r) b.tail.push_back(gamma.coord(r));
      return {Region::Kind::B, std::move(b)};
    }
  }
  return {Region::Kind::Box, {}};
}

struct RegionStats {
  long long pos = 0;
  long long neg = 0;
  bool minority_interior = false;  // a minority-sign witness away from the window edge
};

}  // namespace

bool SignPattern::positive(const LatticePoint& gamma) const {
  const Region r = region_of(gamma, M, ell);
  switch (r.kind) {
    case Region::Kind::A1:
      return form == SignForm::A1UnionB || form == SignForm::A1A2UnionB;
    case Region::Kind::A2:
      return form == SignForm::A2UnionB || form == SignForm::A1A2UnionB;
    case Region::Kind::B:
      return std::find(E.begin(), E.end(), r.b) != E.end();
    case Region::Kind::Box:
      return std::find(exceptional.begin(), exceptional.end(), gamma) != exceptional.end();
  }
  return false;
}

SignPattern classify_sign_pattern(const EquivariantDirac& D, const Truncation& trunc,
                                  int m_search_max) {
  const int ell = trunc.ell();
  const int bound = std::min({m_search_max, trunc.n_max() - 1, trunc.m_max() - 1});
  if (bound < 0) throw std::invalid_argument("classify_sign_pattern: window too small to search");

  bool saw_boundary_only_failure = false;
  std::vector<int> M(static_cast<std::size_t>(ell + 1), 0);
  const int edge_margin = std::max(1, trunc.interior_margin());

  while (true) {
    // evaluate candidate M
    std::map<int, RegionStats> a_stats;  // 1 -> A1, 2 -> A2
    std::map<BIndex, RegionStats> b_stats;
    bool ok = true;
    trunc.for_each([&](const LatticePoint& gamma, std::size_t) {
      const Region r = region_of(gamma, M, ell);
      if (r.kind == Region::Kind::Box) return;
      RegionStats* st = nullptr;
      if (r.kind == Region::Kind::A1) {
        st = &a_stats[1];
      } else if (r.kind == Region::Kind::A2) {
        st = &a_stats[2];
      } else {
        st = &b_stats[r.b];
      }
      if (D(gamma) > 0.0) {
        ++st->pos;
      } else {
        ++st->neg;
      }
    });
    // purity, with a second pass to locate minority witnesses when impure
    std::vector<const RegionStats*> impure;
    for (const auto& [key, st] : a_stats) {
      if (st.pos > 0 && st.neg > 0) impure.push_back(&st);
    }
    for (const auto& [key, st] : b_stats) {
      if (st.pos > 0 && st.neg > 0) impure.push_back(&st);
    }
    if (!impure.empty()) {
      ok = false;
      // window-too-small diagnosis: are all minority witnesses near the edge?
      bool all_near_edge = true;
      trunc.for_each([&](const LatticePoint& gamma, std::size_t) {
        if (!all_near_edge) return;
        const Region r = region_of(gamma, M, ell);
        if (r.kind == Region::Kind::Box) return;
        const RegionStats* st = nullptr;
        if (r.kind == Region::Kind::A1) {
          st = &a_stats[1];
        } else if (r.kind == Region::Kind::A2) {
          st = &a_stats[2];
        } else {
          st = &b_stats[r.b];
        }
        if (st->pos == 0 || st->neg == 0) return;
        const bool is_pos = D(gamma) > 0.0;
        const bool minority = (st->pos <= st->neg) == is_pos;
        if (minority && trunc.is_interior(gamma, edge_margin)) all_near_edge = false;
      });
      if (all_near_edge) saw_boundary_only_failure = true;
    }

    if (ok && a_stats.count(1) && a_stats.count(2)) {
      SignPattern p;
      p.ell = ell;
      p.M = M;
      const bool a1_pos = a_stats[1].pos > 0;
      const bool a2_pos = a_stats[2].pos > 0;
      if (a1_pos && a2_pos) {
        p.form = SignForm::A1A2UnionB;
      } else if (a1_pos) {
        p.form = SignForm::A1UnionB;
      } else if (a2_pos) {
        p.form = SignForm::A2UnionB;
      } else {
        p.form = SignForm::BOnly;
      }
      for (const auto& [b, st] : b_stats) {
        if (st.pos > 0) p.E.push_back(b);
      }
      // exceptional set: positive points of the M-box
      trunc.for_each([&](const LatticePoint& gamma, std::size_t) {
        if (region_of(gamma, M, ell).kind == Region::Kind::Box && D(gamma) > 0.0) {
          p.exceptional.push_back(gamma);
        }
      });
      return p;
    }

    // next candidate in lexicographic order
    int pos = ell;
    while (pos >= 0) {
      if (M[static_cast<std::size_t>(pos)] < bound) {
        ++M[static_cast<std::size_t>(pos)];
        break;
      }
      M[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }

  if (saw_boundary_only_failure) {
    throw ClassifyError(ClassifyError::Kind::WindowTooSmall,
                        "classify_sign_pattern: mismatches only near the window boundary; "
                        "enlarge the window (searched M up to " + std::to_string(bound) + ")");
  }
  throw ClassifyError(ClassifyError::Kind::Inadmissible,
                      "classify_sign_pattern: no admissible pattern up to M = " +
                          std::to_string(bound));
}

int khomology_class(const SignPattern& p) {
  switch (p.form) {
    case SignForm::A1UnionB: return -1;
    case SignForm::A2UnionB: return +1;
    default: return 0;
  }
}

}  // namespace qsph
