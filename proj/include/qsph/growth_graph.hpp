#pragma once

#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qsph/dirac.hpp"
#include "qsph/lattice.hpp"

namespace qsph {

/// Graph on the window joining gamma, gamma' when |d(gamma)-d(gamma')| <= c.
/// Adjacency is a predicate; the quadratic edge set is never materialized.
class GrowthGraph {
 public:
  GrowthGraph(const EquivariantDirac& D, double c, Truncation trunc);

  double c() const { return c_; }
  const Truncation& trunc() const { return trunc_; }

  bool is_edge(const LatticePoint& a, const LatticePoint& b) const;

  /// Window neighbours of gamma along +/- generator directions.
  std::vector<LatticePoint> generator_neighbors(const LatticePoint& gamma) const;

 private:
  const EquivariantDirac* D_;
  double c_;
  Truncation trunc_;
};

GrowthGraph build_graph(const EquivariantDirac& D, double c, const Truncation& trunc);

/// Constructive path between gamma and gamma' when gamma' has zero
/// coordinates before position k and the two points agree from k+1 on
/// (coordinate k may differ).  Coordinates 1..k-1 are zeroed one at a time,
/// then coordinate k is walked.  Returns the vertex sequence including both
/// endpoints; equal endpoints give the empty path.  Each step is checked to
/// be an edge of the graph.
std::vector<LatticePoint> lemma_path(const GrowthGraph& g, const LatticePoint& gamma,
                                     const LatticePoint& gamma_prime, int k);

enum class SignForm { A1UnionB, A2UnionB, A1A2UnionB, BOnly };

std::string to_string(SignForm f);

/// Index of one canonical B-set: coordinate k exceeds M_k while the tail
/// coordinates k+1..ell+1 are pinned.
struct BIndex {
  int k = 0;
  std::vector<int> tail;
  bool operator==(const BIndex&) const = default;
  bool operator<(const BIndex& o) const {
    return std::tie(k, tail) < std::tie(o.k, o.tail);
  }
};

struct SignPattern {
  int ell = 0;
  SignForm form = SignForm::BOnly;
  std::vector<int> M;
  std::vector<BIndex> E;
  std::vector<LatticePoint> exceptional;  // positive points inside the M-box

  /// Membership of the reconstructed Gamma+.
  bool positive(const LatticePoint& gamma) const;
};

struct ClassifyError : std::runtime_error {
  enum class Kind { WindowTooSmall, Inadmissible };
  Kind kind;
  ClassifyError(Kind kind_, const std::string& what_) : std::runtime_error(what_), kind(kind_) {}
};

/// Searches M vectors with entries <= m_search_max for an exact match of
/// the sign of d outside the M-box; returns the lexicographically smallest
/// matching M.  Throws ClassifyError when nothing matches.
SignPattern classify_sign_pattern(const EquivariantDirac& D, const Truncation& trunc,
                                  int m_search_max = 5);

/// A1 form -> -1, A2 form -> +1, otherwise 0.
int khomology_class(const SignPattern& p);

}  // namespace qsph
