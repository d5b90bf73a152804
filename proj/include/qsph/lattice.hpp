#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qsph {

/// A point of the index set Gamma = N^ell x Z.  Coordinates are stored
/// 0-based; the semantic accessor coord(k) is 1-based, with k = ell+1 the
/// bilateral coordinate.
struct LatticePoint {
  std::vector<int> c;

  LatticePoint() = default;
  explicit LatticePoint(std::vector<int> coords) : c(std::move(coords)) {}

  int size() const { return static_cast<int>(c.size()); }
  // 1-based semantic access, k in [1, ell+1].
  int coord(int k) const { return c[static_cast<std::size_t>(k) - 1]; }

  bool operator==(const LatticePoint&) const = default;
  bool operator<(const LatticePoint& o) const { return c < o.c; }
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : p.c) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ull;
    }
    return h;
  }
};

/// gamma + epsilon_k, k in [1, ell+1].  The result may leave any window;
/// windowing is the caller's concern.
LatticePoint add_epsilon(const LatticePoint& gamma, int k);

/// gamma(1) + ... + gamma(ell) + |gamma(ell+1)|.
int weighted_degree(const LatticePoint& gamma);

/// A finite window of Gamma: N-coordinates in [0, n_max], bilateral
/// coordinate in [-m_max, m_max].  Basis order is lexicographic with the
/// first coordinate varying slowest, so matrix indices are reproducible.
class Truncation {
 public:
  Truncation(int ell, int n_max, int m_max, int interior_margin = 1);

  int ell() const { return ell_; }
  int n_max() const { return n_max_; }
  int m_max() const { return m_max_; }
  int interior_margin() const { return margin_; }

  std::size_t size() const { return size_; }

  bool contains(const LatticePoint& p) const;
  // Interior: N-coords <= n_max - margin and |Z-coord| <= m_max - margin.
  bool is_interior(const LatticePoint& p, int margin) const;
  bool is_interior(const LatticePoint& p) const { return is_interior(p, margin_); }

  std::optional<std::size_t> index_of(const LatticePoint& p) const;
  LatticePoint point_at(std::size_t idx) const;

  std::vector<LatticePoint> enumerate() const;

  // Streaming traversal in enumeration order, without materializing.
  void for_each(const std::function<void(const LatticePoint&, std::size_t)>& f) const;

 private:
  int ell_;
  int n_max_;
  int m_max_;
  int margin_;
  std::size_t size_;
};

/// #{gamma in Gamma : weighted_degree(gamma) <= n}, closed combinatorial form.
long long count_ball(int ell, int n);

/// Same count by direct enumeration; oracle for count_ball.
long long count_ball_brute(int ell, int n);

}  // namespace qsph
