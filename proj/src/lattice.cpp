#include "qsph/lattice.hpp"

#include <cmath>
#include <cstdlib>

namespace qsph {

LatticePoint add_epsilon(const LatticePoint& gamma, int k) {
  if (k < 1 || k > gamma.size()) {
    throw std::invalid_argument("add_epsilon: coordinate index out of range");
  }
  LatticePoint out = gamma;
  ++out.c[static_cast<std::size_t>(k) - 1];
  return out;
}

int weighted_degree(const LatticePoint& gamma) {
  int s = 0;
  const int n = gamma.size();
  for (int i = 0; i < n - 1; ++i) s += gamma.c[static_cast<std::size_t>(i)];
  s += std::abs(gamma.c[static_cast<std::size_t>(n - 1)]);
  return s;
}

Truncation::Truncation(int ell, int n_max, int m_max, int interior_margin)
    : ell_(ell), n_max_(n_max), m_max_(m_max), margin_(interior_margin) {
  if (ell < 1) throw std::invalid_argument("Truncation: ell must be positive");
  if (n_max < 0 || m_max < 0) throw std::invalid_argument("Truncation: negative bound");
  if (interior_margin < 0 || interior_margin > std::min(n_max, m_max)) {
    throw std::invalid_argument("Truncation: interior_margin out of range");
  }
  size_ = 1;
  for (int i = 0; i < ell; ++i) size_ *= static_cast<std::size_t>(n_max + 1);
  size_ *= static_cast<std::size_t>(2 * m_max + 1);
}

bool Truncation::contains(const LatticePoint& p) const {
  if (p.size() != ell_ + 1) return false;
  for (int i = 0; i < ell_; ++i) {
    const int v = p.c[static_cast<std::size_t>(i)];
    if (v < 0 || v > n_max_) return false;
  }
  const int m = p.c[static_cast<std::size_t>(ell_)];
  return m >= -m_max_ && m <= m_max_;
}

bool Truncation::is_interior(const LatticePoint& p, int margin) const {
  if (p.size() != ell_ + 1) return false;
  for (int i = 0; i < ell_; ++i) {
    const int v = p.c[static_cast<std::size_t>(i)];
    if (v < 0 || v > n_max_ - margin) return false;
  }
  const int m = p.c[static_cast<std::size_t>(ell_)];
  return std::abs(m) <= m_max_ - margin;
}

std::optional<std::size_t> Truncation::index_of(const LatticePoint& p) const {
  if (!contains(p)) return std::nullopt;
  std::size_t idx = 0;
  for (int i = 0; i < ell_; ++i) {
    idx = idx * static_cast<std::size_t>(n_max_ + 1) +
          static_cast<std::size_t>(p.c[static_cast<std::size_t>(i)]);
  }
  idx = idx * static_cast<std::size_t>(2 * m_max_ + 1) +
        static_cast<std::size_t>(p.c[static_cast<std::size_t>(ell_)] + m_max_);
  return idx;
}

LatticePoint Truncation::point_at(std::size_t idx) const {
  if (idx >= size_) throw std::out_of_range("Truncation::point_at");
  std::vector<int> coords(static_cast<std::size_t>(ell_ + 1));
  const std::size_t zspan = static_cast<std::size_t>(2 * m_max_ + 1);
  coords[static_cast<std::size_t>(ell_)] = static_cast<int>(idx % zspan) - m_max_;
  idx /= zspan;
  for (int i = ell_ - 1; i >= 0; --i) {
    coords[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(n_max_ + 1));
    idx /= static_cast<std::size_t>(n_max_ + 1);
  }
  return LatticePoint(std::move(coords));
}

std::vector<LatticePoint> Truncation::enumerate() const {
  std::vector<LatticePoint> out;
  out.reserve(size_);
  for_each([&out](const LatticePoint& p, std::size_t) { out.push_back(p); });
  return out;
}

void Truncation::for_each(const std::function<void(const LatticePoint&, std::size_t)>& f) const {
  LatticePoint p(std::vector<int>(static_cast<std::size_t>(ell_ + 1), 0));
  p.c[static_cast<std::size_t>(ell_)] = -m_max_;
  std::size_t idx = 0;
  while (true) {
    f(p, idx);
    ++idx;
    // odometer: last coordinate fastest
    int pos = ell_;
    while (pos >= 0) {
      int& v = p.c[static_cast<std::size_t>(pos)];
      const int hi = (pos == ell_) ? m_max_ : n_max_;
      const int lo = (pos == ell_) ? -m_max_ : 0;
      if (v < hi) {
        ++v;
        break;
      }
      v = lo;
      --pos;
    }
    if (pos < 0) return;
  }
}

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

long long count_ball(int ell, int n) {
  if (n < 0) return 0;
  // N^ell points of sum s: C(s+ell-1, ell-1); bilateral coordinate of
  // modulus <= n-s contributes 1 + 2(n-s) choices.
  long long total = 0;
  for (int s = 0; s <= n; ++s) {
    total += binom(s + ell - 1, ell - 1) * (1 + 2ll * (n - s));
  }
  return total;
}

long long count_ball_brute(int ell, int n) {
  if (n < 0) return 0;
  long long count = 0;
  std::vector<int> pt(static_cast<std::size_t>(ell), 0);
  // enumerate N^ell with sum <= n by odometer, then count Z choices
  while (true) {
    int s = 0;
    for (int v : pt) s += v;
    if (s <= n) count += 1 + 2ll * (n - s);
    int pos = ell - 1;
    while (pos >= 0) {
      if (pt[static_cast<std::size_t>(pos)] < n) {
        ++pt[static_cast<std::size_t>(pos)];
        break;
      }
      pt[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return count;
}

}  // namespace qsph
