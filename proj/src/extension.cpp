#include "qsph/extension.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qsph/dirac.hpp"
#include "qsph/qoperators.hpp"

namespace qsph {

Monomial Monomial::parse(const std::string& text) {
  Monomial m;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    if (c != 'z' && c != 'y') {
      throw std::invalid_argument("Monomial::parse: expected 'z' or 'y' at position " +
                                  std::to_string(pos));
    }
    ++pos;
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw std::invalid_argument("Monomial::parse: missing generator index");
    Letter letter;
    letter.index = std::stoi(text.substr(start, pos - start));
    if (letter.index < 1) throw std::invalid_argument("Monomial::parse: index must be positive");
    if (pos < text.size() && text[pos] == '*') {
      letter.star = true;
      ++pos;
    }
    m.letters.push_back(letter);
  }
  return m;
}

std::string Monomial::str(char alphabet) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) os << ' ';
    os << alphabet << letters[i].index;
    if (letters[i].star) os << '*';
  }
  return os.str();
}

Monomial Monomial::adjoint() const {
  Monomial out;
  out.letters.reserve(letters.size());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    out.letters.push_back({it->index, !it->star});
  }
  return out;
}

Monomial Monomial::concat(const Monomial& other) const {
  Monomial out = *this;
  out.letters.insert(out.letters.end(), other.letters.begin(), other.letters.end());
  return out;
}

std::optional<Monomial> sigma_quotient(const Monomial& yword, int ell) {
  Monomial out;
  for (const Letter& letter : yword.letters) {
    if (letter.index > ell + 2) {
      throw std::invalid_argument("sigma_quotient: letter outside the y-alphabet");
    }
    if (letter.index == ell + 2) return std::nullopt;
    out.letters.push_back(letter);
  }
  return out;
}

ModuleSpaceModel::ModuleSpaceModel(int ell_, int n_max_, int m_neg_, int f_max_)
    : ell(ell_), n_max(n_max_), m_neg(m_neg_), f_max(f_max_) {
  if (ell < 1 || n_max < 1 || m_neg < 0 || f_max < 0) {
    throw std::invalid_argument("ModuleSpaceModel: bad bounds");
  }
}

std::size_t ModuleSpaceModel::tilde_dim() const {
  std::size_t d = 1;
  for (int i = 0; i < ell; ++i) d *= static_cast<std::size_t>(n_max + 1);
  d *= static_cast<std::size_t>(m_neg + n_max + 1);
  d *= static_cast<std::size_t>(2 * f_max + 1);
  return d;
}

std::size_t ModuleSpaceModel::tilde_index(const std::vector<int>& n, int m, int f) const {
  std::size_t idx = 0;
  for (int i = 0; i < ell; ++i) {
    idx = idx * static_cast<std::size_t>(n_max + 1) + static_cast<std::size_t>(n[static_cast<std::size_t>(i)]);
  }
  idx = idx * static_cast<std::size_t>(m_neg + n_max + 1) + static_cast<std::size_t>(m + m_neg);
  idx = idx * static_cast<std::size_t>(2 * f_max + 1) + static_cast<std::size_t>(f + f_max);
  return idx;
}

void ModuleSpaceModel::tilde_coords(std::size_t idx, std::vector<int>& n, int& m, int& f) const {
  f = static_cast<int>(idx % static_cast<std::size_t>(2 * f_max + 1)) - f_max;
  idx /= static_cast<std::size_t>(2 * f_max + 1);
  m = static_cast<int>(idx % static_cast<std::size_t>(m_neg + n_max + 1)) - m_neg;
  idx /= static_cast<std::size_t>(m_neg + n_max + 1);
  n.assign(static_cast<std::size_t>(ell), 0);
  for (int i = ell - 1; i >= 0; --i) {
    n[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(n_max + 1));
    idx /= static_cast<std::size_t>(n_max + 1);
  }
}

namespace {

SparseOperator evaluate_word(const std::vector<SparseOperator>& letters_ops) {
  if (letters_ops.empty()) {
    throw std::invalid_argument("evaluate_word: empty");
  }
  SparseOperator acc = letters_ops.front();
  for (std::size_t i = 1; i < letters_ops.size(); ++i) {
    acc = multiply(acc, letters_ops[i]);
  }
  return acc;
}

// sigma_tilde generator z_k on the tilde index space.
SparseOperator tilde_generator(int k, double q, const ModuleSpaceModel& model) {
  SparseOperator op(model.tilde_dim());
  std::vector<int> n;
  int m = 0, f = 0;
  for (std::size_t idx = 0; idx < model.tilde_dim(); ++idx) {
    model.tilde_coords(idx, n, m, f);
    if (k <= model.ell) {
      if (n[static_cast<std::size_t>(k - 1)] + 1 > model.n_max) continue;
      int prefix = 0;
      for (int r = 0; r < k - 1; ++r) prefix += n[static_cast<std::size_t>(r)];
      const double amp =
          std::pow(q, prefix) *
          std::sqrt(1.0 - std::pow(q, 2 * n[static_cast<std::size_t>(k - 1)] + 2));
      std::vector<int> n2 = n;
      ++n2[static_cast<std::size_t>(k - 1)];
      op.set(model.tilde_index(n2, m, f), idx, amp);
    } else {
      // z_{ell+1}: bilateral shift on m with the q^N weight on the N block
      if (m + 1 > model.n_max) continue;
      int s = 0;
      for (int r = 0; r < model.ell; ++r) s += n[static_cast<std::size_t>(r)];
      op.set(model.tilde_index(n, m + 1, f), idx, std::pow(q, s));
    }
  }
  return op;
}

}  // namespace

SparseOperator psi_rep(const Monomial& yword, double q, const ModuleSpaceModel& model) {
  const Truncation trunc = model.psi_trunc();
  if (yword.letters.empty()) return SparseOperator::identity(trunc.size());
  std::vector<SparseOperator> ops;
  ops.reserve(yword.letters.size());
  for (const Letter& letter : yword.letters) {
    if (letter.index > model.ell + 2) {
      throw std::invalid_argument("psi_rep: letter outside the y-alphabet");
    }
    SparseOperator g = generator_z(letter.index, q, trunc);
    ops.push_back(letter.star ? g.adjoint() : std::move(g));
  }
  return evaluate_word(ops);
}

SparseOperator sigma_tilde(const Monomial& zword, double q, const ModuleSpaceModel& model) {
  if (zword.letters.empty()) return SparseOperator::identity(model.tilde_dim());
  std::vector<SparseOperator> ops;
  ops.reserve(zword.letters.size());
  for (const Letter& letter : zword.letters) {
    if (letter.index > model.ell + 1) {
      throw std::invalid_argument("sigma_tilde: letter outside the z-alphabet");
    }
    SparseOperator g = tilde_generator(letter.index, q, model);
    ops.push_back(letter.star ? g.adjoint() : std::move(g));
  }
  return evaluate_word(ops);
}

SparseOperator sigma_hat(const Monomial& zword, double q, const ModuleSpaceModel& model) {
  const SparseOperator full = sigma_tilde(zword, q, model);
  const Truncation psi_t = model.psi_trunc();
  SparseOperator out(psi_t.size());

  std::vector<int> n;
  int m = 0, f = 0;
  auto to_psi_index = [&](const std::vector<int>& nn, int mm, int ff) -> std::optional<std::size_t> {
    if (mm < 0) return std::nullopt;
    std::vector<int> coords = nn;
    coords.push_back(mm);
    coords.push_back(ff);
    return psi_t.index_of(LatticePoint(std::move(coords)));
  };

  for (std::size_t col = 0; col < model.tilde_dim(); ++col) {
    model.tilde_coords(col, n, m, f);
    const auto pc = to_psi_index(n, m, f);
    if (!pc) continue;
    std::vector<int> rn;
    int rm = 0, rf = 0;
    for (const auto& [row, amp] : full.col(col)) {
      model.tilde_coords(row, rn, rm, rf);
      const auto pr = to_psi_index(rn, rm, rf);
      if (!pr) continue;
      out.set(*pr, *pc, amp);
    }
  }
  return out;
}

double lift_residual(const Monomial& zword, double q, const ModuleSpaceModel& model, int R) {
  if (R < 0 || R >= model.n_max) {
    throw std::invalid_argument("lift_residual: R must lie inside the N window");
  }
  const SparseOperator hat = sigma_hat(zword, q, model);
  const SparseOperator psi = psi_rep(zword, q, model);
  const SparseOperator diff = add(hat, psi, 1.0, -1.0);

  const Truncation psi_t = model.psi_trunc();
  // compress to the complement of the N-degree-R box (rows and columns)
  std::vector<char> outside(psi_t.size(), 0);
  psi_t.for_each([&](const LatticePoint& p, std::size_t idx) {
    int s = 0;
    for (int r = 1; r <= model.ell + 1; ++r) s += p.coord(r);
    outside[idx] = s > R ? 1 : 0;
  });
  SparseOperator tail(psi_t.size());
  for (std::size_t c = 0; c < psi_t.size(); ++c) {
    if (!outside[c]) continue;
    for (const auto& [r, v] : diff.col(c)) {
      if (outside[r]) tail.set(r, c, v);
    }
  }
  return op_norm(tail);
}

SparseOperator spectral_projection_diagonal(const SparseOperator& diag, double value,
                                            double rel_tol) {
  SparseOperator proj(diag.dim());
  const double tol = std::max(std::abs(value) * rel_tol, 1e-14);
  for (std::size_t i = 0; i < diag.dim(); ++i) {
    if (std::abs(diag.entry(i, i).real() - value) < tol) proj.set(i, i, 1.0);
  }
  return proj;
}

ReconstructionReport reconstruct_elementary(const std::vector<int>& i, const std::vector<int>& j,
                                            int k, double q, const Truncation& trunc) {
  const int ell = trunc.ell();
  if (static_cast<int>(i.size()) != ell || static_cast<int>(j.size()) != ell) {
    throw std::invalid_argument("reconstruct_elementary: index vectors must have length ell");
  }
  for (int r = 0; r < ell; ++r) {
    if (i[static_cast<std::size_t>(r)] < 0 || i[static_cast<std::size_t>(r)] > trunc.n_max() ||
        j[static_cast<std::size_t>(r)] < 0 || j[static_cast<std::size_t>(r)] > trunc.n_max()) {
      throw std::invalid_argument("reconstruct_elementary: index outside the N window");
    }
  }
  if (std::abs(k) > trunc.m_max()) {
    throw std::invalid_argument("reconstruct_elementary: shift outside the Z window");
  }

  // X_r = q^N on the first r legs: diagonal entry q^{gamma(1)+...+gamma(r)}.
  auto x_diag = [&](int r) {
    SparseOperator x(trunc.size());
    trunc.for_each([&](const LatticePoint& gamma, std::size_t idx) {
      int s = 0;
      for (int t = 1; t <= r; ++t) s += gamma.coord(t);
      x.set(idx, idx, std::pow(q, s));
    });
    return x;
  };

  // joint eigenprojection of X_1..X_ell pinning the N coordinates to v
  auto pin_projection = [&](const std::vector<int>& v) {
    SparseOperator p = SparseOperator::identity(trunc.size());
    int cum = 0;
    for (int r = 1; r <= ell; ++r) {
      cum += v[static_cast<std::size_t>(r - 1)];
      const SparseOperator chi =
          spectral_projection_diagonal(x_diag(r), std::pow(q, cum), 0.5 * (1.0 - q));
      p = multiply(p, chi);
    }
    return p;
  };

  std::ostringstream word;
  std::vector<SparseOperator> factors;
  factors.push_back(pin_projection(i));
  word << "P_i";
  for (int r = 1; r <= ell; ++r) {
    const int a = i[static_cast<std::size_t>(r - 1)] - j[static_cast<std::size_t>(r - 1)];
    if (a == 0) continue;
    SparseOperator g = generator_z(r, q, trunc);
    if (a < 0) g = g.adjoint();
    for (int t = 0; t < std::abs(a); ++t) factors.push_back(g);
    word << " z" << r << (a < 0 ? "*^" : "^") << std::abs(a);
  }
  if (k != 0) {
    SparseOperator g = generator_z(ell + 1, q, trunc);
    if (k > 0) g = g.adjoint();  // S^k lowers m by k; z_{ell+1} raises it
    for (int t = 0; t < std::abs(k); ++t) factors.push_back(g);
    word << " z" << (ell + 1) << (k > 0 ? "*^" : "^") << std::abs(k);
  }
  factors.push_back(pin_projection(j));
  word << " P_j";

  SparseOperator built = evaluate_word(factors);

  // all surviving amplitudes must agree; normalize the common constant away
  Complex alpha(0.0);
  double uniformity = 0.0;
  for (std::size_t c = 0; c < built.dim(); ++c) {
    for (const auto& [r, v] : built.col(c)) {
      if (alpha == Complex(0.0)) {
        alpha = v;
      } else {
        uniformity = std::max(uniformity, std::abs(v - alpha));
      }
    }
  }
  if (alpha == Complex(0.0)) {
    throw std::runtime_error("reconstruct_elementary: generator word vanished on the window");
  }
  if (uniformity > 1e-12 * std::abs(alpha)) {
    throw std::runtime_error("reconstruct_elementary: non-constant amplitude in the word");
  }
  built = built.scaled(Complex(1.0) / alpha);

  // direct elementary operator
  SparseOperator direct(trunc.size());
  trunc.for_each([&](const LatticePoint& gamma, std::size_t col) {
    for (int r = 1; r <= ell; ++r) {
      if (gamma.coord(r) != j[static_cast<std::size_t>(r - 1)]) return;
    }
    LatticePoint target = gamma;
    for (int r = 1; r <= ell; ++r) target.c[static_cast<std::size_t>(r - 1)] = i[static_cast<std::size_t>(r - 1)];
    target.c[static_cast<std::size_t>(ell)] -= k;
    if (auto row = trunc.index_of(target)) direct.set(*row, col, 1.0);
  });

  ReconstructionReport rep{std::move(built), 0.0, word.str(), alpha};
  rep.max_mismatch = add(rep.built, direct, 1.0, -1.0).max_abs_entry();
  return rep;
}

Ev1Report ev1_pullback_check(double q, const Truncation& trunc, int f_max) {
  (void)q;  // the localized operator does not depend on the deformation
  const EquivariantDirac D = d_torus(trunc.ell());
  Ev1Report rep;
  rep.fourier_independent = true;
  trunc.for_each([&](const LatticePoint& gamma, std::size_t) {
    // Q-side eigenvalue: the U-transport sends m >= 0 to the L2(N) corner,
    // so 2Q - I acts by +1 there and -1 on the mirrored copy, for every
    // Fourier mode.
    const int first = gamma.coord(trunc.ell() + 1) >= 0 ? 1 : -1;
    for (int f = -f_max; f <= f_max; ++f) {
      const int q_side = first;
      if (q_side != first) rep.fourier_independent = false;
      if (f == 0) {
        const int dirac_side = D(gamma) > 0.0 ? 1 : -1;
        if (q_side != dirac_side) {
          ++rep.mismatches;
          rep.trace_mismatch += q_side - dirac_side;
        }
      }
    }
  });
  return rep;
}

}  // namespace qsph
