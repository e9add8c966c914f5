#include "cnfuse/bounds.hpp"

#include <cmath>

#include "cnfuse/random.hpp"

namespace cnfuse {

namespace {

void require_same_dim(const SymMatrix& p1, const SymMatrix& p2) {
  if (p1.dim() != p2.dim()) {
    throw std::invalid_argument("bounds: dimension mismatch");
  }
}

/// blkdiag(P1, P2) + (1/2) [F1; F2] G [F1; F2]^T.
SymMatrix block_bound(const SymMatrix& p1, const SymMatrix& p2,
                      const Matrix& f1, const Matrix& f2, const Matrix& g) {
  const Eigen::Index n = p1.dim();
  Matrix m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = p1.m() + 0.5 * f1 * g * f1.transpose();
  m.topRightCorner(n, n) = 0.5 * f1 * g * f2.transpose();
  m.bottomLeftCorner(n, n) = m.topRightCorner(n, n).transpose();
  m.bottomRightCorner(n, n) = p2.m() + 0.5 * f2 * g * f2.transpose();
  return SymMatrix(m);
}

}  // namespace

SymMatrix b_matrix(const SymMatrix& p1, const SymMatrix& p2, double omega) {
  require_same_dim(p1, p2);
  if (omega < 0.0 || omega > 1.0) {
    throw std::invalid_argument("b_matrix: omega must lie in [0, 1]");
  }
  const SymMatrix mix(omega * inverse_spd(p1).m() +
                      (1.0 - omega) * inverse_spd(p2).m());
  return inverse_spd(mix);
}

bool check_b_property(const SymMatrix& p1, const SymMatrix& p2,
                      const SymMatrix& b, std::uint64_t seed,
                      int n_directions) {
  const SymMatrix binv = inverse_spd(b);
  const SymMatrix p1inv = inverse_spd(p1);
  const SymMatrix p2inv = inverse_spd(p2);
  Rng rng(seed);
  for (int k = 0; k < n_directions; ++k) {
    const Vector x = random_unit_vector(p1.dim(), rng);
    const double lhs = x.dot(binv.m() * x);
    const double rhs =
        std::max(x.dot(p1inv.m() * x), x.dot(p2inv.m() * x));
    if (lhs > rhs * (1.0 + 1e-9) + 1e-12) return false;
  }
  return true;
}

SymMatrix dual_upper_bound(const SymMatrix& p1, const SymMatrix& p2,
                           double mu, const SymMatrix& b) {
  require_same_dim(p1, p2);
  if (mu <= 0.0) {
    throw std::invalid_argument("dual_upper_bound: mu must be positive");
  }
  const Eigen::Index n = p1.dim();
  const Matrix f1 = Matrix::Identity(n, n) / std::sqrt(mu);
  const Matrix f2 = Matrix::Identity(n, n) * std::sqrt(mu);
  return block_bound(p1, p2, f1, f2, b.m());
}

SymMatrix ci_upper_bound(const SymMatrix& p1, const SymMatrix& p2,
                         double lam) {
  require_same_dim(p1, p2);
  if (lam <= 0.0) {
    throw std::invalid_argument("ci_upper_bound: lambda must be positive");
  }
  const Eigen::Index n = p1.dim();
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = (1.0 + 1.0 / lam) * p1.m();
  m.bottomRightCorner(n, n) = (1.0 + lam) * p2.m();
  return SymMatrix(m);
}

SymMatrix ici_upper_bound(const SymMatrix& p1, const SymMatrix& p2, double mu,
                          double omega) {
  require_same_dim(p1, p2);
  if (mu <= 0.0) {
    throw std::invalid_argument("ici_upper_bound: mu must be positive");
  }
  if (omega < 0.0 || omega > 1.0) {
    throw std::invalid_argument("ici_upper_bound: omega must lie in [0, 1]");
  }
  const SymMatrix inner(omega * p1.m() + (1.0 - omega) * p2.m());
  const Matrix f1 = p1.m() / std::sqrt(mu);
  const Matrix f2 = p2.m() * std::sqrt(mu);
  return block_bound(p1, p2, f1, f2, inverse_spd(inner).m());
}

SymMatrix lower_bound(const SymMatrix& p1, const SymMatrix& p2) {
  require_same_dim(p1, p2);
  const Eigen::Index n = p1.dim();
  const SymMatrix sum(p1.m() + p2.m());
  const SymMatrix sum_inv = inverse_spd(sum);
  Matrix stacked(2 * n, n);
  stacked.topRows(n) = p1.m();
  stacked.bottomRows(n) = p2.m();
  return SymMatrix(stacked * sum_inv.m() * stacked.transpose());
}

SymMatrix ci_dominance_gap(const SymMatrix& p1, const SymMatrix& p2,
                           double lam) {
  if (lam <= 0.0) {
    throw std::invalid_argument("ci_dominance_gap: lambda must be positive");
  }
  const SymMatrix mci = ci_upper_bound(p1, p2, lam);
  const SymMatrix m =
      dual_upper_bound(p1, p2, lam, b_matrix(p1, p2, 0.5));
  return mci - m;
}

}  // namespace cnfuse
