#include "cnfuse/random.hpp"

namespace cnfuse {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector random_unit_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

Matrix random_orthogonal(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  return q;
}

Matrix random_contraction(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const Eigen::Index k = std::min(rows, cols);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Matrix u = random_orthogonal(rows, rng);
  const Matrix v = random_orthogonal(cols, rng);
  Matrix s = Matrix::Zero(rows, cols);
  for (Eigen::Index i = 0; i < k; ++i) s(i, i) = unif(rng);
  return u * s * v.transpose();
}

SymMatrix random_spd(Eigen::Index n, Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> unif(lo, hi);
  const Matrix q = random_orthogonal(n, rng);
  Vector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = unif(rng);
  return SymMatrix(q * d.asDiagonal() * q.transpose());
}

}  // namespace cnfuse
