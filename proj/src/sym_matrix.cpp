#include "cnfuse/sym_matrix.hpp"

#include <cmath>

namespace cnfuse {

SymMatrix::SymMatrix(Matrix a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument("SymMatrix: matrix must be square, dim >= 1");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument("SymMatrix: non-finite entries");
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw std::invalid_argument("SymMatrix: input is not symmetric");
  }
  m_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::Identity(Eigen::Index n) {
  return SymMatrix(Matrix::Identity(n, n));
}

SymMatrix SymMatrix::Zero(Eigen::Index n) {
  return SymMatrix(Matrix::Zero(n, n));
}

SymMatrix SymMatrix::Scaled(Eigen::Index n, double s) {
  return SymMatrix(s * Matrix::Identity(n, n));
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.m() + b.m());
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.m() - b.m());
}

SymMatrix operator*(double s, const SymMatrix& a) {
  return SymMatrix(s * a.m());
}

double min_eigenvalue(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.m(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double spectral_norm(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.m(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_psd(const SymMatrix& a, double tol) {
  if (tol < 0.0) {
    throw std::invalid_argument("is_psd: negative tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.m(), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  return lo >= -tol * std::max(1.0, norm);
}

bool loewner_geq(const SymMatrix& a, const SymMatrix& b, double tol) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("loewner_geq: dimension mismatch");
  }
  return is_psd(a - b, tol);
}

Matrix spd_sqrt(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.m());
  const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
  Vector d = es.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) < -1e-10 * scale) {
      throw std::domain_error("spd_sqrt: matrix is indefinite");
    }
    d(i) = std::sqrt(std::max(d(i), 0.0));
  }
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

SymMatrix inverse_spd(const SymMatrix& a) {
  Eigen::LLT<Matrix> llt(a.m());
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("inverse_spd: matrix is not positive definite");
  }
  return SymMatrix(llt.solve(Matrix::Identity(a.dim(), a.dim())));
}

GevdFactors gevd(const SymMatrix& p1, const SymMatrix& p2) {
  if (p1.dim() != p2.dim()) {
    throw std::invalid_argument("gevd: dimension mismatch");
  }
  if (min_eigenvalue(p1) <= 0.0 || min_eigenvalue(p2) <= 0.0) {
    throw std::domain_error("gevd: inputs must be positive definite");
  }
  // Symmetrize the pencil through P2 = S S^T: the standard eigenproblem of
  // S^-1 P1 S^-T has the generalised eigenvalues, and V = S^-T Q stays real.
  const Matrix s = spd_sqrt(p2);
  const auto slu = Eigen::PartialPivLU<Matrix>(s);
  const Matrix c = slu.solve(slu.solve(p1.m()).transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (c + c.transpose()));
  // SelfAdjointEigenSolver sorts ascending already.
  GevdFactors f;
  f.D = es.eigenvalues();
  // S symmetric, so S^-T Q = S^-1 Q.
  f.V = slu.solve(es.eigenvectors());
  return f;
}

SymMatrix JointCovariance::full() const {
  const Eigen::Index n = block_dim();
  if (P2.dim() != n || P12.rows() != n || P12.cols() != n) {
    throw std::invalid_argument("JointCovariance: inconsistent block dims");
  }
  Matrix k(2 * n, 2 * n);
  k.topLeftCorner(n, n) = P1.m();
  k.topRightCorner(n, n) = P12;
  k.bottomLeftCorner(n, n) = P12.transpose();
  k.bottomRightCorner(n, n) = P2.m();
  return SymMatrix(k);
}

SymMatrix schur_complement(const JointCovariance& k) {
  Eigen::LLT<Matrix> llt(k.P1.m());
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("schur_complement: P1 block is not PD");
  }
  const Matrix c = k.P2.m() - k.P12.transpose() * llt.solve(k.P12);
  return SymMatrix(0.5 * (c + c.transpose()));
}

}  // namespace cnfuse
