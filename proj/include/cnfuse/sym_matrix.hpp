#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace cnfuse {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric real matrix. Input is symmetrized as (A + A^T)/2 on
/// construction; entries must be finite and the deviation from symmetry
/// must stay below 1e-12 relative.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Matrix a);

  static SymMatrix Identity(Eigen::Index n);
  static SymMatrix Zero(Eigen::Index n);
  /// Scalar multiple of the identity.
  static SymMatrix Scaled(Eigen::Index n, double s);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& m() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double s, const SymMatrix& a);

/// Smallest eigenvalue (symmetric eigendecomposition, so the PSD margin is
/// reportable, not just a yes/no).
double min_eigenvalue(const SymMatrix& a);
double spectral_norm(const SymMatrix& a);

/// True iff min eig(A) >= -tol * max(1, ||A||_2).
bool is_psd(const SymMatrix& a, double tol);

/// Loewner order: A >= B iff A - B is PSD.
bool loewner_geq(const SymMatrix& a, const SymMatrix& b, double tol);

/// Symmetric PSD square root S with S S^T = A. Eigenvalues in
/// [-1e-10 * ||A||, 0) are clipped to zero; anything more negative throws.
Matrix spd_sqrt(const SymMatrix& a);

SymMatrix inverse_spd(const SymMatrix& a);

/// Generalised eigendecomposition of an SPD pair: P1 V = P2 V diag(D),
/// normalised so that V^T P2 V = I, i.e. P1 = V^-T diag(D) V^-1 and
/// P2 = V^-T V^-1. Eigenvalues sorted ascending.
struct GevdFactors {
  Matrix V;
  Vector D;
};

GevdFactors gevd(const SymMatrix& p1, const SymMatrix& p2);

/// Joint covariance of two estimation errors: [P1, P12; P12^T, P2].
/// P12 need not be symmetric.
struct JointCovariance {
  SymMatrix P1;
  SymMatrix P2;
  Matrix P12;

  Eigen::Index block_dim() const { return P1.dim(); }
  /// Assembled 2n x 2n block matrix.
  SymMatrix full() const;
};

/// Schur complement P2 - P12^T P1^-1 P12. Throws if the P1 block is
/// singular.
SymMatrix schur_complement(const JointCovariance& k);

}  // namespace cnfuse
