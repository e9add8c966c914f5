#pragma once

#include <functional>
#include <vector>

#include "cnfuse/random.hpp"
#include "cnfuse/sym_matrix.hpp"

namespace cnfuse {

/// Admissible common-noise cross-covariance: a symmetric X with
/// 0 <= X <= P1 and X <= P2 in the Loewner order, together with how it was
/// obtained.
struct AdmissibleX {
  enum class Provenance { kRank1, kOmega, kExplicit };

  SymMatrix X;
  Provenance provenance = Provenance::kExplicit;
  /// For rank-1 members: which estimate the max in the construction binds
  /// (1 or 2), i.e. for which P_b - X is singular.
  int binding_index = 0;
};

/// Data of the Omega parametrisation of the maximal common-noise members:
/// GEVD of (P1, P2) plus the diagonal split of D^-1 and I into
/// M^-1 + E_i^T Sigma_i^-1 E_i.
struct OmegaFactorization {
  GevdFactors gevd;
  Vector M;  // max(d_j, 1)
  std::vector<Eigen::Index> E1;  // indices with d_j < 1
  std::vector<Eigen::Index> E2;  // indices with d_j > 1
  Vector S1;  // (1/d_j - 1)^-1 over E1
  Vector S2;  // (1 - 1/d_j)^-1 over E2
};

/// Assemble [P1, X; X, P2] and check validity. Throws std::domain_error if
/// X violates the family constraints beyond tolerance.
JointCovariance joint_from_x(const SymMatrix& p1, const SymMatrix& p2,
                             const AdmissibleX& x);

struct JointValidity {
  bool valid = false;
  double margin = 0.0;  // min eigenvalue of the full block matrix
};

/// PSD check of the full 2n x 2n block matrix.
JointValidity validate_joint(const JointCovariance& k, double tol);

/// Maximal rank-1 member along a unit direction x:
/// X = x (max{x^T P1^-1 x, x^T P2^-1 x})^-1 x^T.
AdmissibleX sample_rank1(const SymMatrix& p1, const SymMatrix& p2,
                         const Vector& x);

OmegaFactorization omega_factorization(const SymMatrix& p1,
                                       const SymMatrix& p2);

/// Maximal member for a contraction Omega (p x q, p = |E1|, q = |E2|):
/// X = V^-T (M^-1 + E^T Sigma_Omega^-1 E)^-1 V^-1. At the contraction
/// boundary Sigma_Omega is singular; its pseudo-inverse is used and the
/// resulting X degenerates to reduced rank.
AdmissibleX sample_omega(const OmegaFactorization& f, const Matrix& omega);

/// Unrestricted-correlation member: P12 = P1^{1/2} C P2^{1/2} with the
/// singular values of C clipped to [0, 1].
JointCovariance sample_ci_general(const SymMatrix& p1, const SymMatrix& p2,
                                  const Matrix& c);

/// Common-information (ICI) member: P12 = P1 G P2 for G with
/// 0 <= G <= P1^-1, G <= P2^-1.
JointCovariance sample_ici(const SymMatrix& p1, const SymMatrix& p2,
                           const SymMatrix& g);

enum class CorrelationFamily {
  kCommonNoiseRank1,
  kCommonNoiseOmega,
  kCiGeneral,
  kIci,
};

using JointSampler = std::function<JointCovariance(Rng&)>;

/// Seeded random sampler over the requested family. ICI members are drawn
/// through the duality with the common-noise family of (P1^-1, P2^-1).
JointSampler family_sampler(CorrelationFamily family, const SymMatrix& p1,
                            const SymMatrix& p2);

}  // namespace cnfuse
