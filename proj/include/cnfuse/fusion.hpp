#pragma once

#include <functional>
#include <optional>

#include "cnfuse/bounds.hpp"
#include "cnfuse/sym_matrix.hpp"

namespace cnfuse {

/// Block-row fusion weight W = [W1, W2] with observation matrices
/// H = [H1; H2]; the regularity condition W1 H1 + W2 H2 = I makes the
/// fused estimate unbiased.
struct FusionWeight {
  Matrix W1;
  Matrix W2;
  Matrix H1;
  Matrix H2;

  static FusionWeight identity_h(Matrix w1, Matrix w2);

  Eigen::Index out_dim() const { return W1.rows(); }
  /// [W1, W2] as one n x 2n block row.
  Matrix stacked() const;
  /// [H1; H2] as one 2n x n stack.
  Matrix stacked_h() const;
  /// max-norm of W1 H1 + W2 H2 - I.
  double regularity_defect() const;
};

enum class BoundRule { kCi, kDual, kIci };
enum class Criterion { kTrace, kDet };

struct FusionResult {
  FusionWeight weight;
  SymMatrix fused_bound;
  std::optional<SymMatrix> fused_lower;
  double criterion_value = 0.0;
  BoundParams params;
};

/// Optimal fusion for exactly known cross-correlation:
/// W* = (H^T K^-1 H)^-1 H^T K^-1, K_F* = (H^T K^-1 H)^-1.
/// Throws std::domain_error when the joint matrix is singular.
FusionResult ideal_fusion(const JointCovariance& k, const Matrix& h1,
                          const Matrix& h2);
FusionResult ideal_fusion(const JointCovariance& k);

/// CI weights W = (w P1^-1 + (1-w) P2^-1)^-1 [w P1^-1, (1-w) P2^-1].
FusionWeight ci_weights(const SymMatrix& p1, const SymMatrix& p2, double w);

/// W B W^T for a 2n x 2n joint bound (or joint covariance) B.
SymMatrix fused_bound(const FusionWeight& w, const SymMatrix& b);

/// Fused lower bound W L W^T with L = lower_bound(P1, P2).
SymMatrix fused_lower(const FusionWeight& w, const SymMatrix& p1,
                      const SymMatrix& p2);

/// Weight induced by a joint upper bound: W* = (H^T M^-1 H)^-1 H^T M^-1.
FusionWeight weight_from_bound(const SymMatrix& m, const Matrix& h1,
                               const Matrix& h2);
FusionWeight weight_from_bound(const SymMatrix& m);

/// Minimise trace or determinant of the fused bound (H^T M^-1 H)^-1 over
/// the rule's scalar parameters (lambda for CI; mu, omega for DUAL/ICI).
/// Coarse grid followed by golden-section refinement; deterministic.
FusionResult optimize_bound(const SymMatrix& p1, const SymMatrix& p2,
                            BoundRule rule, Criterion criterion);

/// Golden-section minimisation of a unimodal scalar function on [a, b].
double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-10, int max_iter = 200);

/// Joint bound matrix for the given rule and parameters.
SymMatrix bound_for_rule(const SymMatrix& p1, const SymMatrix& p2,
                         BoundRule rule, const BoundParams& params);

}  // namespace cnfuse
