#pragma once

#include "cnfuse/sym_matrix.hpp"

namespace cnfuse {

/// Scalar parameters selecting a member of a bound family. w and lam are
/// tied by w = (1 + 1/lam)^-1 when both are set.
struct BoundParams {
  double mu = 1.0;      // > 0
  double omega = 0.5;   // in [0, 1]
  double lam = 1.0;     // > 0
  double w = 0.5;       // in (0, 1)
};

inline double weight_from_lambda(double lam) { return 1.0 / (1.0 + 1.0 / lam); }

/// B(omega) = (omega P1^-1 + (1-omega) P2^-1)^-1. Satisfies
/// x^T B^-1 x <= max{x^T P1^-1 x, x^T P2^-1 x} for all x.
SymMatrix b_matrix(const SymMatrix& p1, const SymMatrix& p2, double omega);

/// Spot-check of the defining property of a candidate B on k random
/// directions; used by the escape hatch that accepts an externally
/// supplied B.
bool check_b_property(const SymMatrix& p1, const SymMatrix& p2,
                      const SymMatrix& b, std::uint64_t seed,
                      int n_directions = 64);

/// Upper bound of the common-noise family:
/// blkdiag(P1, P2) + (1/2) [mu^-1/2 I; mu^1/2 I] B [.]^T.
SymMatrix dual_upper_bound(const SymMatrix& p1, const SymMatrix& p2,
                           double mu, const SymMatrix& b);

/// CI bound for unrestricted correlation: blkdiag((1+1/lam) P1, (1+lam) P2).
SymMatrix ci_upper_bound(const SymMatrix& p1, const SymMatrix& p2, double lam);

/// ICI bound for the common-information family:
/// blkdiag(P1, P2) + (1/2) [mu^-1/2 P1; mu^1/2 P2]
///   (omega P1 + (1-omega) P2)^-1 [.]^T.
SymMatrix ici_upper_bound(const SymMatrix& p1, const SymMatrix& p2, double mu,
                          double omega);

/// Lower bound of the common-noise family:
/// L = [P1; P2] (P1 + P2)^-1 [P1; P2]^T.
SymMatrix lower_bound(const SymMatrix& p1, const SymMatrix& p2);

/// M_CI(lam) - M(mu = lam, omega = 1/2); equals the rank-n outer product
/// [lam^-1/2 P1; -lam^1/2 P2] (P1 + P2)^-1 [.]^T and is PSD.
SymMatrix ci_dominance_gap(const SymMatrix& p1, const SymMatrix& p2,
                           double lam);

}  // namespace cnfuse
