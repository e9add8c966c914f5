#pragma once

#include <string>
#include <vector>

#include "cnfuse/families.hpp"
#include "cnfuse/fusion.hpp"
#include "cnfuse/random.hpp"
#include "cnfuse/sym_matrix.hpp"

namespace cnfuse {

/// Sampled boundary of the centered ellipse {e : e^T S^-1 e = 1}. A rank-1
/// S collapses the boundary to the segment between -v and v with S = v v^T.
struct EllipsePolyline {
  std::vector<Eigen::Vector2d> points;
  std::string label;
  bool degenerate = false;
};

/// Boundary points e_k = S^{1/2} [cos t_k, sin t_k]^T, t_k = 2 pi k / m.
EllipsePolyline ellipse_boundary(const SymMatrix& s, int m,
                                 std::string label = {});

/// Fused covariances W K W^T for seeded random members of the requested
/// correlation family (n = 2 only; figure data).
std::vector<SymMatrix> fused_set_samples(const SymMatrix& p1,
                                         const SymMatrix& p2,
                                         const FusionWeight& w,
                                         CorrelationFamily family,
                                         int n_samples, std::uint64_t seed);

/// Centered-ellipsoid inclusion: E(S_inner) lies inside E(S_outer) iff
/// S_outer >= S_inner in the Loewner order.
bool ellipse_contains(const SymMatrix& s_outer, const SymMatrix& s_inner,
                      double tol);

}  // namespace cnfuse
