#include "cnfuse/geometry.hpp"

#include <cmath>
#include <numbers>

#include "cnfuse/families.hpp"

namespace cnfuse {

EllipsePolyline ellipse_boundary(const SymMatrix& s, int m,
                                 std::string label) {
  if (s.dim() != 2) {
    throw std::invalid_argument("ellipse_boundary: 2x2 matrices only");
  }
  if (m < 16) {
    throw std::invalid_argument("ellipse_boundary: need at least 16 points");
  }
  const Matrix root = spd_sqrt(s);  // throws on indefinite input
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.m(), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();

  EllipsePolyline poly;
  poly.label = std::move(label);
  poly.degenerate = lo <= 1e-10 * std::max(hi, 1e-300);
  poly.points.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * std::numbers::pi * k / m;
    poly.points.emplace_back(root * Eigen::Vector2d(std::cos(t), std::sin(t)));
  }
  return poly;
}

std::vector<SymMatrix> fused_set_samples(const SymMatrix& p1,
                                         const SymMatrix& p2,
                                         const FusionWeight& w,
                                         CorrelationFamily family,
                                         int n_samples, std::uint64_t seed) {
  if (w.regularity_defect() > 1e-8) {
    throw std::invalid_argument("fused_set_samples: irregular weight");
  }
  const Eigen::Index n = p1.dim();
  Rng rng(mix_seed(seed, 0));
  std::vector<SymMatrix> out;
  out.reserve(static_cast<std::size_t>(n_samples) + 1);

  if (family == CorrelationFamily::kCommonNoiseRank1 ||
      family == CorrelationFamily::kCommonNoiseOmega) {
    // The zero-correlation member belongs to every common-noise family.
    out.push_back(
        fused_bound(w, JointCovariance{p1, p2, Matrix::Zero(n, n)}.full()));
  }

  const JointSampler sampler = family_sampler(family, p1, p2);
  for (int i = 0; i < n_samples; ++i) {
    out.push_back(fused_bound(w, sampler(rng).full()));
  }
  return out;
}

bool ellipse_contains(const SymMatrix& s_outer, const SymMatrix& s_inner,
                      double tol) {
  return loewner_geq(s_outer, s_inner, tol);
}

}  // namespace cnfuse
