#include "cnfuse/families.hpp"

#include <algorithm>
#include <cmath>

namespace cnfuse {

namespace {
constexpr double kFamilyTol = 1e-9;
}

JointCovariance joint_from_x(const SymMatrix& p1, const SymMatrix& p2,
                             const AdmissibleX& x) {
  if (!is_psd(x.X, kFamilyTol) || !loewner_geq(p1, x.X, kFamilyTol) ||
      !loewner_geq(p2, x.X, kFamilyTol)) {
    throw std::domain_error("joint_from_x: X outside the common-noise family");
  }
  return JointCovariance{p1, p2, x.X.m()};
}

JointValidity validate_joint(const JointCovariance& k, double tol) {
  const SymMatrix full = k.full();
  JointValidity v;
  v.margin = min_eigenvalue(full);
  v.valid = is_psd(full, tol);
  return v;
}

AdmissibleX sample_rank1(const SymMatrix& p1, const SymMatrix& p2,
                         const Vector& x) {
  if (x.norm() < 1e-12) {
    throw std::invalid_argument("sample_rank1: zero direction");
  }
  if (std::abs(x.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("sample_rank1: direction must be unit length");
  }
  const double a1 = x.dot(Eigen::LLT<Matrix>(p1.m()).solve(x));
  const double a2 = x.dot(Eigen::LLT<Matrix>(p2.m()).solve(x));
  AdmissibleX out;
  out.provenance = AdmissibleX::Provenance::kRank1;
  out.binding_index = a2 > a1 ? 2 : 1;
  out.X = SymMatrix((x * x.transpose()) / std::max(a1, a2));
  return out;
}

OmegaFactorization omega_factorization(const SymMatrix& p1,
                                       const SymMatrix& p2) {
  OmegaFactorization f;
  f.gevd = gevd(p1, p2);
  const Eigen::Index n = f.gevd.D.size();
  f.M.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double d = f.gevd.D(j);
    f.M(j) = std::max(d, 1.0);
    // Eigenvalues at 1 within tolerance belong to neither index set.
    if (d < 1.0 - kFamilyTol) {
      f.E1.push_back(j);
    } else if (d > 1.0 + kFamilyTol) {
      f.E2.push_back(j);
    }
  }
  f.S1.resize(static_cast<Eigen::Index>(f.E1.size()));
  for (std::size_t i = 0; i < f.E1.size(); ++i) {
    f.S1(static_cast<Eigen::Index>(i)) = 1.0 / (1.0 / f.gevd.D(f.E1[i]) - 1.0);
  }
  f.S2.resize(static_cast<Eigen::Index>(f.E2.size()));
  for (std::size_t i = 0; i < f.E2.size(); ++i) {
    f.S2(static_cast<Eigen::Index>(i)) = 1.0 / (1.0 - 1.0 / f.gevd.D(f.E2[i]));
  }
  return f;
}

AdmissibleX sample_omega(const OmegaFactorization& f, const Matrix& omega) {
  const Eigen::Index p = static_cast<Eigen::Index>(f.E1.size());
  const Eigen::Index q = static_cast<Eigen::Index>(f.E2.size());
  if (omega.rows() != p || omega.cols() != q) {
    throw std::invalid_argument("sample_omega: Omega must be |E1| x |E2|");
  }
  const Eigen::Index n = f.M.size();
  AdmissibleX out;
  out.provenance = AdmissibleX::Provenance::kOmega;

  if (p + q == 0) {
    // P1 = P2 up to tolerance; the family collapses to the single member P1.
    const Matrix vinv_t = f.gevd.V.transpose().inverse();
    out.X = SymMatrix(vinv_t * f.M.asDiagonal() * vinv_t.transpose());
    return out;
  }

  if (p > 0 && q > 0 &&
      !is_psd(SymMatrix(Matrix::Identity(p, p) - omega * omega.transpose()),
              kFamilyTol)) {
    throw std::invalid_argument("sample_omega: Omega is not a contraction");
  }

  // Sigma_Omega = [S1, S1^{1/2} Omega S2^{1/2}; sym, S2]; element-wise roots
  // since the Sigma_i are diagonal.
  Matrix sigma = Matrix::Zero(p + q, p + q);
  sigma.topLeftCorner(p, p) = Matrix(f.S1.asDiagonal());
  sigma.bottomRightCorner(q, q) = Matrix(f.S2.asDiagonal());
  const Vector s1h = f.S1.cwiseSqrt();
  const Vector s2h = f.S2.cwiseSqrt();
  sigma.topRightCorner(p, q) = s1h.asDiagonal() * omega * s2h.asDiagonal();
  sigma.bottomLeftCorner(q, p) = sigma.topRightCorner(p, q).transpose();

  Matrix e = Matrix::Zero(p + q, n);
  for (Eigen::Index i = 0; i < p; ++i) e(i, f.E1[i]) = 1.0;
  for (Eigen::Index i = 0; i < q; ++i) e(p + i, f.E2[i]) = 1.0;

  // (M^-1 + E^T Sigma^-1 E)^-1 = M - M E^T (Sigma + E M E^T)^-1 E M.
  // This limit form stays finite when Sigma_Omega is singular (|Omega| at
  // the contraction boundary), where the member degenerates to reduced rank.
  const Matrix em = e * Matrix(f.M.asDiagonal());
  const Matrix core = sigma + em * e.transpose();
  const Matrix inner_inv =
      Matrix(f.M.asDiagonal()) -
      em.transpose() * Eigen::LLT<Matrix>(core).solve(em);

  const Matrix vinv = f.gevd.V.inverse();
  out.X = SymMatrix(vinv.transpose() * 0.5 *
                    (inner_inv + inner_inv.transpose()) * vinv);
  return out;
}

JointCovariance sample_ci_general(const SymMatrix& p1, const SymMatrix& p2,
                                  const Matrix& c) {
  if (c.rows() != p1.dim() || c.cols() != p2.dim()) {
    throw std::invalid_argument("sample_ci_general: bad contraction dims");
  }
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::min(s(i), 1.0);
  const Matrix clipped = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  return JointCovariance{p1, p2, spd_sqrt(p1) * clipped * spd_sqrt(p2)};
}

JointCovariance sample_ici(const SymMatrix& p1, const SymMatrix& p2,
                           const SymMatrix& g) {
  const SymMatrix p1inv = inverse_spd(p1);
  const SymMatrix p2inv = inverse_spd(p2);
  if (!is_psd(g, kFamilyTol) || !loewner_geq(p1inv, g, kFamilyTol) ||
      !loewner_geq(p2inv, g, kFamilyTol)) {
    throw std::domain_error("sample_ici: Gamma outside the ICI family");
  }
  return JointCovariance{p1, p2, p1.m() * g.m() * p2.m()};
}

JointSampler family_sampler(CorrelationFamily family, const SymMatrix& p1,
                            const SymMatrix& p2) {
  const Eigen::Index n = p1.dim();
  switch (family) {
    case CorrelationFamily::kCommonNoiseRank1:
      return [p1, p2, n](Rng& rng) {
        return joint_from_x(p1, p2,
                            sample_rank1(p1, p2, random_unit_vector(n, rng)));
      };
    case CorrelationFamily::kCommonNoiseOmega: {
      auto fac = omega_factorization(p1, p2);
      const auto p = static_cast<Eigen::Index>(fac.E1.size());
      const auto q = static_cast<Eigen::Index>(fac.E2.size());
      return [p1, p2, fac = std::move(fac), p, q](Rng& rng) {
        return joint_from_x(p1, p2,
                            sample_omega(fac, random_contraction(p, q, rng)));
      };
    }
    case CorrelationFamily::kCiGeneral:
      return [p1, p2, n](Rng& rng) {
        return sample_ci_general(p1, p2, random_contraction(n, n, rng));
      };
    case CorrelationFamily::kIci: {
      // Gamma admissible for (P1, P2) iff it is a common-noise member of
      // the inverted pair.
      const SymMatrix p1inv = inverse_spd(p1);
      const SymMatrix p2inv = inverse_spd(p2);
      auto fac = omega_factorization(p1inv, p2inv);
      const auto p = static_cast<Eigen::Index>(fac.E1.size());
      const auto q = static_cast<Eigen::Index>(fac.E2.size());
      return [p1, p2, p1inv, p2inv, fac = std::move(fac), p, q,
              n](Rng& rng) {
        const bool rank1 = (rng() & 1U) != 0U;
        const AdmissibleX g =
            rank1 ? sample_rank1(p1inv, p2inv, random_unit_vector(n, rng))
                  : sample_omega(fac, random_contraction(p, q, rng));
        return sample_ici(p1, p2, g.X);
      };
    }
  }
  throw std::invalid_argument("family_sampler: unknown family");
}

}  // namespace cnfuse
