#include "cnfuse/fusion.hpp"

#include <cmath>
#include <limits>

namespace cnfuse {

namespace {

constexpr double kRegularityTol = 1e-10;

FusionResult fusion_from_bound(const SymMatrix& m, const Matrix& h1,
                               const Matrix& h2) {
  const Eigen::Index n2 = m.dim();
  Eigen::LDLT<Matrix> ldlt(m.m());
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-12 * ldlt.vectorD().maxCoeff()) {
    throw std::domain_error("fusion: joint matrix is singular");
  }
  Matrix h(n2, h1.cols());
  h.topRows(h1.rows()) = h1;
  h.bottomRows(h2.rows()) = h2;
  const Matrix minv_h = ldlt.solve(h);
  const Matrix gram = h.transpose() * minv_h;
  const Matrix kf = gram.inverse();
  const Matrix w = kf * minv_h.transpose();

  FusionResult r;
  r.weight.W1 = w.leftCols(h1.rows());
  r.weight.W2 = w.rightCols(h2.rows());
  r.weight.H1 = h1;
  r.weight.H2 = h2;
  r.fused_bound = SymMatrix(0.5 * (kf + kf.transpose()));
  return r;
}

}  // namespace

FusionWeight FusionWeight::identity_h(Matrix w1, Matrix w2) {
  const Eigen::Index n = w1.cols();
  FusionWeight w;
  w.W1 = std::move(w1);
  w.W2 = std::move(w2);
  w.H1 = Matrix::Identity(n, n);
  w.H2 = Matrix::Identity(n, n);
  return w;
}

Matrix FusionWeight::stacked() const {
  Matrix w(W1.rows(), W1.cols() + W2.cols());
  w.leftCols(W1.cols()) = W1;
  w.rightCols(W2.cols()) = W2;
  return w;
}

Matrix FusionWeight::stacked_h() const {
  Matrix h(H1.rows() + H2.rows(), H1.cols());
  h.topRows(H1.rows()) = H1;
  h.bottomRows(H2.rows()) = H2;
  return h;
}

double FusionWeight::regularity_defect() const {
  const Matrix d =
      W1 * H1 + W2 * H2 - Matrix::Identity(W1.rows(), W1.rows());
  return d.cwiseAbs().maxCoeff();
}

FusionResult ideal_fusion(const JointCovariance& k, const Matrix& h1,
                          const Matrix& h2) {
  FusionResult r = fusion_from_bound(k.full(), h1, h2);
  if (r.weight.regularity_defect() > kRegularityTol * 1e2) {
    throw std::domain_error("ideal_fusion: regularity condition failed");
  }
  return r;
}

FusionResult ideal_fusion(const JointCovariance& k) {
  const Eigen::Index n = k.block_dim();
  return ideal_fusion(k, Matrix::Identity(n, n), Matrix::Identity(n, n));
}

FusionWeight ci_weights(const SymMatrix& p1, const SymMatrix& p2, double w) {
  if (w <= 0.0 || w >= 1.0) {
    throw std::invalid_argument("ci_weights: w must lie in (0, 1)");
  }
  const Matrix p1inv = inverse_spd(p1).m();
  const Matrix p2inv = inverse_spd(p2).m();
  const Matrix mix_inv =
      inverse_spd(SymMatrix(w * p1inv + (1.0 - w) * p2inv)).m();
  return FusionWeight::identity_h(mix_inv * (w * p1inv),
                                  mix_inv * ((1.0 - w) * p2inv));
}

SymMatrix fused_bound(const FusionWeight& w, const SymMatrix& b) {
  const Matrix ws = w.stacked();
  if (ws.cols() != b.dim()) {
    throw std::invalid_argument("fused_bound: dimension mismatch");
  }
  return SymMatrix(ws * b.m() * ws.transpose());
}

SymMatrix fused_lower(const FusionWeight& w, const SymMatrix& p1,
                      const SymMatrix& p2) {
  return fused_bound(w, lower_bound(p1, p2));
}

FusionWeight weight_from_bound(const SymMatrix& m, const Matrix& h1,
                               const Matrix& h2) {
  return fusion_from_bound(m, h1, h2).weight;
}

FusionWeight weight_from_bound(const SymMatrix& m) {
  const Eigen::Index n = m.dim() / 2;
  return weight_from_bound(m, Matrix::Identity(n, n), Matrix::Identity(n, n));
}

double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_iter) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

SymMatrix bound_for_rule(const SymMatrix& p1, const SymMatrix& p2,
                         BoundRule rule, const BoundParams& params) {
  switch (rule) {
    case BoundRule::kCi:
      return ci_upper_bound(p1, p2, params.lam);
    case BoundRule::kDual:
      return dual_upper_bound(p1, p2, params.mu,
                              b_matrix(p1, p2, params.omega));
    case BoundRule::kIci:
      return ici_upper_bound(p1, p2, params.mu, params.omega);
  }
  throw std::invalid_argument("bound_for_rule: unknown rule");
}

FusionResult optimize_bound(const SymMatrix& p1, const SymMatrix& p2,
                            BoundRule rule, Criterion criterion) {
  if (min_eigenvalue(p1) <= 0.0 || min_eigenvalue(p2) <= 0.0) {
    throw std::domain_error("optimize_bound: inputs must be PD");
  }
  const Eigen::Index n = p1.dim();
  const Matrix id = Matrix::Identity(n, n);

  const auto crit = [criterion](const SymMatrix& kf) {
    return criterion == Criterion::kTrace ? kf.m().trace()
                                          : kf.m().determinant();
  };
  const auto eval = [&](const BoundParams& bp) {
    const SymMatrix m = bound_for_rule(p1, p2, rule, bp);
    return crit(fusion_from_bound(m, id, id).fused_bound);
  };

  // Coarse scan: log grid over the scale parameter, linear grid over omega.
  constexpr int kScalePts = 61;
  constexpr int kOmegaPts = 21;
  const auto scale_at = [](int i) {
    return std::pow(10.0, -3.0 + 6.0 * i / (kScalePts - 1));
  };
  const bool has_omega = rule != BoundRule::kCi;

  double best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  int best_j = 0;
  for (int i = 0; i < kScalePts; ++i) {
    const int jmax = has_omega ? kOmegaPts : 1;
    for (int j = 0; j < jmax; ++j) {
      BoundParams bp;
      bp.lam = bp.mu = scale_at(i);
      bp.omega = has_omega ? static_cast<double>(j) / (kOmegaPts - 1) : 0.5;
      const double v = eval(bp);
      // Strict < keeps the first (smallest-parameter) grid point on ties.
      if (v < best) {
        best = v;
        best_i = i;
        best_j = j;
      }
    }
  }

  BoundParams bp;
  bp.omega = has_omega ? static_cast<double>(best_j) / (kOmegaPts - 1) : 0.5;
  bp.lam = bp.mu = scale_at(best_i);

  // Golden-section refinement on the bracketing cells, alternating between
  // the two parameters for the two-parameter rules.
  const int passes = has_omega ? 2 : 1;
  for (int pass = 0; pass < passes; ++pass) {
    const double lo = std::log10(scale_at(std::max(best_i - 1, 0)));
    const double hi = std::log10(scale_at(std::min(best_i + 1, kScalePts - 1)));
    const double s = golden_section_min(
        [&](double ls) {
          BoundParams q = bp;
          q.lam = q.mu = std::pow(10.0, ls);
          return eval(q);
        },
        lo, hi);
    bp.lam = bp.mu = std::pow(10.0, s);
    if (has_omega) {
      const double wlo =
          std::max(0.0, bp.omega - 1.0 / (kOmegaPts - 1));
      const double whi =
          std::min(1.0, bp.omega + 1.0 / (kOmegaPts - 1));
      bp.omega = golden_section_min(
          [&](double om) {
            BoundParams q = bp;
            q.omega = om;
            return eval(q);
          },
          wlo, whi);
    }
  }
  bp.w = weight_from_lambda(bp.lam);

  const SymMatrix m = bound_for_rule(p1, p2, rule, bp);
  FusionResult r = fusion_from_bound(m, id, id);
  r.fused_lower = fused_lower(r.weight, p1, p2);
  r.criterion_value = crit(r.fused_bound);
  r.params = bp;
  return r;
}

}  // namespace cnfuse
