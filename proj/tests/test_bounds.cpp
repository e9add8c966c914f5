#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cnfuse/bounds.hpp"
#include "cnfuse/families.hpp"
#include "test_util.hpp"

using namespace cnfuse;
using namespace cnfuse::testutil;

TEST_CASE("b_matrix") {
  const SymMatrix p1 = example_p1();
  const SymMatrix p2 = example_p2();
  CHECK(max_abs_diff(b_matrix(p1, p2, 1.0).m(), p1.m()) < 1e-10);
  CHECK(max_abs_diff(b_matrix(p1, p2, 0.0).m(), p2.m()) < 1e-10);
  // P1^-1 + P2^-1 = (13/27) I, so B(1/2) = (54/13) I.
  CHECK(max_abs_diff(b_matrix(p1, p2, 0.5).m(),
                     (54.0 / 13.0) * Matrix::Identity(2, 2)) < 1e-12);
  CHECK(max_abs_diff(b_matrix(p1, p1, 0.3).m(), p1.m()) < 1e-10);
  CHECK_THROWS_AS(b_matrix(p1, p2, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(b_matrix(p1, p2, -0.1), std::invalid_argument);
}

TEST_CASE("check_b_property") {
  const SymMatrix p1 = example_p1();
  const SymMatrix p2 = example_p2();
  for (double om : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(check_b_property(p1, p2, b_matrix(p1, p2, om), 91));
  }
  // A B that is too small in some direction fails the max-quadratic-form
  // property.
  CHECK_FALSE(check_b_property(p1, p2, SymMatrix::Scaled(2, 0.5), 91));
}

TEST_CASE("dual_upper_bound block structure") {
  const SymMatrix p1 = example_p1();
  const SymMatrix p2 = example_p2();
  SUBCASE("identity pair") {
    const SymMatrix i2 = SymMatrix::Identity(2);
    const SymMatrix m = dual_upper_bound(i2, i2, 1.0, b_matrix(i2, i2, 0.5));
    Matrix expect(4, 4);
    expect << 1.5, 0, 0.5, 0, 0, 1.5, 0, 0.5, 0.5, 0, 1.5, 0, 0, 0.5, 0, 1.5;
    CHECK(max_abs_diff(m.m(), expect) < 1e-12);
  }
  SUBCASE("worked pair at mu = 1, omega = 1/2") {
    const SymMatrix m = dual_upper_bound(p1, p2, 1.0, b_matrix(p1, p2, 0.5));
    const Matrix off = m.m().topRightCorner(2, 2);
    CHECK(max_abs_diff(off, (27.0 / 13.0) * Matrix::Identity(2, 2)) < 1e-12);
    CHECK(max_abs_diff(m.m().topLeftCorner(2, 2),
                       p1.m() + (27.0 / 13.0) * Matrix::Identity(2, 2)) <
          1e-12);
    CHECK(max_abs_diff(m.m().bottomRightCorner(2, 2),
                       p2.m() + (27.0 / 13.0) * Matrix::Identity(2, 2)) <
          1e-12);
  }
  CHECK_THROWS_AS(dual_upper_bound(p1, p2, 0.0, b_matrix(p1, p2, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("dual bound dominates the common-noise family") {
  const SymMatrix p1 = example_p1();
  const SymMatrix p2 = example_p2();
  Rng rng(47);
  for (double mu : {1.0 / 3.0, 1.0, 3.0}) {
    for (double om : {0.0, 0.5, 1.0}) {
      const SymMatrix m = dual_upper_bound(p1, p2, mu, b_matrix(p1, p2, om));
      const double scale = spectral_norm(m);
      for (int i = 0; i < 200; ++i) {
        const AdmissibleX x = sample_rank1(p1, p2, random_unit_vector(2, rng));
        const SymMatrix diff = m - joint_from_x(p1, p2, x).full();
        CHECK(min_eigenvalue(diff) >= -1e-9 * scale);
      }
    }
  }
}

TEST_CASE("Schur complement of M - K equals 2 mu (X - X B^-1 X)") {
  Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 3);
    const SymMatrix p1 = random_spd(n, rng);
    const SymMatrix p2 = random_spd(n, rng);
    const double mu = std::exp(0.5 * (static_cast<double>(rng() % 100) / 50 - 1));
    const SymMatrix b = b_matrix(p1, p2, 0.25);
    const AdmissibleX x = sample_rank1(p1, p2, random_unit_vector(n, rng));
    const SymMatrix m = dual_upper_bound(p1, p2, mu, b);
    const SymMatrix diff = m - joint_from_x(p1, p2, x).full();
    const JointCovariance d{SymMatrix(diff.m().topLeftCorner(n, n)),
                            SymMatrix(diff.m().bottomRightCorner(n, n)),
                            diff.m().topRightCorner(n, n)};
    const Matrix lhs = schur_complement(d).m();
    const Matrix binv = inverse_spd(b).m();
    const Matrix rhs = 2.0 * mu * (x.X.m() - x.X.m() * binv * x.X.m());
    CHECK(max_abs_diff(lhs, rhs) <= 1e-10 * std::max(1.0, rhs.norm()));
  }
}

TEST_CASE("monotonicity: inflated construction still dominates") {
  Rng rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 2);
    const SymMatrix p1 = random_spd(n, rng);
    const SymMatrix p2 = random_spd(n, rng);
    const SymMatrix p1_big = p1 + random_spd(n, rng, 0.0, 1.0);
    const SymMatrix p2_big = p2 + random_spd(n, rng, 0.0, 1.0);
    const SymMatrix m =
        dual_upper_bound(p1_big, p2_big, 1.0, b_matrix(p1_big, p2_big, 0.5));
    const AdmissibleX x = sample_rank1(p1, p2, random_unit_vector(n, rng));
    const SymMatrix diff = m - joint_from_x(p1, p2, x).full();
    CHECK(min_eigenvalue(diff) >= -1e-9 * spectral_norm(m));
  }
}

TEST_CASE("ci_upper_bound") {
  const SymMatrix p1 = example_p1();
  const SymMatrix p2 = example_p2();
  const SymMatrix m1 = ci_upper_bound(p1, p2, 1.0);
  CHECK(max_abs_diff(m1.m().topLeftCorner(2, 2), 2.0 * p1.m()) < 1e-12);
  CHECK(max_abs_diff(m1.m().bottomRightCorner(2, 2), 2.0 * p2.m()) < 1e-12);
  CHECK(m1.m().topRightCorner(2, 2).cwiseAbs().maxCoeff() == 0.0);
  // Large lambda inflates the second block unboundedly.
  const SymMatrix big = ci_upper_bound(p1, p2, 1e6);
  CHECK(big.m().bottomRightCorner(2, 2).norm() / p2.m().norm() >= 1e6);
  // CI bound dominates the dual bound at matched parameters.
  const SymMatrix m = dual_upper_bound(p1, p2, 1.0, b_matrix(p1, p2, 0.5));
  CHECK(is_psd(m1 - m, 1e-10));
  CHECK_THROWS_AS(ci_upper_bound(p1, p2, 0.0), std::invalid_argument);
}

TEST_CASE("ici_upper_bound") {
  const SymMatrix p1 = example_p1();
  const SymMatrix p2 = example_p2();
  SUBCASE("identity pair") {
    const SymMatrix i2 = SymMatrix::Identity(2);
    for (double om : {0.0, 0.5, 1.0}) {
      const SymMatrix m = ici_upper_bound(i2, i2, 1.0, om);
      Matrix expect(4, 4);
      expect << 1.5, 0, 0.5, 0, 0, 1.5, 0, 0.5, 0.5, 0, 1.5, 0, 0, 0.5, 0,
          1.5;
      CHECK(max_abs_diff(m.m(), expect) < 1e-12);
    }
  }
  SUBCASE("worked off-diagonal block: (1/13) P1 P2 = (27/13) I") {
    const SymMatrix m = ici_upper_bound(p1, p2, 1.0, 0.5);
    CHECK(max_abs_diff(m.m().topRightCorner(2, 2),
                       (27.0 / 13.0) * Matrix::Identity(2, 2)) < 1e-12);
  }
  SUBCASE("dominates sampled ICI joints") {
    const JointSampler sampler =
        family_sampler(CorrelationFamily::kIci, p1, p2);
    Rng rng(61);
    for (double mu : {1.0 / 3.0, 1.0, 3.0}) {
      const SymMatrix m = ici_upper_bound(p1, p2, mu, 0.5);
      const double scale = spectral_norm(m);
      for (int i = 0; i < 200; ++i) {
        CHECK(min_eigenvalue(m - sampler(rng).full()) >= -1e-9 * scale);
      }
    }
  }
  CHECK_THROWS_AS(ici_upper_bound(p1, p2, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ici_upper_bound(p1, p2, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("lower_bound") {
  const SymMatrix p1 = example_p1();
  const SymMatrix p2 = example_p2();
  SUBCASE("equal pair") {
    const SymMatrix l = lower_bound(p1, p1);
    for (int bi = 0; bi < 2; ++bi) {
      for (int bj = 0; bj < 2; ++bj) {
        CHECK(max_abs_diff(l.m().block(2 * bi, 2 * bj, 2, 2), 0.5 * p1.m()) <
              1e-10);
      }
    }
  }
  SUBCASE("worked blocks via P1 + P2 = 13 I") {
    const SymMatrix l = lower_bound(p1, p2);
    Matrix l11(2, 2), l22(2, 2);
    l11 << 90, 39, 39, 25;
    l22 << 25, -39, -39, 90;
    CHECK(max_abs_diff(l.m().topLeftCorner(2, 2), l11 / 13.0) < 1e-12);
    CHECK(max_abs_diff(l.m().bottomRightCorner(2, 2), l22 / 13.0) < 1e-12);
    CHECK(max_abs_diff(l.m().topRightCorner(2, 2),
                       (27.0 / 13.0) * Matrix::Identity(2, 2)) < 1e-12);
  }
  SUBCASE("dominated by every sampled common-noise joint") {
    const SymMatrix l = lower_bound(p1, p2);
    Rng rng(67);
    for (int i = 0; i < 500; ++i) {
      const AdmissibleX x =
          (i % 2 == 0)
              ? sample_rank1(p1, p2, random_unit_vector(2, rng))
              : sample_omega(omega_factorization(p1, p2),
                             random_contraction(1, 1, rng));
      const SymMatrix k = joint_from_x(p1, p2, x).full();
      CHECK(min_eigenvalue(k - l) >= -1e-9 * spectral_norm(k));
    }
  }
}

TEST_CASE("ci_dominance_gap identity and PSD") {
  const SymMatrix p1 = example_p1();
  const SymMatrix p2 = example_p2();
  SUBCASE("equal pair, lambda = 1") {
    const SymMatrix gap = ci_dominance_gap(p1, p1, 1.0);
    CHECK(max_abs_diff(gap.m().topLeftCorner(2, 2), 0.5 * p1.m()) < 1e-10);
    CHECK(max_abs_diff(gap.m().topRightCorner(2, 2), -0.5 * p1.m()) < 1e-10);
  }
  SUBCASE("worked pair, lambda = 1") {
    const SymMatrix gap = ci_dominance_gap(p1, p2, 1.0);
    Matrix q11(2, 2), q22(2, 2);
    q11 << 90, 39, 39, 25;
    q22 << 25, -39, -39, 90;
    CHECK(max_abs_diff(gap.m().topLeftCorner(2, 2), q11 / 13.0) < 1e-12);
    CHECK(max_abs_diff(gap.m().topRightCorner(2, 2),
                       (-27.0 / 13.0) * Matrix::Identity(2, 2)) < 1e-12);
    CHECK(max_abs_diff(gap.m().bottomRightCorner(2, 2), q22 / 13.0) < 1e-12);
  }
  SUBCASE("outer-product identity and rank on random pairs") {
    Rng rng(71);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 3);
      const SymMatrix q1 = random_spd(n, rng);
      const SymMatrix q2 = random_spd(n, rng);
      for (double lam : {1.0 / 3.0, 1.0, 3.0}) {
        const SymMatrix gap = ci_dominance_gap(q1, q2, lam);
        Matrix stacked(2 * n, n);
        stacked.topRows(n) = q1.m() / std::sqrt(lam);
        stacked.bottomRows(n) = -std::sqrt(lam) * q2.m();
        const Matrix outer =
            stacked * inverse_spd(q1 + q2).m() * stacked.transpose();
        const double scale = spectral_norm(ci_upper_bound(q1, q2, lam));
        CHECK(max_abs_diff(gap.m(), outer) <= 1e-10 * scale);
        CHECK(is_psd(gap, 1e-10));
        // Congruence of an n x n matrix: rank at most n.
        Eigen::SelfAdjointEigenSolver<Matrix> es(gap.m(),
                                                 Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().head(n).cwiseAbs().maxCoeff() <= 1e-9 * scale);
      }
    }
  }
}
