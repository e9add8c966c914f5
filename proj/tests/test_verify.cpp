#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cnfuse/bounds.hpp"
#include "cnfuse/verify.hpp"
#include "test_util.hpp"

using namespace cnfuse;
using namespace cnfuse::testutil;

TEST_CASE("parallel kernel matches the serial reference exactly") {
  const SymMatrix p1 = example_p1();
  const SymMatrix p2 = example_p2();
  const SymMatrix m = dual_upper_bound(p1, p2, 1.0, b_matrix(p1, p2, 0.5));
  const SymMatrix l = lower_bound(p1, p2);
  for (CorrelationFamily fam :
       {CorrelationFamily::kCommonNoiseRank1,
        CorrelationFamily::kCommonNoiseOmega, CorrelationFamily::kCiGeneral}) {
    const JointSampler sampler = family_sampler(fam, p1, p2);
    for (long n : {1L, 63L, 64L, 65L, 1000L}) {
      const VerifyReport par = verify_upper(m, sampler, n, 42);
      const VerifyReport ser = verify_upper_serial(m, sampler, n, 42);
      CHECK(par.min_margin == ser.min_margin);
      CHECK(par.worst_sample == ser.worst_sample);
      const VerifyReport parl = verify_lower(l, sampler, n, 42);
      const VerifyReport serl = verify_lower_serial(l, sampler, n, 42);
      CHECK(parl.min_margin == serl.min_margin);
      CHECK(parl.worst_sample == serl.worst_sample);
    }
  }
}

TEST_CASE("dominance margins on the worked pair") {
  const SymMatrix p1 = example_p1();
  const SymMatrix p2 = example_p2();
  const SymMatrix m = dual_upper_bound(p1, p2, 1.0, b_matrix(p1, p2, 0.5));
  const SymMatrix mci = ci_upper_bound(p1, p2, 1.0);
  const SymMatrix l = lower_bound(p1, p2);

  SUBCASE("dual bound vs common-noise samplers") {
    for (CorrelationFamily fam : {CorrelationFamily::kCommonNoiseRank1,
                                  CorrelationFamily::kCommonNoiseOmega}) {
      const VerifyReport r =
          verify_upper(m, family_sampler(fam, p1, p2), 2000, 42);
      CHECK(r.min_margin >= -1e-9 * spectral_norm(m));
      CHECK_FALSE(r.violated(spectral_norm(m)));
    }
  }
  SUBCASE("CI bound vs the unrestricted sampler") {
    const VerifyReport r = verify_upper(
        mci, family_sampler(CorrelationFamily::kCiGeneral, p1, p2), 2000, 42);
    CHECK(r.min_margin >= -1e-9 * spectral_norm(mci));
  }
  SUBCASE("dual bound fails against the unrestricted sampler") {
    const VerifyReport r = verify_upper(
        m, family_sampler(CorrelationFamily::kCiGeneral, p1, p2), 5000, 42);
    CHECK(r.violated(spectral_norm(m)));
    CHECK(r.min_margin < -1e-6);
    CHECK(r.worst_sample >= 0);
  }
  SUBCASE("lower bound vs both common-noise samplers") {
    for (CorrelationFamily fam : {CorrelationFamily::kCommonNoiseRank1,
                                  CorrelationFamily::kCommonNoiseOmega}) {
      const VerifyReport r =
          verify_lower(l, family_sampler(fam, p1, p2), 2000, 42);
      CHECK(r.min_margin >= -1e-9 * 13.0);
    }
  }
}
