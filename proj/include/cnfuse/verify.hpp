#pragma once

#include <cstdint>

#include "cnfuse/families.hpp"
#include "cnfuse/sym_matrix.hpp"

namespace cnfuse {

/// Result of a sampled Loewner-dominance check.
struct VerifyReport {
  double min_margin = 0.0;  // min over samples of min eig of the difference
  long worst_sample = -1;   // global index of the minimising sample
  long n_samples = 0;

  bool violated(double scale) const { return min_margin < -1e-8 * scale; }
};

/// min over samples K of min-eig(bound - K). The sample stream is split
/// into fixed-size chunks with per-chunk seeds, so the parallel and serial
/// kernels produce identical results for any thread count.
VerifyReport verify_upper(const SymMatrix& bound, const JointSampler& sampler,
                          long n_samples, std::uint64_t seed);
VerifyReport verify_upper_serial(const SymMatrix& bound,
                                 const JointSampler& sampler, long n_samples,
                                 std::uint64_t seed);

/// min over samples K of min-eig(K - lower).
VerifyReport verify_lower(const SymMatrix& lower, const JointSampler& sampler,
                          long n_samples, std::uint64_t seed);
VerifyReport verify_lower_serial(const SymMatrix& lower,
                                 const JointSampler& sampler, long n_samples,
                                 std::uint64_t seed);

}  // namespace cnfuse
