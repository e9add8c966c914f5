#include "cnfuse/verify.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cnfuse {

namespace {

constexpr long kChunk = 64;

struct ChunkResult {
  double min_margin;
  long worst_sample;
};

ChunkResult run_chunk(const SymMatrix& ref, bool upper,
                      const JointSampler& sampler, long first, long count,
                      std::uint64_t seed, std::uint64_t chunk_index) {
  Rng rng(mix_seed(seed, chunk_index));
  ChunkResult r{std::numeric_limits<double>::infinity(), -1};
  for (long i = 0; i < count; ++i) {
    const SymMatrix k = sampler(rng).full();
    const double margin =
        upper ? min_eigenvalue(ref - k) : min_eigenvalue(k - ref);
    if (margin < r.min_margin) {
      r.min_margin = margin;
      r.worst_sample = first + i;
    }
  }
  return r;
}

VerifyReport run(const SymMatrix& ref, bool upper, const JointSampler& sampler,
                 long n_samples, std::uint64_t seed, bool parallel) {
  const long n_chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<ChunkResult> chunks(static_cast<std::size_t>(n_chunks));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (long c = 0; c < n_chunks; ++c) {
    const long first = c * kChunk;
    const long count = std::min(kChunk, n_samples - first);
    chunks[static_cast<std::size_t>(c)] =
        run_chunk(ref, upper, sampler, first, count, seed,
                  static_cast<std::uint64_t>(c));
  }

  // Serial reduction over ordered chunk results keeps the argmin (and
  // therefore the whole report) independent of the thread schedule.
  VerifyReport report;
  report.n_samples = n_samples;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (const ChunkResult& c : chunks) {
    if (c.worst_sample >= 0 && c.min_margin < report.min_margin) {
      report.min_margin = c.min_margin;
      report.worst_sample = c.worst_sample;
    }
  }
  return report;
}

}  // namespace

VerifyReport verify_upper(const SymMatrix& bound, const JointSampler& sampler,
                          long n_samples, std::uint64_t seed) {
  return run(bound, true, sampler, n_samples, seed, true);
}

VerifyReport verify_upper_serial(const SymMatrix& bound,
                                 const JointSampler& sampler, long n_samples,
                                 std::uint64_t seed) {
  return run(bound, true, sampler, n_samples, seed, false);
}

VerifyReport verify_lower(const SymMatrix& lower, const JointSampler& sampler,
                          long n_samples, std::uint64_t seed) {
  return run(lower, false, sampler, n_samples, seed, true);
}

VerifyReport verify_lower_serial(const SymMatrix& lower,
                                 const JointSampler& sampler, long n_samples,
                                 std::uint64_t seed) {
  return run(lower, false, sampler, n_samples, seed, false);
}

}  // namespace cnfuse
