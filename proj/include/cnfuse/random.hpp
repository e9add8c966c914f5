#pragma once

#include <cstdint>
#include <random>

#include "cnfuse/sym_matrix.hpp"

namespace cnfuse {

using Rng = std::mt19937_64;

/// Stable mix of a base seed with a stream index, so parallel chunks get
/// independent deterministic streams (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform direction on the unit sphere.
Vector random_unit_vector(Eigen::Index n, Rng& rng);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// R-diagonal sign fix).
Matrix random_orthogonal(Eigen::Index n, Rng& rng);

/// U diag(s) V^T with U, V Haar orthogonal and singular values s uniform
/// on [0, 1]; always a contraction.
Matrix random_contraction(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Random SPD matrix with eigenvalues uniform on [lo, hi].
SymMatrix random_spd(Eigen::Index n, Rng& rng, double lo = 0.2,
                     double hi = 5.0);

}  // namespace cnfuse
