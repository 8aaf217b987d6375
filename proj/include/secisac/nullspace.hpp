#pragma once

#include <stdexcept>

#include "secisac/types.hpp"

namespace secisac {

/// Thrown when the stacked channel matrix is numerically rank deficient.
/// Carries the offending singular-value ratio so callers can resample.
class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(const std::string& msg, double ratio)
      : std::runtime_error(msg), sv_ratio(ratio) {}
  double sv_ratio;
};

/// Orthogonal projector onto the null space of the user channel matrix.
struct NullProjector {
  MatC matrix;          // N_t x N_t, Hermitian idempotent
  int source_rank = 0;  // rank of H used

  VecC apply(const VecC& raw) const { return matrix * raw; }
};

/// P = I - H^H (H H^H)^-1 H via a Hermitian PD factorization of the K x K
/// Gram matrix. Requires K <= N_t and full row rank (relative singular
/// value threshold 1e-10); throws RankDeficientError otherwise.
NullProjector null_projector(const MatC& channels);

/// n_eff = P * raw.
VecC effective_noise(const NullProjector& projector, const VecC& raw);

/// P * R * P^H; input must be Hermitian (entrywise tolerance 1e-9) or a
/// std::domain_error is thrown.
MatC effective_covariance(const NullProjector& projector, const MatC& raw_cov);

}  // namespace secisac
