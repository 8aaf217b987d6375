#pragma once

#include <cstdint>

#include "secisac/config.hpp"
#include "secisac/types.hpp"

namespace secisac {

/// One problem realization: channel rows h_k and target steering columns.
/// Immutable after construction; safe to share across trial workers.
struct Scenario {
  SystemConfig config;
  MatC channels;         // K x N_t, rows h_k
  MatC target_steering;  // N_t x J, columns a(theta_j)
  std::uint64_t seed = 0;

  Eigen::RowVectorXcd channel(int k) const { return channels.row(k); }
  VecC steering(int j) const { return target_steering.col(j); }
};

/// ULA steering vector, element m = exp(i 2 pi spacing m sin(theta)).
/// Throws std::domain_error for |theta| > pi/2.
VecC steering_vector(double theta, int n_tx, double spacing_ratio);

/// Draw i.i.d. CN(0,1) channels; steering columns from the configured target
/// angles. The same (config, seed) reproduces the scenario bit-for-bit.
Scenario sample_scenario(const SystemConfig& config, std::uint64_t seed);

}  // namespace secisac
