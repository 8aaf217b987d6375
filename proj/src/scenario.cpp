#include "secisac/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "secisac/rng.hpp"

namespace secisac {

VecC steering_vector(double theta, int n_tx, double spacing_ratio) {
  if (std::abs(theta) > kPi / 2.0)
    throw std::domain_error("steering_vector: angle outside [-pi/2, pi/2]");
  VecC a(n_tx);
  const double phase_step = 2.0 * kPi * spacing_ratio * std::sin(theta);
  for (int m = 0; m < n_tx; ++m)
    a[m] = std::polar(1.0, phase_step * static_cast<double>(m));
  return a;
}

Scenario sample_scenario(const SystemConfig& config, std::uint64_t seed) {
  config.validate();
  Scenario sc;
  sc.config = config;
  sc.seed = seed;

  Rng rng = Rng::substream(seed, 0);
  sc.channels.resize(config.n_users, config.n_tx);
  for (int k = 0; k < config.n_users; ++k)
    for (int m = 0; m < config.n_tx; ++m)
      sc.channels(k, m) = rng.next_cnormal();

  sc.target_steering.resize(config.n_tx, config.n_targets);
  for (int j = 0; j < config.n_targets; ++j)
    sc.target_steering.col(j) =
        steering_vector(config.target_angles[j], config.n_tx,
                        config.spacing_ratio);
  return sc;
}

}  // namespace secisac
