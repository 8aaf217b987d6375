#pragma once

#include <vector>

#include "secisac/config.hpp"
#include "secisac/types.hpp"

namespace secisac {

/// One point of the tradeoff path trace.
struct FairnessState {
  VecR mu;
  double chi = 0.0;
  double g_norm = 0.0;
  double objective = 0.0;  // penalized objective value
  double fairness = 0.0;   // F_SINR(mu)
  double entropy_val = 0.0;
};

/// G = 1 / max_k log2(1 + rho_k): the simplex maximum of the weighted sum
/// rate is attained at a vertex because the sum is linear in mu.
double normalization_g(const VecR& rho);

/// mu_k = c / rho_k with c = (sum 1/rho_k)^-1; equalizes mu_k * rho_k.
VecR fairness_closed_form(const VecR& rho);

double penalized_objective(const VecR& mu, const VecR& rho, double chi,
                           double nu, double lambda, double xi_f);

/// Gradient of the penalized objective; requires an interior point
/// (all mu_k > 0) because of the entropy term.
VecR gradient_mu(const VecR& mu, const VecR& rho, double chi, double nu,
                 double lambda = 0.0, double xi_f = 0.0);

/// Euclidean projection onto the probability simplex (sort-and-threshold).
VecR project_simplex(const VecR& v);

struct HfroResult {
  VecR mu;
  std::vector<FairnessState> trace;  // one entry per chi_t
};

/// Hybrid fairness-rate optimization over the discretized chi path.
/// Initializes mu proportional to 1/rho_k; each inner step is a projected
/// gradient ascent step with backtracking, followed by a trust-region blend
/// with the previous iterate. An explicit chi path overrides the default
/// linear grid from 1 to 0 with config.tradeoff_steps points.
HfroResult hfro_optimize(const VecR& rho, const SystemConfig& config,
                         const std::vector<double>* chi_path = nullptr);

}  // namespace secisac
