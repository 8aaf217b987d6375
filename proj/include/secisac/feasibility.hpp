#pragma once

#include "secisac/metrics.hpp"
#include "secisac/scenario.hpp"
#include "secisac/types.hpp"

namespace secisac {

/// All constraint margins of one solution, computed from the same total
/// covariance as metrics::beam_gain. Positive slack/margin = satisfied.
struct ConstraintMargins {
  VecR per_user_power_slack;  // P_k - |w_k|^2
  double total_power_slack = 0.0;
  MatR eaves_cap_slack;       // K x J, cap minus quadratic form
  VecR sensing_margin;        // |alpha_j| gain_j - eta_j
  MatR beamwidth_excess;      // J x 2, gain at theta_j +- theta_0 minus eta_j/2
};

ConstraintMargins evaluate_margins(const Scenario& sc, const Solution& sol);

/// Eavesdropper-cap bound for pair (k, j): the rate-cap constraint in its
/// equivalent quadratic form, (2^beta_j - 1)(|a^H n_eff|^2 |alpha|^2 +
/// sigma_e^2) / |alpha|^2.
double eaves_cap_bound(const Scenario& sc, const Solution& sol, int j);

/// Feasibility gate: per-user / total / eavesdropper / sensing margins all
/// >= -1e-9. The beamwidth excess is reported but not gating.
bool is_feasible(const ConstraintMargins& margins);

inline constexpr double kFeasibilityTol = 1e-9;

}  // namespace secisac
