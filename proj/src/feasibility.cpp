#include "secisac/feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace secisac {

double eaves_cap_bound(const Scenario& sc, const Solution& sol, int j) {
  const SystemConfig& cfg = sc.config;
  const double gain2 = std::norm(cfg.path_gain[j]);
  const double an_leak =
      gain2 * std::norm(sc.steering(j).dot(sol.an_effective));
  return (std::pow(2.0, cfg.eaves_rate_cap[j]) - 1.0) *
         (an_leak + cfg.noise_eve) / gain2;
}

ConstraintMargins evaluate_margins(const Scenario& sc, const Solution& sol) {
  const SystemConfig& cfg = sc.config;
  const int k_users = cfg.n_users;
  const int j_targets = cfg.n_targets;

  ConstraintMargins m;
  m.per_user_power_slack.resize(k_users);
  m.eaves_cap_slack.resize(k_users, j_targets);
  m.sensing_margin.resize(j_targets);
  m.beamwidth_excess.resize(j_targets, 2);

  double used = sol.an_effective.squaredNorm();
  for (int k = 0; k < k_users; ++k) {
    const double p = sol.beams.col(k).squaredNorm();
    m.per_user_power_slack[k] = cfg.per_user_power[k] - p;
    used += p;
  }
  m.total_power_slack = cfg.total_power - used;

  for (int j = 0; j < j_targets; ++j) {
    const VecC a = sc.steering(j);
    const double cap = eaves_cap_bound(sc, sol, j);
    for (int k = 0; k < k_users; ++k)
      m.eaves_cap_slack(k, j) = cap - std::norm(a.dot(sol.beams.col(k)));

    m.sensing_margin[j] = std::abs(cfg.path_gain[j]) *
                              beam_gain(sol, sc, cfg.target_angles[j]) -
                          cfg.sensing_floor[j];

    int col = 0;
    for (double sign : {+1.0, -1.0}) {
      const double theta = std::clamp(
          cfg.target_angles[j] + sign * cfg.beamwidth_half, -kPi / 2, kPi / 2);
      m.beamwidth_excess(j, col++) =
          std::abs(cfg.path_gain[j]) * beam_gain(sol, sc, theta) -
          cfg.sensing_floor[j] / 2.0;
    }
  }
  return m;
}

bool is_feasible(const ConstraintMargins& margins) {
  if (margins.total_power_slack < -kFeasibilityTol) return false;
  if (margins.per_user_power_slack.size() > 0 &&
      margins.per_user_power_slack.minCoeff() < -kFeasibilityTol)
    return false;
  if (margins.eaves_cap_slack.size() > 0 &&
      margins.eaves_cap_slack.minCoeff() < -kFeasibilityTol)
    return false;
  if (margins.sensing_margin.size() > 0 &&
      margins.sensing_margin.minCoeff() < -kFeasibilityTol)
    return false;
  return true;
}

}  // namespace secisac
