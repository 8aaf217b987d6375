#include "secisac/an_qt.hpp"

#include <cmath>

#include "secisac/feasibility.hpp"

namespace secisac {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kKappaFloor = 1e-12;
constexpr double kZetaCap = 1e9;

double stationary_zeta(double s_hat) {
  if (s_hat >= 1.0) return kZetaCap;
  return 1.0 / (kLn2 * (1.0 - s_hat)) - 1.0;
}

// Sum over all beams of |h_k w_i|^2 (the w-quadratic part of B_hat).
double beam_power_at_user(const Scenario& sc, const Solution& sol, int k) {
  const auto h = sc.channel(k);
  double c = 0.0;
  for (int i = 0; i < sc.config.n_users; ++i)
    c += std::norm((h * sol.beams.col(i)).value());
  return c;
}

double b_hat_of_n(const Scenario& sc, const Solution& sol, int k) {
  return beam_power_at_user(sc, sol, k) +
         std::norm((sc.channel(k) * sol.an_effective).value()) +
         sc.config.noise_user[k];
}

}  // namespace

AuxStateII AuxStateII::make(int n_tx, int n_users) {
  AuxStateII a;
  a.y_t = VecC::Zero(n_users);
  a.zeta_t = VecR::Zero(n_users);
  a.z_shared = VecC::Zero(n_tx);
  a.kappa_t = VecR::Constant(n_users, kKappaFloor);
  a.d_mats_t.assign(static_cast<size_t>(n_users), MatC::Zero(n_tx, n_tx));
  a.mu_t = VecR::Constant(n_users, 1.0 / n_users);
  return a;
}

void update_z2(const Solution& sol, AuxStateII& aux) { aux.z_shared = sol.an; }

cplx update_y2(int k, const Scenario& sc, const Solution& sol) {
  const cplx e_k = (sc.channel(k) * sol.beams.col(k)).value();
  return e_k / b_hat_of_n(sc, sol, k);
}

ZetaResult update_zeta2(int k, const AuxStateII& aux, const Scenario& sc,
                        const Solution& sol) {
  const cplx y = aux.y_t[k];
  const cplx e_k = (sc.channel(k) * sol.beams.col(k)).value();

  // Shortcut closed form: bracket has the beam term and sigma^2 |y|^2 but
  // neither the leading 1 nor the AN term; anchor to the stationary point.
  const double w_part = std::norm(y) * beam_power_at_user(sc, sol, k);
  const double bracket = w_part + sc.config.noise_user[k] * std::norm(y) -
                         2.0 * std::real(std::conj(y) * e_k);

  const double s_hat = 2.0 * std::real(std::conj(y) * e_k) -
                       std::norm(y) * b_hat_of_n(sc, sol, k);
  const double exact = stationary_zeta(s_hat);

  ZetaResult r;
  if (bracket <= 0.0) {
    r.zeta = exact;
    r.used_fallback = true;
    return r;
  }
  const double shortcut = 1.0 / (kLn2 * bracket) - 1.0;
  if (std::abs(shortcut - exact) > 1e-8 * std::max(1.0, std::abs(exact))) {
    r.zeta = exact;
    r.used_fallback = true;
  } else {
    r.zeta = shortcut;
  }
  return r;
}

void build_d2(int k, AuxStateII& aux, const Scenario& sc,
              const NullProjector& projector) {
  const VecC v = (sc.channel(k) * projector.matrix).adjoint();  // (h_k P)^H
  const double c = aux.mu_t[k] * (1.0 + aux.zeta_t[k]) * std::norm(aux.y_t[k]);
  aux.d_mats_t[static_cast<size_t>(k)] = c * (v * v.adjoint());
  // Rank one: lambda_max = c |v|^2 exactly.
  aux.kappa_t[k] = std::max(sc.config.kappa_margin * c * v.squaredNorm(),
                            kKappaFloor);
}

VecC update_n(const AuxStateII& aux, const VecC& current_n) {
  const double kappa_sum = aux.kappa_t.sum();
  if (kappa_sum <= 0.0) return current_n;
  VecC acc = kappa_sum * aux.z_shared;
  for (const MatC& d : aux.d_mats_t) acc.noalias() -= d * aux.z_shared;
  return acc / kappa_sum;
}

VecC project_n(const VecC& n, const Solution& sol, const Scenario& sc,
               const NullProjector& projector, FeasibilityReport* report) {
  const SystemConfig& cfg = sc.config;
  const int j_targets = cfg.n_targets;
  VecC out = n;

  FeasibilityReport rep;
  rep.target_infeasible.assign(static_cast<size_t>(j_targets), false);

  const double budget = cfg.an_power_budget();
  double an_power = (projector.matrix * out).squaredNorm();
  if (an_power > budget) {
    out *= std::sqrt(std::max(budget, 0.0) / an_power);
    an_power = budget;
  }

  // Per-target gain split: beams are fixed here, only the AN part scales.
  VecR beam_part(j_targets), an_part(j_targets);
  const VecC n_eff = projector.matrix * out;
  for (int j = 0; j < j_targets; ++j) {
    const VecC a = sc.steering(j);
    double bp = 0.0;
    for (int i = 0; i < cfg.n_users; ++i)
      bp += std::norm(a.dot(sol.beams.col(i)));
    beam_part[j] = bp;
    an_part[j] = std::norm(a.dot(n_eff));
  }

  auto floors_met = [&](double scale, double slack) {
    for (int j = 0; j < j_targets; ++j) {
      const double gain = beam_part[j] + scale * scale * an_part[j];
      if (std::abs(cfg.path_gain[j]) * gain < cfg.sensing_floor[j] + slack)
        return false;
    }
    return true;
  };

  const double scale_max =
      an_power > 0.0 ? std::sqrt(std::max(budget, 0.0) / an_power) : 1.0;
  if (!floors_met(1.0, -kFeasibilityTol)) {
    if (floors_met(scale_max, kFeasibilityTol)) {
      // Smallest factor meeting all floors; gain is monotone quadratic in
      // the scale, so bisection applies. The bisection targets a small
      // positive slack so the reported margin never dips below -tol.
      double lo = 1.0, hi = scale_max;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (floors_met(mid, kFeasibilityTol))
          hi = mid;
        else
          lo = mid;
      }
      out *= hi;
    } else if (floors_met(scale_max, -kFeasibilityTol)) {
      // Reachable only within the tolerance band: spend the full budget.
      out *= scale_max;
    } else {
      // Unreachable within the budget: spend the full budget, flag targets.
      out *= scale_max;
      for (int j = 0; j < j_targets; ++j) {
        const double gain = beam_part[j] + scale_max * scale_max * an_part[j];
        if (std::abs(cfg.path_gain[j]) * gain <
            cfg.sensing_floor[j] - kFeasibilityTol)
          rep.target_infeasible[static_cast<size_t>(j)] = true;
      }
    }
  }

  // Report fields from the final vector.
  const VecC final_eff = projector.matrix * out;
  rep.power_slack = budget - final_eff.squaredNorm();
  rep.min_sensing_margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < j_targets; ++j) {
    const VecC a = sc.steering(j);
    double gain = std::norm(a.dot(final_eff));
    for (int i = 0; i < cfg.n_users; ++i)
      gain += std::norm(a.dot(sol.beams.col(i)));
    rep.min_sensing_margin =
        std::min(rep.min_sensing_margin,
                 std::abs(cfg.path_gain[j]) * gain - cfg.sensing_floor[j]);
    // Beamwidth cap is monitored, never repaired (non-convex in n).
    for (double sign : {+1.0, -1.0}) {
      const double theta = std::clamp(
          cfg.target_angles[j] + sign * cfg.beamwidth_half, -kPi / 2, kPi / 2);
      const VecC a_side = steering_vector(theta, cfg.n_tx, cfg.spacing_ratio);
      double side = std::norm(a_side.dot(final_eff));
      for (int i = 0; i < cfg.n_users; ++i)
        side += std::norm(a_side.dot(sol.beams.col(i)));
      if (std::abs(cfg.path_gain[j]) * side >
          cfg.sensing_floor[j] / 2.0 + kFeasibilityTol)
        ++rep.beamwidth_violations;
    }
  }

  if (report) *report = rep;
  return out;
}

double surrogate_fr(const Scenario& sc, const Solution& sol,
                    const AuxStateII& aux) {
  double f = 0.0;
  const VecC& n = sol.an;
  const VecC& z = aux.z_shared;
  for (int k = 0; k < sc.config.n_users; ++k) {
    const cplx e_k = (sc.channel(k) * sol.beams.col(k)).value();
    const double c = aux.mu_t[k] * (1.0 + aux.zeta_t[k]);
    const MatC& d = aux.d_mats_t[static_cast<size_t>(k)];
    const double kappa = aux.kappa_t[k];
    const VecC dz = d * z;
    f += 2.0 * std::real(c * std::conj(aux.y_t[k]) * e_k);
    f += 2.0 * std::real(kappa * n.dot(z) - n.dot(dz));
    f += std::real(z.dot(dz)) - kappa * z.squaredNorm();
    f -= kappa * n.squaredNorm();
    f -= c * std::norm(aux.y_t[k]) *
         (beam_power_at_user(sc, sol, k) + sc.config.noise_user[k]);
    f += aux.mu_t[k] * (std::log2(1.0 + aux.zeta_t[k]) - aux.zeta_t[k]);
  }
  return f;
}

void an_pass(const Scenario& sc, Solution& sol, AuxStateII& aux,
             const VecR& mu, const NullProjector& projector,
             double fr_stages[4]) {
  const int k_users = sc.config.n_users;
  aux.mu_t = mu;  // mu~ equated to the fairness weights

  auto rebuild = [&] {
    for (int k = 0; k < k_users; ++k) build_d2(k, aux, sc, projector);
  };

  update_z2(sol, aux);
  rebuild();
  if (fr_stages) fr_stages[0] = surrogate_fr(sc, sol, aux);

  for (int k = 0; k < k_users; ++k) aux.y_t[k] = update_y2(k, sc, sol);
  rebuild();
  if (fr_stages) fr_stages[1] = surrogate_fr(sc, sol, aux);

  for (int k = 0; k < k_users; ++k) {
    const ZetaResult zr = update_zeta2(k, aux, sc, sol);
    aux.zeta_t[k] = zr.zeta;
    if (zr.used_fallback) ++aux.zeta_fallbacks;
  }
  rebuild();
  if (fr_stages) fr_stages[2] = surrogate_fr(sc, sol, aux);

  // Same re-anchored refinement as the beamformer pass.
  for (int refine = 0; refine < 200; ++refine) {
    update_z2(sol, aux);
    const VecC n_next = update_n(aux, sol.an);
    const double delta = (n_next - aux.z_shared).squaredNorm();
    sol.an = n_next;
    if (delta <= 1e-24 * std::max(1.0, n_next.squaredNorm())) break;
  }
  sol.refresh_an(projector);
  if (fr_stages) fr_stages[3] = surrogate_fr(sc, sol, aux);
}

}  // namespace secisac
