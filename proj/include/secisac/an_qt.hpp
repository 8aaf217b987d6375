#pragma once

#include <vector>

#include "secisac/beamform_qt.hpp"
#include "secisac/metrics.hpp"
#include "secisac/nullspace.hpp"
#include "secisac/scenario.hpp"

namespace secisac {

/// Auxiliary state for the AN subproblem (beams held fixed).
struct AuxStateII {
  VecC y_t;      // y~_k
  VecR zeta_t;   // zeta~_k
  VecC z_shared; // shared anchor z
  VecR kappa_t;  // kappa~_k
  std::vector<MatC> d_mats_t;  // D~_k, rank one
  VecR mu_t;     // mu~_k (taken equal to the fairness weights)
  int zeta_fallbacks = 0;

  static AuxStateII make(int n_tx, int n_users);
};

/// Per-trial constraint outcome of the AN projection.
struct FeasibilityReport {
  double power_slack = 0.0;          // residual AN budget after projection
  double min_sensing_margin = 0.0;   // min_j (|alpha_j| gain_j - eta_j)
  int beamwidth_violations = 0;      // count over (j, +-theta_0)
  std::vector<bool> target_infeasible;  // sensing floor unreachable in budget

  bool sensing_feasible() const {
    for (bool b : target_infeasible)
      if (b) return false;
    return true;
  }
};

/// z := n.
void update_z2(const Solution& sol, AuxStateII& aux);

/// y~_k = e_k / B_hat_k(n) with the beams frozen.
cplx update_y2(int k, const Scenario& sc, const Solution& sol);

/// Same stationarity-anchored policy as update_zeta1, for the AN surrogate.
ZetaResult update_zeta2(int k, const AuxStateII& aux, const Scenario& sc,
                        const Solution& sol);

/// D~_k = mu~_k (1+zeta~_k) (h_k P)^H |y~_k|^2 (h_k P); kappa~_k is
/// kappa_margin times its (rank-one) largest eigenvalue, clamped to 1e-12.
void build_d2(int k, AuxStateII& aux, const Scenario& sc,
              const NullProjector& projector);

/// n = (sum_k kappa~_k)^-1 sum_k (kappa~_k I - D~_k) z; the leading matrix
/// is a scalar multiple of identity, so no inversion is needed.
VecC update_n(const AuxStateII& aux, const VecC& current_n);

/// Feasible-set projection for the AN vector:
///  (i)  null-space membership is maintained by always consuming n through
///       n_eff = P n downstream (no-op here);
///  (ii) total power: scale down to the residual budget when exceeded;
///  (iii) sensing floors: scale up (bisection on the factor, capped by the
///       budget); unreachable floors are flagged, never silently fixed;
///  (iv) beamwidth cap: monitored and reported only.
VecC project_n(const VecC& n, const Solution& sol, const Scenario& sc,
               const NullProjector& projector, FeasibilityReport* report);

/// Bound surrogate f_r of the AN subproblem.
double surrogate_fr(const Scenario& sc, const Solution& sol,
                    const AuxStateII& aux);

/// Full subproblem-II pass (z, y~, zeta~, D~, n), before projection.
/// Stage surrogate values written to fr_stages when non-null.
void an_pass(const Scenario& sc, Solution& sol, AuxStateII& aux,
             const VecR& mu, const NullProjector& projector,
             double fr_stages[4] = nullptr);

}  // namespace secisac
