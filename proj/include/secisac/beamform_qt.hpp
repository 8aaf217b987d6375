#pragma once

#include "secisac/metrics.hpp"
#include "secisac/scenario.hpp"
#include "secisac/types.hpp"

namespace secisac {

/// Auxiliary state for the beamformer subproblem (AN held fixed).
struct AuxStateI {
  VecC e;       // e_k = h_k w_k
  VecR b_res;   // B_k: interference + AN leakage + noise
  VecR b_hat;   // B_hat_k = |e_k|^2 + B_k
  VecC y;       // y_k
  VecR zeta;    // zeta_k
  MatC z;       // N_t x K anchor points z_k
  MatC d_mat;   // shared quadratic-coupling matrix
  double kappa = 0.0;
  int zeta_fallbacks = 0;  // closed form disagreed with stationarity

  static AuxStateI make(int n_tx, int n_users);
};

/// Largest eigenvalue of a Hermitian PSD matrix. Exact eigensolve up to
/// dimension 64, power iteration (tol 1e-10, max 500 iters) above.
double largest_eigenvalue(const MatC& m);

/// B_k = sum_{i != k} |h_k w_i|^2 + |h_k n_eff|^2 + sigma_k^2.
double residual_b(const Scenario& sc, const Solution& sol, int k);

/// Recompute e, B, B_hat for every user from the current solution.
void refresh_ratios(const Scenario& sc, const Solution& sol, AuxStateI& aux);

/// z_k := w_k for all k (bound anchor; equality point of the bound).
void update_z1(const Solution& sol, AuxStateI& aux);

/// y_k = e_k / B_hat_k.
cplx update_y1(cplx e_k, double b_hat_k);

struct ZetaResult {
  double zeta = 0.0;
  bool used_fallback = false;
};

/// Closed-form zeta cross-checked against the stationarity condition of the
/// surrogate; when the shortcut form is not a stationary point (or its
/// denominator is non-positive) the stationary-point solve wins.
/// s_hat = 2 Re{y* e} - |y|^2 B_hat is the quadratic surrogate of the
/// ratio |e|^2 / B_hat.
ZetaResult update_zeta1(const Scenario& sc, const Solution& sol, int k,
                        cplx y_k, cplx e_k, double b_hat_k);

/// Quadratic-coupling matrix D = sum_k mu_k (1+zeta_k) |y_k|^2 h_k^H h_k
/// shared by all beams, and kappa = kappa_margin * lambda_max(D), clamped
/// to 1e-12. Grouping the weighted interference per beam makes the
/// non-homogeneous bound tight at z_k = w_k for every user.
void build_d1(const Scenario& sc, AuxStateI& aux, const VecR& mu);

/// w_k = z_k + (1/kappa)(mu_k (1+zeta_k) h_k^H y_k - D z_k).
VecC update_w(int k, const AuxStateI& aux, const VecR& mu, const Scenario& sc);

/// Scale-down projection: per-user power ball, then the eavesdropper-cap
/// quadratic form, cycled up to 8 times.
VecC project_w(const VecC& w_k, const Scenario& sc, const Solution& sol, int k);

/// Bound surrogate f of the beamformer subproblem, evaluated at the current
/// (w, y, z, zeta) with the shared D and kappa from aux.
double surrogate_f(const Scenario& sc, const Solution& sol,
                   const AuxStateI& aux, const VecR& mu);

/// Derivative of the surrogate with respect to zeta_k (test oracle support).
double surrogate_f_dzeta(double zeta, double mu_k, double s_hat);

/// Full subproblem-I pass: z, y, zeta, D/kappa, w updates for every user,
/// then per-user projection. Stage values of the surrogate (after z, y,
/// zeta, w — all before projection) are written to f_stages when non-null.
void beamform_pass(const Scenario& sc, Solution& sol, AuxStateI& aux,
                   const VecR& mu, double f_stages[4] = nullptr);

}  // namespace secisac
