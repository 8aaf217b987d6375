#pragma once

#include <vector>

#include "secisac/nullspace.hpp"
#include "secisac/scenario.hpp"
#include "secisac/types.hpp"

namespace secisac {

/// Beamformer set and AN vector, with the null-space-projected AN cached.
struct Solution {
  MatC beams;         // N_t x K, columns w_k
  VecC an;            // raw AN vector n
  VecC an_effective;  // P * n

  static Solution zero(int n_tx, int n_users);
  void refresh_an(const NullProjector& projector) {
    an_effective = projector.apply(an);
  }
};

struct RateReport {
  VecR sinr_legit;              // rho_k^L
  MatR snr_eve;                 // K x J, rho_{k,j}^E
  VecR secrecy_per_user;        // SR_k
  double sum_secrecy = 0.0;     // SR
  double sum_rate = 0.0;        // sum log2(1 + rho_k^L)
};

double sinr_legitimate(const Scenario& sc, const Solution& sol, int k);

double snr_eavesdropper(const Scenario& sc, const Solution& sol, int k, int j);

/// max(0, log2(1+rho_l) - max_j log2(1+rho_e[j])).
double secrecy_rate_user(double rho_l, const VecR& rho_e_row);

double sum_secrecy_rate(const Scenario& sc, const Solution& sol);

RateReport rate_report(const Scenario& sc, const Solution& sol);

/// Jain index over the products mu_k * rho_k; in [1/K, 1]. Throws
/// std::domain_error when every product is zero (undefined fairness).
double jain_index(const VecR& mu, const VecR& rho);

/// Shannon entropy, natural log, with 0 log 0 = 0.
double entropy(const VecR& mu);

/// a^H(theta) (sum_k w_k w_k^H + n_eff n_eff^H) a(theta).
double beam_gain(const Solution& sol, const Scenario& sc, double theta);

}  // namespace secisac
