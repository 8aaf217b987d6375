#pragma once

#include <string>
#include <vector>

#include "secisac/types.hpp"

namespace secisac {

/// All scalar parameters of one problem instance. Immutable after
/// construction; validate() is called by the factories and throws
/// std::invalid_argument on an inconsistent configuration.
struct SystemConfig {
  int n_tx = 0;
  int n_users = 0;
  int n_targets = 0;
  std::vector<double> per_user_power;   // P_k, linear scale
  double total_power = 0.0;             // P_A, linear scale
  std::vector<double> noise_user;       // sigma_k^2
  double noise_eve = 1.0;               // sigma_e^2
  std::vector<double> target_angles;    // radians, in [-pi/2, pi/2]
  double beamwidth_half = 0.0;          // radians
  std::vector<double> eaves_rate_cap;   // beta_j
  std::vector<double> sensing_floor;    // eta_j
  std::vector<cplx> path_gain;          // alpha_j
  double fairness_floor = 0.5;          // xi_F, in (1/K, 1]
  double entropy_weight = 0.01;         // nu
  double penalty_weight = 10.0;         // lambda
  int tradeoff_steps = 11;              // T
  int inner_iters = 50;                 // I
  double trust_rate = 0.5;              // eta
  double step_size = 0.05;              // alpha
  double spacing_ratio = 0.5;           // d_M / lambda
  double kappa_margin = 1.0 + 1e-9;
  double conv_tol = 1e-6;
  int max_outer_iters = 500;

  void validate() const;

  double an_power_budget() const;  // P_A - sum P_k

  /// Load from a flat JSON document. Angle-valued keys (target_angles,
  /// beamwidth_half) are given in degrees in the file and converted here.
  static SystemConfig from_json_file(const std::string& path);
  static SystemConfig from_json_text(const std::string& text);
};

}  // namespace secisac
