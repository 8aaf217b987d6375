#pragma once

#include <cstdint>
#include <vector>

#include "secisac/an_qt.hpp"
#include "secisac/beamform_qt.hpp"
#include "secisac/metrics.hpp"
#include "secisac/nullspace.hpp"
#include "secisac/scenario.hpp"

namespace secisac {

enum class ConvergenceStatus { kConverged, kMaxIterations, kAborted };

struct TraceRow {
  int iteration = 0;
  double objective = 0.0;     // weighted sum rate
  double sum_secrecy = 0.0;
  double f = 0.0;             // beamformer surrogate at end of pass
  double f_r = 0.0;           // AN surrogate at end of pass
  double min_power_slack = 0.0;
  double min_sensing_margin = 0.0;
  double wall_ms = 0.0;
  double f_stages[4] = {0, 0, 0, 0};
  double fr_stages[4] = {0, 0, 0, 0};
};

struct SolveOptions {
  double conv_tol = 1e-6;
  int max_outer_iters = 500;
  bool record_stages = false;
};

struct SolveResult {
  Solution solution;
  std::vector<TraceRow> trace;
  ConvergenceStatus status = ConvergenceStatus::kMaxIterations;
  FeasibilityReport an_report;
  int zeta_fallbacks = 0;
};

/// sum_k mu_k log2(1 + rho_k^L).
double objective_weighted(const Scenario& sc, const Solution& sol,
                          const VecR& mu);

/// Relative convergence guard: |cur - prev| <= tol * max(1, |cur|).
bool rel_converged(double prev, double cur, double tol);

/// Matched-filter beams at per-user power, AN drawn isotropically in the
/// null space and scaled to the residual budget, then both projections.
Solution initialize(const Scenario& sc, const NullProjector& projector);

/// Alternating subproblem-I / subproblem-II driver; iterates until the
/// weighted objective converges or max_outer_iters is reached. Throws
/// std::runtime_error on a non-finite objective.
SolveResult alternating_solve(const Scenario& sc, const VecR& mu,
                              const SolveOptions& options = {});

}  // namespace secisac
