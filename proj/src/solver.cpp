#include "secisac/solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "secisac/feasibility.hpp"
#include "secisac/rng.hpp"

namespace secisac {

namespace {

// Substream index reserved for the AN initialization draw (the channel draw
// uses index 0 in sample_scenario).
constexpr std::uint64_t kAnInitStream = 1;

}  // namespace

double objective_weighted(const Scenario& sc, const Solution& sol,
                          const VecR& mu) {
  double obj = 0.0;
  for (int k = 0; k < sc.config.n_users; ++k)
    obj += mu[k] * std::log2(1.0 + sinr_legitimate(sc, sol, k));
  return obj;
}

bool rel_converged(double prev, double cur, double tol) {
  return std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur));
}

Solution initialize(const Scenario& sc, const NullProjector& projector) {
  const SystemConfig& cfg = sc.config;
  Solution sol = Solution::zero(cfg.n_tx, cfg.n_users);

  for (int k = 0; k < cfg.n_users; ++k) {
    VecC w = sc.channel(k).adjoint();  // matched filter
    const double norm = w.norm();
    if (norm > 0.0) w *= std::sqrt(cfg.per_user_power[k]) / norm;
    sol.beams.col(k) = w;
  }

  Rng rng = Rng::substream(sc.seed, kAnInitStream);
  VecC n(cfg.n_tx);
  for (int m = 0; m < cfg.n_tx; ++m) n[m] = rng.next_cnormal();
  const double eff = (projector.matrix * n).squaredNorm();
  const double budget = cfg.an_power_budget();
  if (eff > 0.0 && budget > 0.0)
    n *= std::sqrt(budget / eff);
  else
    n.setZero();
  sol.an = n;
  sol.refresh_an(projector);

  // Respect the eavesdropper caps from the start.
  for (int k = 0; k < cfg.n_users; ++k)
    sol.beams.col(k) = project_w(sol.beams.col(k), sc, sol, k);
  FeasibilityReport rep;
  sol.an = project_n(sol.an, sol, sc, projector, &rep);
  sol.refresh_an(projector);
  return sol;
}

SolveResult alternating_solve(const Scenario& sc, const VecR& mu,
                              const SolveOptions& options) {
  const SystemConfig& cfg = sc.config;
  if (mu.size() != cfg.n_users)
    throw std::invalid_argument("alternating_solve: weight size mismatch");

  const NullProjector projector = null_projector(sc.channels);

  SolveResult result;
  result.solution = initialize(sc, projector);

  AuxStateI aux1 = AuxStateI::make(cfg.n_tx, cfg.n_users);
  AuxStateII aux2 = AuxStateII::make(cfg.n_tx, cfg.n_users);

  double prev_obj = objective_weighted(sc, result.solution, mu);
  const auto t0 = std::chrono::steady_clock::now();

  for (int it = 1; it <= options.max_outer_iters; ++it) {
    TraceRow row;
    row.iteration = it;

    beamform_pass(sc, result.solution, aux1, mu,
                  options.record_stages ? row.f_stages : nullptr);
    an_pass(sc, result.solution, aux2, mu, projector,
            options.record_stages ? row.fr_stages : nullptr);
    result.solution.an = project_n(result.solution.an, result.solution, sc,
                                   projector, &result.an_report);
    result.solution.refresh_an(projector);

    const double obj = objective_weighted(sc, result.solution, mu);
    if (!std::isfinite(obj)) {
      result.status = ConvergenceStatus::kAborted;
      std::ostringstream msg;
      msg << "alternating_solve: non-finite objective at iteration " << it;
      throw std::runtime_error(msg.str());
    }

    row.objective = obj;
    row.sum_secrecy = sum_secrecy_rate(sc, result.solution);
    row.f = row.f_stages[3];
    row.f_r = row.fr_stages[3];
    const ConstraintMargins margins = evaluate_margins(sc, result.solution);
    row.min_power_slack =
        std::min(margins.total_power_slack,
                 margins.per_user_power_slack.size() > 0
                     ? margins.per_user_power_slack.minCoeff()
                     : 0.0);
    row.min_sensing_margin = margins.sensing_margin.size() > 0
                                 ? margins.sensing_margin.minCoeff()
                                 : 0.0;
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    result.trace.push_back(row);

    if (it > 1 && rel_converged(prev_obj, obj, options.conv_tol)) {
      result.status = ConvergenceStatus::kConverged;
      break;
    }
    prev_obj = obj;
  }

  result.zeta_fallbacks = aux1.zeta_fallbacks + aux2.zeta_fallbacks;
  return result;
}

}  // namespace secisac
