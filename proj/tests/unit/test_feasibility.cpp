#include <doctest.h>

#include <cmath>

#include "secisac/feasibility.hpp"
#include "secisac/solver.hpp"
#include "test_util.hpp"

using namespace secisac;
using secisac::testing::random_cvec;
using secisac::testing::small_config;

TEST_CASE("zero solution exposes the raw budgets and floors") {
  const SystemConfig cfg = small_config(8, 2, 1);
  const Scenario sc = sample_scenario(cfg, 3);
  const Solution zero = Solution::zero(8, 2);

  const ConstraintMargins m = evaluate_margins(sc, zero);
  CHECK(m.total_power_slack == doctest::Approx(cfg.total_power));
  for (int k = 0; k < 2; ++k)
    CHECK(m.per_user_power_slack[k] ==
          doctest::Approx(cfg.per_user_power[k]));
  CHECK(m.sensing_margin[0] == doctest::Approx(-cfg.sensing_floor[0]));
  // No transmission leaks nothing: cap slack equals the bound itself.
  CHECK(m.eaves_cap_slack(0, 0) ==
        doctest::Approx(eaves_cap_bound(sc, zero, 0)));
  CHECK_FALSE(is_feasible(m));
}

TEST_CASE("eavesdropper cap bound scalar example") {
  SystemConfig cfg = small_config(4, 2, 1);
  cfg.eaves_rate_cap[0] = 1.0;  // 2^1 - 1 = 1
  const Scenario sc = sample_scenario(cfg, 5);
  const Solution zero = Solution::zero(4, 2);
  // alpha = 1, no AN: bound = 1 * (0 + sigma_e^2) / 1 = sigma_e^2.
  CHECK(eaves_cap_bound(sc, zero, 0) ==
        doctest::Approx(cfg.noise_eve).epsilon(1e-12));

  // Doubling |alpha| scales the AN leak but not the noise term.
  Solution with_an = zero;
  with_an.an_effective = sc.steering(0);
  const double leak = std::norm(sc.steering(0).dot(with_an.an_effective));
  CHECK(eaves_cap_bound(sc, with_an, 0) ==
        doctest::Approx(leak + cfg.noise_eve).epsilon(1e-12));
}

TEST_CASE("initialized solution uses the per-user budgets exactly") {
  SystemConfig cfg = small_config(8, 2, 1);
  cfg.eaves_rate_cap.assign(1, 10.0);  // keep the cap out of the way
  const Scenario sc = sample_scenario(cfg, 7);
  const NullProjector proj = null_projector(sc.channels);
  const Solution sol = initialize(sc, proj);

  const ConstraintMargins m = evaluate_margins(sc, sol);
  for (int k = 0; k < 2; ++k)
    CHECK(std::abs(m.per_user_power_slack[k]) <= 1e-9 * cfg.per_user_power[k]);
  CHECK(m.total_power_slack >= -1e-9);
}

TEST_CASE("a matched sensing beam sits exactly on the floor") {
  SystemConfig cfg = small_config(8, 2, 1);
  cfg.sensing_floor[0] = 2.0;
  const Scenario sc = sample_scenario(cfg, 9);

  Solution sol = Solution::zero(8, 2);
  const VecC a = sc.steering(0);
  // Gain of w = c a at angle theta_0 is |c|^2 N_t^2; pick c for gain = eta.
  const double c = std::sqrt(cfg.sensing_floor[0]) / 8.0;
  sol.beams.col(0) = c * a;

  const ConstraintMargins m = evaluate_margins(sc, sol);
  CHECK(std::abs(m.sensing_margin[0]) <= 1e-9);
}

TEST_CASE("margins are continuous in the solution") {
  const SystemConfig cfg = small_config(8, 2, 1);
  const Scenario sc = sample_scenario(cfg, 11);
  const NullProjector proj = null_projector(sc.channels);

  Rng rng(12);
  Solution sol = Solution::zero(8, 2);
  sol.beams.col(0) = random_cvec(rng, 8);
  sol.beams.col(1) = random_cvec(rng, 8);
  sol.an = random_cvec(rng, 8);
  sol.refresh_an(proj);

  const ConstraintMargins base = evaluate_margins(sc, sol);

  const double eps = 1e-6;
  Solution nudged = sol;
  nudged.beams.array() += cplx(eps, 0);
  nudged.an.array() += cplx(0, eps);
  nudged.refresh_an(proj);
  const ConstraintMargins moved = evaluate_margins(sc, nudged);

  const double tol = 1e-3;  // O(eps) with a comfortable constant
  CHECK(std::abs(moved.total_power_slack - base.total_power_slack) < tol);
  CHECK((moved.per_user_power_slack - base.per_user_power_slack)
            .cwiseAbs()
            .maxCoeff() < tol);
  CHECK((moved.sensing_margin - base.sensing_margin).cwiseAbs().maxCoeff() <
        tol);
  CHECK((moved.eaves_cap_slack - base.eaves_cap_slack)
            .cwiseAbs()
            .maxCoeff() < tol);
}

TEST_CASE("feasibility gate checks every family") {
  ConstraintMargins m;
  m.per_user_power_slack = VecR::Constant(2, 1.0);
  m.total_power_slack = 1.0;
  m.eaves_cap_slack = MatR::Constant(2, 1, 0.5);
  m.sensing_margin = VecR::Constant(1, 0.1);
  m.beamwidth_excess = MatR::Constant(1, 2, -5.0);  // reported, not gating
  CHECK(is_feasible(m));

  ConstraintMargins bad = m;
  bad.total_power_slack = -1e-6;
  CHECK_FALSE(is_feasible(bad));
  bad = m;
  bad.per_user_power_slack[1] = -1e-6;
  CHECK_FALSE(is_feasible(bad));
  bad = m;
  bad.eaves_cap_slack(0, 0) = -1e-6;
  CHECK_FALSE(is_feasible(bad));
  bad = m;
  bad.sensing_margin[0] = -1e-6;
  CHECK_FALSE(is_feasible(bad));
  // Tiny violations inside the tolerance still pass.
  bad = m;
  bad.sensing_margin[0] = -0.5e-9;
  CHECK(is_feasible(bad));
}
