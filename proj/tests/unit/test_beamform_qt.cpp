#include <doctest.h>

#include <cmath>

#include "secisac/beamform_qt.hpp"
#include "secisac/feasibility.hpp"
#include "secisac/nullspace.hpp"
#include "test_util.hpp"

using namespace secisac;
using secisac::testing::random_cvec;
using secisac::testing::small_config;

namespace {

struct Fixture {
  Scenario sc;
  NullProjector proj;
  Solution sol;
  AuxStateI aux;

  explicit Fixture(std::uint64_t seed, int n_tx = 8, int k = 2) {
    SystemConfig cfg = small_config(n_tx, k, 1);
    sc = sample_scenario(cfg, seed);
    proj = null_projector(sc.channels);
    sol = Solution::zero(n_tx, k);
    Rng rng(seed ^ 0xabcdef);
    for (int i = 0; i < k; ++i)
      sol.beams.col(i) =
          random_cvec(rng, n_tx) * std::sqrt(cfg.per_user_power[i] / n_tx);
    sol.an = random_cvec(rng, n_tx);
    sol.refresh_an(proj);
    aux = AuxStateI::make(n_tx, k);
  }
};

}  // namespace

TEST_CASE("residual interference term") {
  // Scalar case: h=[1], other beam 2, sigma^2=1, AN off -> 5.
  SystemConfig cfg = small_config(1, 2, 1);
  cfg.per_user_power.assign(2, 10.0);
  cfg.total_power = 20.0;
  Scenario sc = sample_scenario(cfg, 4);
  sc.channels.setOnes();
  Solution sol = Solution::zero(1, 2);
  sol.beams(0, 1) = cplx(2, 0);
  CHECK(residual_b(sc, sol, 0) == doctest::Approx(5.0).epsilon(1e-12));

  // K=1 with no AN: just the noise floor.
  SystemConfig cfg1 = small_config(4, 1, 1);
  cfg1.fairness_floor = 1.0;
  Scenario sc1 = sample_scenario(cfg1, 5);
  Solution sol1 = Solution::zero(4, 1);
  CHECK(residual_b(sc1, sol1, 0) == doctest::Approx(1.0).epsilon(1e-12));

  // AN in the null space contributes nothing.
  Fixture fx(11);
  const double with_an = residual_b(fx.sc, fx.sol, 0);
  Solution no_an = fx.sol;
  no_an.an_effective.setZero();
  CHECK(residual_b(fx.sc, no_an, 0) ==
        doctest::Approx(with_an).epsilon(1e-9));
}

TEST_CASE("anchor assignment and bound equality at the anchor") {
  Fixture fx(3);
  refresh_ratios(fx.sc, fx.sol, fx.aux);
  update_z1(fx.sol, fx.aux);
  CHECK((fx.aux.z - fx.sol.beams).norm() == 0.0);

  // With z = w the bound on w^H D w is exact.
  Rng rng(42);
  fx.aux.y = random_cvec(rng, 2);
  fx.aux.zeta << 0.7, 1.3;
  const VecR mu = VecR::Constant(2, 0.5);
  build_d1(fx.sc, fx.aux, mu);
  for (int k = 0; k < 2; ++k) {
    const VecC w = fx.sol.beams.col(k);
    const double lhs = std::real(w.dot(fx.aux.d_mat * w));
    const double rhs =
        fx.aux.kappa * w.squaredNorm() -
        2.0 * std::real(w.dot((fx.aux.kappa * MatC::Identity(8, 8) -
                               fx.aux.d_mat) *
                              w)) +
        std::real(w.dot((fx.aux.kappa * MatC::Identity(8, 8) - fx.aux.d_mat) *
                        w));
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("optimal ratio auxiliary") {
  CHECK(update_y1(cplx(1, 0), 2.0) == cplx(0.5, 0.0));
  CHECK(update_y1(cplx(0, 0), 3.0) == cplx(0, 0));

  // Quadratic surrogate value at the optimum recovers |e|^2 / B_hat.
  const cplx e(1.2, -0.7);
  const double b_hat = 3.4;
  const cplx y = update_y1(e, b_hat);
  const double s = 2.0 * std::real(std::conj(y) * e) - std::norm(y) * b_hat;
  CHECK(s == doctest::Approx(std::norm(e) / b_hat).epsilon(1e-12));
}

TEST_CASE("zeta update closed form and stationarity") {
  Fixture fx(6);
  refresh_ratios(fx.sc, fx.sol, fx.aux);

  // y = 0 reduces the shortcut denominator to 1.
  const ZetaResult at_zero =
      update_zeta1(fx.sc, fx.sol, 0, cplx(0, 0), fx.aux.e[0], fx.aux.b_hat[0]);
  CHECK(at_zero.zeta ==
        doctest::Approx(1.0 / std::log(2.0) - 1.0).epsilon(1e-9));
  CHECK_FALSE(at_zero.used_fallback);

  // The returned value zeroes the surrogate derivative.
  for (int k = 0; k < 2; ++k) {
    const cplx y = update_y1(fx.aux.e[k], fx.aux.b_hat[k]);
    const ZetaResult zr =
        update_zeta1(fx.sc, fx.sol, k, y, fx.aux.e[k], fx.aux.b_hat[k]);
    const double s_hat = 2.0 * std::real(std::conj(y) * fx.aux.e[k]) -
                         std::norm(y) * fx.aux.b_hat[k];
    CHECK(std::abs(surrogate_f_dzeta(zr.zeta, 0.5, s_hat)) < 1e-8);
  }
}

TEST_CASE("classical transform tightness at zeta = sinr") {
  // log2(1+zeta) - zeta + (1+zeta) * rho/(1+rho) == log2(1+rho) at zeta=rho.
  for (double rho : {0.1, 1.0, 4.0, 40.0}) {
    const double s = rho / (1.0 + rho);
    const double h = std::log2(1.0 + rho) - rho + (1.0 + rho) * s;
    CHECK(h == doctest::Approx(std::log2(1.0 + rho)).epsilon(1e-12));
  }
}

TEST_CASE("coupling matrix structure") {
  Fixture fx(9);
  refresh_ratios(fx.sc, fx.sol, fx.aux);
  const VecR mu = VecR::Constant(2, 0.5);

  // All-zero auxiliaries: zero matrix, clamped kappa.
  build_d1(fx.sc, fx.aux, mu);
  CHECK(fx.aux.d_mat.norm() == 0.0);
  CHECK(fx.aux.kappa == doctest::Approx(1e-12));

  Rng rng(10);
  fx.aux.y = random_cvec(rng, 2);
  fx.aux.zeta << 0.4, 2.0;
  build_d1(fx.sc, fx.aux, mu);

  // PSD and dominated by kappa.
  Eigen::SelfAdjointEigenSolver<MatC> eig(fx.aux.d_mat);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  CHECK(fx.aux.kappa >= eig.eigenvalues().maxCoeff() * (1.0 - 1e-12));

  // K=1 rank-one case: lambda_max = mu(1+zeta)|y|^2 ||h||^2.
  SystemConfig cfg1 = small_config(6, 1, 1);
  cfg1.fairness_floor = 1.0;
  Scenario sc1 = sample_scenario(cfg1, 12);
  AuxStateI aux1 = AuxStateI::make(6, 1);
  aux1.y[0] = cplx(0.3, -0.2);
  aux1.zeta[0] = 1.5;
  VecR mu1(1);
  mu1 << 1.0;
  build_d1(sc1, aux1, mu1);
  const double expect = 1.0 * 2.5 * std::norm(aux1.y[0]) *
                        sc1.channel(0).squaredNorm();
  CHECK(largest_eigenvalue(aux1.d_mat) ==
        doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("beam update fixed point") {
  SystemConfig cfg = small_config(6, 1, 1);
  cfg.fairness_floor = 1.0;
  Scenario sc = sample_scenario(cfg, 14);
  AuxStateI aux = AuxStateI::make(6, 1);
  VecR mu(1);
  mu << 1.0;
  aux.y[0] = cplx(0.4, 0.1);
  aux.zeta[0] = 0.9;
  build_d1(sc, aux, mu);

  // Solve D w = mu(1+zeta) h^H y exactly, anchor there: update is a no-op in
  // range(D); pick w inside the channel direction so the null part matches.
  const VecC hk = sc.channel(0).adjoint();
  const cplx coef = mu[0] * (1.0 + aux.zeta[0]) * aux.y[0];
  const double c_d = mu[0] * (1.0 + aux.zeta[0]) * std::norm(aux.y[0]);
  // D = c_d h h^H, so w = coef/(c_d ||h||^2) h satisfies D w = coef h.
  const VecC w_fix = (coef / (c_d * hk.squaredNorm())) * hk;
  aux.z.col(0) = w_fix;
  const VecC w_next = update_w(0, aux, mu, sc);
  CHECK((w_next - w_fix).norm() < 1e-10 * w_fix.norm());
}

TEST_CASE("surrogate never decreases within a pass") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    Fixture fx(seed);
    const VecR mu = VecR::Constant(2, 0.5);
    for (int it = 0; it < 5; ++it) {
      double stages[4];
      beamform_pass(fx.sc, fx.sol, fx.aux, mu, stages);
      for (int s = 1; s < 4; ++s) CHECK(stages[s] >= stages[s - 1] - 1e-10);
    }
  }
}

TEST_CASE("surrogate tightness against the weighted sum rate") {
  Fixture fx(21);
  const VecR mu = VecR::Constant(2, 0.5);
  refresh_ratios(fx.sc, fx.sol, fx.aux);
  update_z1(fx.sol, fx.aux);
  for (int k = 0; k < 2; ++k) {
    fx.aux.y[k] = update_y1(fx.aux.e[k], fx.aux.b_hat[k]);
    fx.aux.zeta[k] = sinr_legitimate(fx.sc, fx.sol, k);
  }
  build_d1(fx.sc, fx.aux, mu);

  double expect = 0.0;
  for (int k = 0; k < 2; ++k)
    expect += mu[k] * std::log2(1.0 + sinr_legitimate(fx.sc, fx.sol, k));
  CHECK(surrogate_f(fx.sc, fx.sol, fx.aux, mu) ==
        doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("projection onto the power ball and the cap") {
  Fixture fx(31);
  const double p_k = fx.sc.config.per_user_power[0];

  // Feasible beams are untouched.
  VecC small = fx.sol.beams.col(0) * 1e-3;
  CHECK((project_w(small, fx.sc, fx.sol, 0) - small).norm() < 1e-14);

  // 4x power excess scales by 1/2.
  VecC big = fx.sol.beams.col(0);
  big *= std::sqrt(4.0 * p_k / big.squaredNorm());
  const VecC shrunk = project_w(big, fx.sc, fx.sol, 0);
  CHECK(shrunk.squaredNorm() <= p_k * (1.0 + 1e-12));

  // Beam aimed straight at the target: cap reached within 1e-9.
  VecC aimed = fx.sc.steering(0) * std::sqrt(p_k / 8.0);
  const double cap = eaves_cap_bound(fx.sc, fx.sol, 0);
  const double q0 = std::norm(fx.sc.steering(0).dot(aimed));
  if (q0 > cap) {
    const VecC capped = project_w(aimed, fx.sc, fx.sol, 0);
    const double q = std::norm(fx.sc.steering(0).dot(capped));
    CHECK(q <= cap + 1e-9);
    CHECK(q == doctest::Approx(cap).epsilon(1e-9));
  }
}

TEST_CASE("non-homogeneous bound holds for random anchors") {
  Rng rng(61);
  int tested = 0;
  while (tested < 100) {
    const int n = 6;
    MatC g(n, n);
    for (int r = 0; r < n; ++r) g.row(r) = random_cvec(rng, n).transpose();
    const MatC d = g.adjoint() * g;  // Hermitian PSD
    const double kappa = largest_eigenvalue(d) * (1.0 + 1e-9);
    const VecC w = random_cvec(rng, n);
    const VecC z = random_cvec(rng, n);

    const double lhs = std::real(w.dot(d * w));
    const MatC slack = kappa * MatC::Identity(n, n) - d;
    const double rhs = kappa * w.squaredNorm() -
                       2.0 * std::real(w.dot(slack * z)) +
                       std::real(z.dot(slack * z));
    CHECK(rhs >= lhs - 1e-9 * std::max(1.0, std::abs(lhs)));
    ++tested;
  }
}
