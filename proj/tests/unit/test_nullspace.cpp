#include <doctest.h>

#include <stdexcept>

#include "secisac/metrics.hpp"
#include "secisac/nullspace.hpp"
#include "test_util.hpp"

using namespace secisac;
using secisac::testing::random_cvec;
using secisac::testing::small_config;

TEST_CASE("projector for a single axis channel") {
  MatC h(1, 2);
  h << cplx(1, 0), cplx(0, 0);
  const NullProjector p = null_projector(h);
  CHECK(std::abs(p.matrix(0, 0)) < 1e-12);
  CHECK(std::abs(p.matrix(1, 1) - cplx(1, 0)) < 1e-12);
  CHECK(std::abs(p.matrix(0, 1)) < 1e-12);
  CHECK(p.source_rank == 1);
}

TEST_CASE("projector invariants on random channels") {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const int n_tx = 8 + (trial % 3) * 4;
    const int k = 2 + (trial % 3);
    MatC h(k, n_tx);
    for (int r = 0; r < k; ++r) h.row(r) = random_cvec(rng, n_tx).transpose();
    const NullProjector p = null_projector(h);

    CHECK((p.matrix - p.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((p.matrix * p.matrix - p.matrix).norm() < 1e-10 * p.matrix.norm());
    CHECK((h * p.matrix).norm() < 1e-10 * h.norm());
    CHECK(std::abs(p.matrix.trace().real() - (n_tx - k)) < 1e-8);
  }
}

TEST_CASE("full-row-space channels yield the zero projector") {
  Rng rng(3);
  MatC h(4, 4);
  for (int r = 0; r < 4; ++r) h.row(r) = random_cvec(rng, 4).transpose();
  const NullProjector p = null_projector(h);
  CHECK(p.matrix.norm() < 1e-8);
}

TEST_CASE("rank-deficient channels raise an error with the ratio") {
  MatC h(2, 4);
  h.row(0) << cplx(1, 0), cplx(2, 0), cplx(0, 1), cplx(0, 0);
  h.row(1) = 2.0 * h.row(0);  // duplicated direction
  try {
    null_projector(h);
    FAIL("expected RankDeficientError");
  } catch (const RankDeficientError& e) {
    CHECK(e.sv_ratio >= 0.0);
    CHECK(e.sv_ratio <= 1e-10);
  }
  MatC wide(3, 2);
  wide.setOnes();
  CHECK_THROWS_AS(null_projector(wide), std::invalid_argument);
}

TEST_CASE("effective noise annihilates the row space") {
  Rng rng(7);
  MatC h(2, 8);
  for (int r = 0; r < 2; ++r) h.row(r) = random_cvec(rng, 8).transpose();
  const NullProjector p = null_projector(h);

  const VecC raw = random_cvec(rng, 8);
  const VecC eff = effective_noise(p, raw);
  for (int k = 0; k < 2; ++k)
    CHECK(std::abs((h.row(k) * eff).value()) <=
          1e-9 * h.row(k).norm() * (eff.norm() + 1.0));

  // Already in the null space: unchanged.
  const VecC again = effective_noise(p, eff);
  CHECK((again - eff).norm() <= 1e-10 * (eff.norm() + 1.0));

  // Row-space input: annihilated.
  const VecC row_vec = h.adjoint() * random_cvec(rng, 2);
  CHECK(effective_noise(p, row_vec).norm() < 1e-9 * row_vec.norm());

  CHECK_THROWS_AS(effective_noise(p, random_cvec(rng, 5)),
                  std::invalid_argument);
}

TEST_CASE("effective noise hand example") {
  MatC h(1, 2);
  h << cplx(1, 0), cplx(0, 0);
  const NullProjector p = null_projector(h);
  VecC raw(2);
  raw << cplx(3, 0), cplx(4, 0);
  const VecC eff = effective_noise(p, raw);
  CHECK(std::abs(eff[0]) < 1e-12);
  CHECK(std::abs(eff[1] - cplx(4, 0)) < 1e-12);
}

TEST_CASE("effective covariance sandwich") {
  MatC h(1, 2);
  h << cplx(1, 0), cplx(0, 0);
  const NullProjector p = null_projector(h);

  const MatC out = effective_covariance(p, MatC::Identity(2, 2));
  CHECK(std::abs(out(0, 0)) < 1e-12);
  CHECK(std::abs(out(1, 1) - cplx(1, 0)) < 1e-12);

  // Rank-one input matches the projected outer product.
  Rng rng(13);
  const VecC n = random_cvec(rng, 2);
  const MatC r1 = effective_covariance(p, n * n.adjoint());
  const VecC pn = p.matrix * n;
  CHECK((r1 - pn * pn.adjoint()).norm() < 1e-10);

  MatC bad(2, 2);
  bad << cplx(1, 0), cplx(1, 1), cplx(0, 0), cplx(1, 0);
  CHECK_THROWS_AS(effective_covariance(p, bad), std::domain_error);
}

TEST_CASE("AN through the projector never reaches users") {
  const SystemConfig cfg = small_config(8, 2, 1);
  const Scenario sc = sample_scenario(cfg, 17);
  const NullProjector p = null_projector(sc.channels);

  Rng rng(99);
  Solution sol = Solution::zero(8, 2);
  sol.beams.col(0) = random_cvec(rng, 8);
  sol.beams.col(1) = random_cvec(rng, 8);
  sol.an = random_cvec(rng, 8);
  sol.refresh_an(p);

  VecR base(2);
  for (int k = 0; k < 2; ++k) {
    CHECK(std::norm((sc.channel(k) * sol.an_effective).value()) <= 1e-16);
    base[k] = sinr_legitimate(sc, sol, k);
  }
  sol.an *= 3.7;  // AN scaling leaves user SINRs untouched
  sol.refresh_an(p);
  for (int k = 0; k < 2; ++k)
    CHECK(sinr_legitimate(sc, sol, k) ==
          doctest::Approx(base[k]).epsilon(1e-12));
}
