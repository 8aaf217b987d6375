#include "secisac/beamform_qt.hpp"

#include <cmath>

#include "secisac/feasibility.hpp"

namespace secisac {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kKappaFloor = 1e-12;
constexpr double kZetaCap = 1e9;  // no interior stationary point

// Stationary point of mu [log2(1+z) - z + (1+z) s_hat] in z:
// 1/(ln2 (1+z)) = 1 - s_hat.
double stationary_zeta(double s_hat) {
  if (s_hat >= 1.0) return kZetaCap;
  return 1.0 / (kLn2 * (1.0 - s_hat)) - 1.0;
}

}  // namespace

AuxStateI AuxStateI::make(int n_tx, int n_users) {
  AuxStateI a;
  a.e = VecC::Zero(n_users);
  a.b_res = VecR::Zero(n_users);
  a.b_hat = VecR::Zero(n_users);
  a.y = VecC::Zero(n_users);
  a.zeta = VecR::Zero(n_users);
  a.z = MatC::Zero(n_tx, n_users);
  a.d_mat = MatC::Zero(n_tx, n_tx);
  return a;
}

double largest_eigenvalue(const MatC& m) {
  const int n = static_cast<int>(m.rows());
  if (n <= 64) {
    Eigen::SelfAdjointEigenSolver<MatC> eig(m, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
  }
  // Power iteration for large arrays.
  VecC v = VecC::Ones(n) / std::sqrt(static_cast<double>(n));
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    VecC w = m * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = std::real(w.dot(m * w));
    if (std::abs(next - lambda) <= 1e-10 * std::max(1.0, std::abs(next))) {
      return next;
    }
    lambda = next;
    v = w;
  }
  return lambda;
}

double residual_b(const Scenario& sc, const Solution& sol, int k) {
  const auto h = sc.channel(k);
  double b = sc.config.noise_user[k];
  for (int i = 0; i < sc.config.n_users; ++i)
    if (i != k) b += std::norm((h * sol.beams.col(i)).value());
  b += std::norm((h * sol.an_effective).value());
  return b;
}

void refresh_ratios(const Scenario& sc, const Solution& sol, AuxStateI& aux) {
  for (int k = 0; k < sc.config.n_users; ++k) {
    aux.e[k] = (sc.channel(k) * sol.beams.col(k)).value();
    aux.b_res[k] = residual_b(sc, sol, k);
    aux.b_hat[k] = std::norm(aux.e[k]) + aux.b_res[k];
  }
}

void update_z1(const Solution& sol, AuxStateI& aux) { aux.z = sol.beams; }

cplx update_y1(cplx e_k, double b_hat_k) { return e_k / b_hat_k; }

ZetaResult update_zeta1(const Scenario& sc, const Solution& sol, int k,
                        cplx y_k, cplx e_k, double b_hat_k) {
  // Shortcut closed form: 1/(ln2 (1 + n~ + sigma^2 |y|^2 - Re(y* e))) - 1
  // with n~ = |y|^2 |h_k n_eff|^2. It omits the beam interference part of
  // B_hat, so the stationary point of the surrogate is the reference.
  const double an_term =
      std::norm(y_k) *
      std::norm((sc.channel(k) * sol.an_effective).value());
  const double denom = 1.0 + an_term +
                       sc.config.noise_user[k] * std::norm(y_k) -
                       std::real(std::conj(y_k) * e_k);

  const double s_hat =
      2.0 * std::real(std::conj(y_k) * e_k) - std::norm(y_k) * b_hat_k;
  const double exact = stationary_zeta(s_hat);

  ZetaResult r;
  if (denom <= 0.0) {
    r.zeta = exact;
    r.used_fallback = true;
    return r;
  }
  const double shortcut = 1.0 / (kLn2 * denom) - 1.0;
  if (std::abs(shortcut - exact) > 1e-8 * std::max(1.0, std::abs(exact))) {
    r.zeta = exact;
    r.used_fallback = true;
  } else {
    r.zeta = shortcut;
  }
  return r;
}

void build_d1(const Scenario& sc, AuxStateI& aux, const VecR& mu) {
  const int n = sc.config.n_tx;
  aux.d_mat = MatC::Zero(n, n);
  for (int k = 0; k < sc.config.n_users; ++k) {
    const double c = mu[k] * (1.0 + aux.zeta[k]) * std::norm(aux.y[k]);
    if (c == 0.0) continue;
    const VecC hk = sc.channel(k).adjoint();  // column h_k^H
    aux.d_mat.noalias() += c * (hk * hk.adjoint());
  }
  aux.kappa = std::max(
      sc.config.kappa_margin * largest_eigenvalue(aux.d_mat), kKappaFloor);
}

VecC update_w(int k, const AuxStateI& aux, const VecR& mu,
              const Scenario& sc) {
  const VecC hk = sc.channel(k).adjoint();
  return aux.z.col(k) +
         (mu[k] * (1.0 + aux.zeta[k]) * aux.y[k] * hk -
          aux.d_mat * aux.z.col(k)) /
             aux.kappa;
}

VecC project_w(const VecC& w_k, const Scenario& sc, const Solution& sol,
               int k) {
  VecC w = w_k;
  const double p_k = sc.config.per_user_power[k];
  for (int cycle = 0; cycle < 8; ++cycle) {
    bool changed = false;
    const double power = w.squaredNorm();
    if (power > p_k) {
      w *= std::sqrt(p_k / power);
      changed = true;
    }
    for (int j = 0; j < sc.config.n_targets; ++j) {
      const double cap = eaves_cap_bound(sc, sol, j);
      const VecC a = sc.steering(j);
      const double q = std::norm(a.dot(w));
      if (q > cap) {
        // Exact Euclidean projection onto |a^H w|^2 <= cap: shrink only the
        // component along a, keeping the orthogonal part (and hence most of
        // the useful signal) intact. Never increases the norm.
        const VecC a_dir = a / a.norm();
        const cplx coef = a_dir.dot(w);
        w -= (1.0 - std::sqrt(cap / q)) * coef * a_dir;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return w;
}

double surrogate_f_dzeta(double zeta, double mu_k, double s_hat) {
  return mu_k * (1.0 / (kLn2 * (1.0 + zeta)) - 1.0 + s_hat);
}

double surrogate_f(const Scenario& sc, const Solution& sol,
                   const AuxStateI& aux, const VecR& mu) {
  double f = 0.0;
  const MatC& d = aux.d_mat;
  for (int k = 0; k < sc.config.n_users; ++k) {
    const auto h = sc.channel(k);
    const cplx e_k = (h * sol.beams.col(k)).value();
    const double c = mu[k] * (1.0 + aux.zeta[k]);
    const VecC w = sol.beams.col(k);
    const VecC z = aux.z.col(k);
    const VecC dz = d * z;
    f += 2.0 * std::real(c * std::conj(aux.y[k]) * e_k);
    f += 2.0 * std::real(aux.kappa * w.dot(z) - w.dot(dz));
    f += std::real(z.dot(dz)) - aux.kappa * z.squaredNorm();
    f -= aux.kappa * w.squaredNorm();
    const double an_term = std::norm((h * sol.an_effective).value());
    f -= c * std::norm(aux.y[k]) * (an_term + sc.config.noise_user[k]);
    f += mu[k] * (std::log2(1.0 + aux.zeta[k]) - aux.zeta[k]);
  }
  return f;
}

void beamform_pass(const Scenario& sc, Solution& sol, AuxStateI& aux,
                   const VecR& mu, double f_stages[4]) {
  const int k_users = sc.config.n_users;
  refresh_ratios(sc, sol, aux);

  update_z1(sol, aux);
  build_d1(sc, aux, mu);  // kappa consistent with current (y, zeta)
  if (f_stages) f_stages[0] = surrogate_f(sc, sol, aux, mu);

  for (int k = 0; k < k_users; ++k) aux.y[k] = update_y1(aux.e[k], aux.b_hat[k]);
  build_d1(sc, aux, mu);
  if (f_stages) f_stages[1] = surrogate_f(sc, sol, aux, mu);

  for (int k = 0; k < k_users; ++k) {
    const ZetaResult zr =
        update_zeta1(sc, sol, k, aux.y[k], aux.e[k], aux.b_hat[k]);
    aux.zeta[k] = zr.zeta;
    if (zr.used_fallback) ++aux.zeta_fallbacks;
  }
  build_d1(sc, aux, mu);
  if (f_stages) f_stages[2] = surrogate_f(sc, sol, aux, mu);

  // Richardson refinement: re-anchoring z at the current beams keeps the
  // bound tight, so repeating the kappa step drives the pass to the exact
  // surrogate maximizer while every micro-step stays non-decreasing.
  for (int refine = 0; refine < 200; ++refine) {
    update_z1(sol, aux);
    double delta = 0.0, scale = 0.0;
    for (int k = 0; k < k_users; ++k) {
      const VecC w_next = update_w(k, aux, mu, sc);
      delta += (w_next - aux.z.col(k)).squaredNorm();
      scale += w_next.squaredNorm();
      sol.beams.col(k) = w_next;
    }
    if (delta <= 1e-24 * std::max(1.0, scale)) break;
  }
  if (f_stages) f_stages[3] = surrogate_f(sc, sol, aux, mu);

  for (int k = 0; k < k_users; ++k)
    sol.beams.col(k) = project_w(sol.beams.col(k), sc, sol, k);
}

}  // namespace secisac
