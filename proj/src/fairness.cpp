#include "secisac/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "secisac/metrics.hpp"

namespace secisac {

namespace {

void check_positive(const VecR& rho, const char* who) {
  for (int k = 0; k < rho.size(); ++k)
    if (rho[k] <= 0.0)
      throw std::domain_error(std::string(who) + ": rho must be positive");
}

// Interior safeguard for the entropy term: clamp and renormalize.
VecR to_interior(const VecR& mu) {
  VecR out = mu.cwiseMax(1e-12);
  return out / out.sum();
}

}  // namespace

double normalization_g(const VecR& rho) {
  check_positive(rho, "normalization_g");
  double best = 0.0;
  for (int k = 0; k < rho.size(); ++k)
    best = std::max(best, std::log2(1.0 + rho[k]));
  return 1.0 / best;
}

VecR fairness_closed_form(const VecR& rho) {
  check_positive(rho, "fairness_closed_form");
  VecR mu = rho.cwiseInverse();
  return mu / mu.sum();
}

double penalized_objective(const VecR& mu, const VecR& rho, double chi,
                           double nu, double lambda, double xi_f) {
  const double g = normalization_g(rho);
  double rate_term = 0.0;
  for (int k = 0; k < rho.size(); ++k)
    rate_term += mu[k] * std::log2(1.0 + rho[k]);
  const double fairness = jain_index(mu, rho);
  const double gap = std::max(0.0, xi_f - fairness);
  return (1.0 - chi) * g * rate_term + chi * fairness - nu * entropy(mu) -
         lambda * gap * gap;
}

VecR gradient_mu(const VecR& mu, const VecR& rho, double chi, double nu,
                 double lambda, double xi_f) {
  const int k_users = static_cast<int>(mu.size());
  for (int k = 0; k < k_users; ++k)
    if (mu[k] <= 0.0)
      throw std::domain_error("gradient_mu: requires an interior point");

  const double g = normalization_g(rho);
  const double dot = mu.dot(rho);
  const double norm_sq = (mu.array() * rho.array()).square().sum();
  const double fairness = (dot * dot) / (k_users * norm_sq);
  const double gap = std::max(0.0, xi_f - fairness);

  VecR grad(k_users);
  for (int k = 0; k < k_users; ++k) {
    const double r = rho[k];
    // dF/dmu_k: bracketed fairness term of the gradient.
    const double df = 2.0 * dot * r / (k_users * norm_sq) -
                      2.0 * dot * dot * r * r * mu[k] /
                          (k_users * norm_sq * norm_sq);
    grad[k] = (1.0 - chi) * g * std::log2(1.0 + r) + chi * df +
              nu * (1.0 + std::log(mu[k]));
    if (lambda > 0.0 && gap > 0.0) grad[k] += 2.0 * lambda * gap * df;
  }
  return grad;
}

VecR project_simplex(const VecR& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, tau = 0.0;
  int rho_idx = 0;
  for (int i = 0; i < n; ++i) {
    css += u[i];
    const double t = (css - 1.0) / (i + 1);
    if (u[i] - t > 0.0) {
      rho_idx = i;
      tau = t;
    }
  }
  (void)rho_idx;
  return ((v.array() - tau).max(0.0)).matrix();
}

HfroResult hfro_optimize(const VecR& rho, const SystemConfig& config,
                         const std::vector<double>* chi_path) {
  check_positive(rho, "hfro_optimize");

  std::vector<double> path;
  if (chi_path != nullptr) {
    path = *chi_path;
  } else {
    const int t_steps = config.tradeoff_steps;
    if (t_steps == 1) {
      path = {1.0};
    } else {
      for (int t = 0; t < t_steps; ++t)
        path.push_back(1.0 - static_cast<double>(t) / (t_steps - 1));
    }
  }

  const double nu = config.entropy_weight;
  const double lambda = config.penalty_weight;
  const double xi_f = config.fairness_floor;
  const double eta = config.trust_rate;

  VecR mu = fairness_closed_form(rho);  // 1/rho-proportional start

  HfroResult result;
  for (double chi : path) {
    for (int i = 0; i < config.inner_iters; ++i) {
      const VecR mu_old = mu;
      const double obj_old =
          penalized_objective(mu_old, rho, chi, nu, lambda, xi_f);
      double alpha = config.step_size;
      VecR candidate = mu_old;
      for (int h = 0; h <= 20; ++h) {
        const VecR grad =
            gradient_mu(to_interior(mu_old), rho, chi, nu, lambda, xi_f);
        VecR stepped = project_simplex(mu_old + alpha * grad);
        stepped = (1.0 - eta) * mu_old + eta * stepped;  // trust region
        if (penalized_objective(to_interior(stepped), rho, chi, nu, lambda,
                                xi_f) >= obj_old - 1e-14) {
          candidate = stepped;
          break;
        }
        alpha *= 0.5;  // backtrack on objective decrease
      }
      mu = to_interior(candidate);
    }

    FairnessState state;
    state.mu = mu;
    state.chi = chi;
    state.g_norm = normalization_g(rho);
    state.fairness = jain_index(mu, rho);
    state.entropy_val = entropy(mu);
    state.objective = penalized_objective(mu, rho, chi, nu, lambda, xi_f);
    if (!std::isfinite(state.objective)) {
      std::ostringstream msg;
      msg << "hfro_optimize: non-finite objective at chi=" << chi;
      throw std::runtime_error(msg.str());
    }
    result.trace.push_back(std::move(state));
  }

  result.mu = mu;
  return result;
}

}  // namespace secisac
