#include "secisac/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace secisac {

Solution Solution::zero(int n_tx, int n_users) {
  Solution s;
  s.beams = MatC::Zero(n_tx, n_users);
  s.an = VecC::Zero(n_tx);
  s.an_effective = VecC::Zero(n_tx);
  return s;
}

double sinr_legitimate(const Scenario& sc, const Solution& sol, int k) {
  const auto h = sc.channel(k);
  const double signal = std::norm((h * sol.beams.col(k)).value());
  double denom = sc.config.noise_user[k];
  for (int i = 0; i < sc.config.n_users; ++i)
    if (i != k) denom += std::norm((h * sol.beams.col(i)).value());
  denom += std::norm((h * sol.an_effective).value());
  return signal / denom;
}

double snr_eavesdropper(const Scenario& sc, const Solution& sol, int k, int j) {
  const VecC a = sc.steering(j);
  const double gain2 = std::norm(sc.config.path_gain[j]);
  const double signal = gain2 * std::norm(a.dot(sol.beams.col(k)));
  const double denom =
      gain2 * std::norm(a.dot(sol.an_effective)) + sc.config.noise_eve;
  return signal / denom;
}

double secrecy_rate_user(double rho_l, const VecR& rho_e_row) {
  double leak = 0.0;
  for (int j = 0; j < rho_e_row.size(); ++j)
    leak = std::max(leak, std::log2(1.0 + rho_e_row[j]));
  return std::max(0.0, std::log2(1.0 + rho_l) - leak);
}

RateReport rate_report(const Scenario& sc, const Solution& sol) {
  const int k_users = sc.config.n_users;
  const int j_targets = sc.config.n_targets;
  RateReport r;
  r.sinr_legit.resize(k_users);
  r.snr_eve.resize(k_users, j_targets);
  r.secrecy_per_user.resize(k_users);
  for (int k = 0; k < k_users; ++k) {
    r.sinr_legit[k] = sinr_legitimate(sc, sol, k);
    for (int j = 0; j < j_targets; ++j)
      r.snr_eve(k, j) = snr_eavesdropper(sc, sol, k, j);
    r.secrecy_per_user[k] =
        secrecy_rate_user(r.sinr_legit[k], r.snr_eve.row(k));
    r.sum_secrecy += r.secrecy_per_user[k];
    r.sum_rate += std::log2(1.0 + r.sinr_legit[k]);
  }
  return r;
}

double sum_secrecy_rate(const Scenario& sc, const Solution& sol) {
  return rate_report(sc, sol).sum_secrecy;
}

double jain_index(const VecR& mu, const VecR& rho) {
  const int k = static_cast<int>(mu.size());
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < k; ++i) {
    const double x = mu[i] * rho[i];
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0.0)
    throw std::domain_error("jain_index: undefined fairness (all products zero)");
  return (sum * sum) / (k * sum_sq);
}

double entropy(const VecR& mu) {
  double h = 0.0;
  for (int i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) h -= mu[i] * std::log(mu[i]);
  return h;
}

double beam_gain(const Solution& sol, const Scenario& sc, double theta) {
  const VecC a =
      steering_vector(theta, sc.config.n_tx, sc.config.spacing_ratio);
  double gain = std::norm(a.dot(sol.an_effective));
  for (int k = 0; k < sol.beams.cols(); ++k)
    gain += std::norm(a.dot(sol.beams.col(k)));
  return gain;
}

}  // namespace secisac
