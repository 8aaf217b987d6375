#include "secisac/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace secisac {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument("SystemConfig: " + msg);
}

std::vector<double> real_list(const json& j, const std::string& key, int n) {
  std::vector<double> out;
  if (j.at(key).is_array())
    out = j.at(key).get<std::vector<double>>();
  else
    out.assign(static_cast<size_t>(n), j.at(key).get<double>());
  return out;
}

}  // namespace

void SystemConfig::validate() const {
  require(n_tx > 0, "n_tx must be positive");
  require(n_users > 0, "n_users must be positive");
  require(n_targets > 0, "n_targets must be positive");
  require(static_cast<int>(per_user_power.size()) == n_users,
          "per_user_power must have K entries");
  require(static_cast<int>(noise_user.size()) == n_users,
          "noise_user must have K entries");
  require(static_cast<int>(target_angles.size()) == n_targets,
          "target_angles must have J entries");
  require(static_cast<int>(eaves_rate_cap.size()) == n_targets,
          "eaves_rate_cap must have J entries");
  require(static_cast<int>(sensing_floor.size()) == n_targets,
          "sensing_floor must have J entries");
  require(static_cast<int>(path_gain.size()) == n_targets,
          "path_gain must have J entries");

  double sum_p = 0.0;
  for (double p : per_user_power) {
    require(p >= 0.0, "per-user power must be nonnegative");
    sum_p += p;
  }
  require(sum_p <= total_power,
          "sum of per-user powers exceeds the total power budget");
  for (double s : noise_user) require(s > 0.0, "user noise must be positive");
  require(noise_eve > 0.0, "eavesdropper noise must be positive");
  for (double t : target_angles)
    require(std::abs(t) <= kPi / 2.0, "target angle outside [-pi/2, pi/2]");
  require(beamwidth_half >= 0.0, "beamwidth_half must be nonnegative");
  for (double b : eaves_rate_cap)
    require(b >= 0.0, "eaves_rate_cap must be nonnegative");
  for (double e : sensing_floor)
    require(e >= 0.0, "sensing_floor must be nonnegative");
  // (1/K, 1] is empty for K=1, where the Jain index is identically 1; any
  // positive floor up to 1 is accepted there.
  require(fairness_floor <= 1.0 &&
              (n_users == 1 ? fairness_floor > 0.0
                            : fairness_floor > 1.0 / n_users),
          "fairness_floor must lie in (1/K, 1]");
  require(entropy_weight > 0.0, "entropy_weight must be positive");
  require(penalty_weight > 0.0, "penalty_weight must be positive");
  require(tradeoff_steps > 0, "tradeoff_steps must be positive");
  require(inner_iters > 0, "inner_iters must be positive");
  require(trust_rate > 0.0 && trust_rate <= 1.0, "trust_rate in (0, 1]");
  require(step_size > 0.0, "step_size must be positive");
  require(spacing_ratio > 0.0, "spacing_ratio must be positive");
  require(kappa_margin >= 1.0, "kappa_margin must be >= 1");
  require(conv_tol > 0.0, "conv_tol must be positive");
  require(max_outer_iters > 0, "max_outer_iters must be positive");
}

double SystemConfig::an_power_budget() const {
  double sum_p = 0.0;
  for (double p : per_user_power) sum_p += p;
  return total_power - sum_p;
}

SystemConfig SystemConfig::from_json_text(const std::string& text) {
  const json j = json::parse(text);
  SystemConfig c;
  c.n_tx = j.at("n_tx").get<int>();
  c.n_users = j.at("n_users").get<int>();
  c.n_targets = j.at("n_targets").get<int>();
  c.per_user_power = real_list(j, "per_user_power", c.n_users);
  c.total_power = j.at("total_power").get<double>();
  c.noise_user = real_list(j, "noise_user", c.n_users);
  c.noise_eve = j.at("noise_eve").get<double>();
  c.target_angles = real_list(j, "target_angles", c.n_targets);
  for (double& t : c.target_angles) t = deg2rad(t);  // file uses degrees
  c.beamwidth_half = deg2rad(j.at("beamwidth_half").get<double>());
  c.eaves_rate_cap = real_list(j, "eaves_rate_cap", c.n_targets);
  c.sensing_floor = real_list(j, "sensing_floor", c.n_targets);
  for (double g : real_list(j, "path_gain", c.n_targets))
    c.path_gain.emplace_back(g, 0.0);
  c.fairness_floor = j.at("fairness_floor").get<double>();
  c.entropy_weight = j.at("entropy_weight").get<double>();
  c.penalty_weight = j.value("penalty_weight", 10.0);
  c.tradeoff_steps = j.value("tradeoff_steps", 11);
  c.inner_iters = j.value("inner_iters", 50);
  c.trust_rate = j.value("trust_rate", 0.5);
  c.step_size = j.value("step_size", 0.05);
  c.spacing_ratio = j.value("spacing_ratio", 0.5);
  c.kappa_margin = j.value("kappa_margin", 1.0 + 1e-9);
  c.conv_tol = j.value("conv_tol", 1e-6);
  c.max_outer_iters = j.value("max_outer_iters", 500);
  c.validate();
  return c;
}

SystemConfig SystemConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

}  // namespace secisac
