#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secisac/fairness.hpp"
#include "secisac/feasibility.hpp"
#include "secisac/sim.hpp"
#include "secisac/solver.hpp"

namespace {

using namespace secisac;

namespace fs = std::filesystem;

struct CommonOpts {
  std::string config_path = "configs/table1.json";
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool plot = false;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path, "JSON parameter file")
      ->capture_default_str();
  cmd->add_option("--seed", opts->seed, "master seed")->capture_default_str();
  cmd->add_option("--out", opts->out_dir, "output directory")
      ->capture_default_str();
  cmd->add_flag("--plot", opts->plot, "also emit SVG charts");
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
  fs::create_directories(opts.out_dir);
  return (fs::path(opts.out_dir) / name).string();
}

struct SolvedInstance {
  Scenario scenario;
  SolveResult first;
  HfroResult hfro;
  SolveResult final;
  VecR rho;  // SINRs after the uniform-weight solve
};

// Full per-instance pipeline: uniform-weight solve, fairness path, re-solve.
SolvedInstance solve_instance(const SystemConfig& cfg, std::uint64_t seed,
                              bool record_stages) {
  SolvedInstance inst;
  inst.scenario = sample_scenario(cfg, seed);

  SolveOptions options;
  options.conv_tol = cfg.conv_tol;
  options.max_outer_iters = cfg.max_outer_iters;
  options.record_stages = record_stages;

  const VecR mu_uniform = VecR::Constant(cfg.n_users, 1.0 / cfg.n_users);
  inst.first = alternating_solve(inst.scenario, mu_uniform, options);

  inst.rho.resize(cfg.n_users);
  for (int k = 0; k < cfg.n_users; ++k)
    inst.rho[k] = std::max(
        sinr_legitimate(inst.scenario, inst.first.solution, k), 1e-12);

  inst.hfro = hfro_optimize(inst.rho, cfg);
  inst.final = alternating_solve(inst.scenario, inst.hfro.mu, options);
  return inst;
}

int cmd_solve(const CommonOpts& opts) {
  const SystemConfig cfg = SystemConfig::from_json_file(opts.config_path);
  const SolvedInstance inst = solve_instance(cfg, opts.seed, true);

  write_trace_csv(out_path(opts, "trace.csv"), inst.final.trace);

  if (opts.plot) {
    ChartSeries obj{"weighted objective", {}, {}};
    ChartSeries sec{"sum secrecy", {}, {}};
    for (const TraceRow& r : inst.final.trace) {
      obj.x.push_back(r.iteration);
      obj.y.push_back(r.objective);
      sec.x.push_back(r.iteration);
      sec.y.push_back(r.sum_secrecy);
    }
    write_line_chart_svg(out_path(opts, "trace.svg"), "Convergence",
                         "iteration", "bit/s/Hz", {obj, sec});
  }

  const RateReport rates = rate_report(inst.scenario, inst.final.solution);
  const ConstraintMargins margins =
      evaluate_margins(inst.scenario, inst.final.solution);
  std::cout << "status: "
            << (inst.final.status == ConvergenceStatus::kConverged
                    ? "converged"
                    : "max-iterations")
            << " after " << inst.final.trace.size() << " iterations\n"
            << "sum secrecy rate: " << rates.sum_secrecy << " bit/s/Hz\n"
            << "sum data rate:    " << rates.sum_rate << " bit/s/Hz\n"
            << "fairness index:   "
            << jain_index(inst.hfro.mu, inst.rho) << "\n"
            << "feasible:         " << (is_feasible(margins) ? "yes" : "no")
            << "\n";
  return 0;
}

int cmd_simulate(const CommonOpts& opts, int trials,
                 const std::string& sweep_text, bool include_runtime) {
  const SystemConfig cfg = SystemConfig::from_json_file(opts.config_path);
  const SweepSpec sweep = SweepSpec::parse(sweep_text);
  const MonteCarloResult mc =
      run_monte_carlo(cfg, sweep, trials, opts.seed);

  write_records_csv(out_path(opts, "records.csv"), mc.records,
                    include_runtime);
  write_aggregates_csv(out_path(opts, "aggregates.csv"), mc.aggregates);

  if (opts.plot) {
    ChartSeries sec{"mean secrecy", {}, {}};
    ChartSeries rate{"mean rate", {}, {}};
    for (const AggregateRow& a : mc.aggregates) {
      sec.x.push_back(a.value);
      sec.y.push_back(a.mean_secrecy);
      rate.x.push_back(a.value);
      rate.y.push_back(a.mean_rate);
    }
    write_line_chart_svg(out_path(opts, "aggregates.svg"),
                         "Monte Carlo averages", sweep.param, "bit/s/Hz",
                         {sec, rate});
  }

  for (const AggregateRow& a : mc.aggregates)
    std::cout << a.param << '=' << a.value << ": mean secrecy "
              << a.mean_secrecy << " +- " << a.se_secrecy << " over "
              << a.trials << " trials\n";
  return 0;
}

int cmd_beampattern(const CommonOpts& opts, double grid_step) {
  const SystemConfig cfg = SystemConfig::from_json_file(opts.config_path);
  const SolvedInstance inst = solve_instance(cfg, opts.seed, false);

  const std::vector<BeampatternRow> rows =
      beampattern(inst.scenario, inst.final.solution, grid_step);
  write_beampattern_csv(out_path(opts, "beampattern.csv"), rows,
                        inst.scenario, inst.final.solution);

  if (opts.plot) {
    ChartSeries gain{"beam gain", {}, {}};
    for (const BeampatternRow& r : rows) {
      gain.x.push_back(r.theta_deg);
      gain.y.push_back(r.gain);
    }
    write_line_chart_svg(out_path(opts, "beampattern.svg"), "Beampattern",
                         "theta (deg)", "gain", {gain});
  }

  for (int j = 0; j < cfg.n_targets; ++j)
    std::cout << "target " << j << " gain "
              << beam_gain(inst.final.solution, inst.scenario,
                           cfg.target_angles[j])
              << " (floor " << cfg.sensing_floor[j] << ")\n";
  return 0;
}

int cmd_fairness(const CommonOpts& opts, const std::vector<double>& rho_in) {
  const SystemConfig cfg = SystemConfig::from_json_file(opts.config_path);

  VecR rho;
  if (!rho_in.empty()) {
    rho = Eigen::Map<const VecR>(rho_in.data(),
                                 static_cast<int>(rho_in.size()));
  } else {
    const Scenario sc = sample_scenario(cfg, opts.seed);
    SolveOptions options;
    options.conv_tol = cfg.conv_tol;
    options.max_outer_iters = cfg.max_outer_iters;
    const VecR mu_uniform = VecR::Constant(cfg.n_users, 1.0 / cfg.n_users);
    const SolveResult sr = alternating_solve(sc, mu_uniform, options);
    rho.resize(cfg.n_users);
    for (int k = 0; k < cfg.n_users; ++k)
      rho[k] = std::max(sinr_legitimate(sc, sr.solution, k), 1e-12);
  }

  const HfroResult hfro = hfro_optimize(rho, cfg);
  write_fairness_csv(out_path(opts, "fairness.csv"), hfro.trace, rho);

  if (opts.plot) {
    ChartSeries fair{"fairness", {}, {}};
    ChartSeries ent{"entropy", {}, {}};
    for (const FairnessState& s : hfro.trace) {
      fair.x.push_back(s.chi);
      fair.y.push_back(s.fairness);
      ent.x.push_back(s.chi);
      ent.y.push_back(s.entropy_val);
    }
    write_line_chart_svg(out_path(opts, "fairness.svg"), "Tradeoff path",
                         "chi", "value", {fair, ent});
  }

  std::cout << "final weights:";
  for (int k = 0; k < hfro.mu.size(); ++k) std::cout << ' ' << hfro.mu[k];
  std::cout << "\nfairness index: " << jain_index(hfro.mu, rho) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fairness-aware secure ISAC beamforming toolkit"};
  app.require_subcommand(1);

  CommonOpts solve_opts, sim_opts, beam_opts, fair_opts;
  int trials = 100;
  std::string sweep_text;
  bool include_runtime = false;
  double grid_step = 0.5;
  std::vector<double> rho_in;

  CLI::App* solve = app.add_subcommand("solve", "solve one scenario");
  add_common(solve, &solve_opts);

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo sweep");
  add_common(sim, &sim_opts);
  sim->add_option("--trials", trials, "trials per sweep point")
      ->capture_default_str();
  sim->add_option("--sweep", sweep_text,
                  "sweep spec, e.g. snr=0:5:30 or ntx=8,16,18");
  sim->add_flag("--include-runtime", include_runtime,
                "append a runtime_ms column (breaks byte determinism)");

  CLI::App* beam = app.add_subcommand("beampattern", "export beam gains");
  add_common(beam, &beam_opts);
  beam->add_option("--grid", grid_step, "grid step in degrees")
      ->capture_default_str();

  CLI::App* fair = app.add_subcommand("fairness", "weight tradeoff path");
  add_common(fair, &fair_opts);
  fair->add_option("--rho", rho_in,
                   "explicit SINR values (skips the solver)")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(solve_opts);
    if (sim->parsed())
      return cmd_simulate(sim_opts, trials, sweep_text, include_runtime);
    if (beam->parsed()) return cmd_beampattern(beam_opts, grid_step);
    if (fair->parsed()) return cmd_fairness(fair_opts, rho_in);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
