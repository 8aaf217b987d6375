#include "secisac/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "secisac/feasibility.hpp"
#include "secisac/metrics.hpp"
#include "secisac/rng.hpp"

namespace secisac {

namespace {

constexpr const char* kEol = "\r\n";

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

VecR clamped_sinrs(const Scenario& sc, const Solution& sol) {
  VecR rho(sc.config.n_users);
  for (int k = 0; k < sc.config.n_users; ++k)
    rho[k] = std::max(sinr_legitimate(sc, sol, k), 1e-12);
  return rho;
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    double start = 0, step = 0, stop = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' ||
        step <= 0.0)
      throw std::invalid_argument("sweep: expected start:step:stop, got '" +
                                  text + "'");
    for (double v = start; v <= stop + 1e-9 * std::max(1.0, std::abs(stop));
         v += step)
      values.push_back(v);
  } else {
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok.empty()) continue;
      values.push_back(std::stod(tok));
    }
  }
  if (values.empty())
    throw std::invalid_argument("sweep: no values in '" + text + "'");
  return values;
}

SystemConfig config_at(const SystemConfig& base, const SweepSpec& sweep,
                       double value) {
  SystemConfig cfg = base;
  if (sweep.param == "snr") {
    const double noise = std::pow(10.0, -value / 10.0);
    std::fill(cfg.noise_user.begin(), cfg.noise_user.end(), noise);
    cfg.noise_eve = noise;
  } else if (sweep.param == "ntx") {
    cfg.n_tx = static_cast<int>(std::lround(value));
  }
  cfg.validate();
  return cfg;
}

double snr_db_of(const SystemConfig& cfg) {
  return -10.0 * std::log10(cfg.noise_user.empty() ? 1.0 : cfg.noise_user[0]);
}

}  // namespace

std::string format_csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

SweepSpec SweepSpec::parse(const std::string& text) {
  SweepSpec spec;
  if (text.empty() || text == "none") return spec;
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("sweep: expected param=values, got '" + text +
                                "'");
  spec.param = text.substr(0, eq);
  if (spec.param != "snr" && spec.param != "ntx")
    throw std::invalid_argument("sweep: unknown parameter '" + spec.param +
                                "'");
  spec.values = parse_value_list(text.substr(eq + 1));
  return spec;
}

TrialRecord run_trial(const SystemConfig& config, std::uint64_t seed,
                      double snr_db, bool apply_snr) {
  SystemConfig cfg = config;
  if (apply_snr) {
    const double noise = std::pow(10.0, -snr_db / 10.0);
    std::fill(cfg.noise_user.begin(), cfg.noise_user.end(), noise);
    cfg.noise_eve = noise;
  }

  TrialRecord rec;
  rec.seed = seed;
  rec.snr_db = apply_snr ? snr_db : snr_db_of(cfg);
  rec.n_tx = cfg.n_tx;
  rec.n_users = cfg.n_users;
  rec.n_targets = cfg.n_targets;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    // Retry with a perturbed seed in the (measure-zero) degenerate case.
    Scenario sc;
    bool sampled = false;
    for (int attempt = 0; attempt < 5 && !sampled; ++attempt) {
      const std::uint64_t s =
          attempt == 0 ? seed : Rng::substream(seed, 1000 + attempt).next_u64();
      sc = sample_scenario(cfg, s);
      try {
        (void)null_projector(sc.channels);
        sampled = true;
      } catch (const RankDeficientError&) {
        if (attempt == 4) throw;
      }
    }

    SolveOptions options;
    options.conv_tol = cfg.conv_tol;
    options.max_outer_iters = cfg.max_outer_iters;

    const VecR mu_uniform = VecR::Constant(cfg.n_users, 1.0 / cfg.n_users);
    const SolveResult first = alternating_solve(sc, mu_uniform, options);
    const VecR rho = clamped_sinrs(sc, first.solution);

    const HfroResult hfro = hfro_optimize(rho, cfg);
    const SolveResult final = alternating_solve(sc, hfro.mu, options);

    const RateReport rates = rate_report(sc, final.solution);
    rec.sum_secrecy = rates.sum_secrecy;
    rec.sum_rate = rates.sum_rate;
    rec.fairness_index =
        jain_index(hfro.mu, clamped_sinrs(sc, final.solution));
    rec.iterations = static_cast<int>(final.trace.size());
    rec.converged = final.status == ConvergenceStatus::kConverged;

    const ConstraintMargins margins = evaluate_margins(sc, final.solution);
    rec.feasible = is_feasible(margins) && final.an_report.sensing_feasible();
    rec.power_slack = margins.total_power_slack;
    rec.min_sensing_margin = margins.sensing_margin.size() > 0
                                 ? margins.sensing_margin.minCoeff()
                                 : 0.0;
    rec.beamwidth_violations = final.an_report.beamwidth_violations;
  } catch (const std::exception&) {
    rec.aborted = true;
    rec.converged = false;
    rec.feasible = false;
  }
  rec.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return rec;
}

MonteCarloResult run_monte_carlo(const SystemConfig& config,
                                 const SweepSpec& sweep, int trials,
                                 std::uint64_t master_seed, int n_threads) {
  if (trials <= 0) throw std::invalid_argument("run_monte_carlo: trials <= 0");

  struct Task {
    int sweep_idx;
    int trial_idx;
  };
  std::vector<Task> tasks;
  std::vector<SystemConfig> configs;
  for (int s = 0; s < static_cast<int>(sweep.values.size()); ++s) {
    configs.push_back(config_at(config, sweep, sweep.values[s]));
    for (int t = 0; t < trials; ++t) tasks.push_back({s, t});
  }

  MonteCarloResult result;
  result.records.resize(tasks.size());

  int workers = n_threads > 0
                    ? n_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(tasks.size()));

  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) break;
      const Task& task = tasks[i];
      const std::uint64_t stream =
          (static_cast<std::uint64_t>(task.sweep_idx) << 32) ^
          static_cast<std::uint64_t>(task.trial_idx);
      const std::uint64_t seed = Rng::substream(master_seed, stream).next_u64();
      result.records[i] =
          run_trial(configs[static_cast<size_t>(task.sweep_idx)], seed,
                    sweep.values[static_cast<size_t>(task.sweep_idx)],
                    sweep.param == "snr");
    }
  };

  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (int s = 0; s < static_cast<int>(sweep.values.size()); ++s) {
    AggregateRow row;
    row.param = sweep.param;
    row.value = sweep.values[static_cast<size_t>(s)];
    double sum_s = 0, sum_s2 = 0, sum_r = 0, sum_r2 = 0, sum_f = 0;
    int n = 0, n_conv = 0, n_feas = 0;
    for (int t = 0; t < trials; ++t) {
      const TrialRecord& rec =
          result.records[static_cast<size_t>(s * trials + t)];
      if (rec.aborted) continue;
      ++n;
      sum_s += rec.sum_secrecy;
      sum_s2 += rec.sum_secrecy * rec.sum_secrecy;
      sum_r += rec.sum_rate;
      sum_r2 += rec.sum_rate * rec.sum_rate;
      sum_f += rec.fairness_index;
      n_conv += rec.converged ? 1 : 0;
      n_feas += rec.feasible ? 1 : 0;
    }
    row.trials = n;
    if (n > 0) {
      row.mean_secrecy = sum_s / n;
      row.mean_rate = sum_r / n;
      row.mean_fairness = sum_f / n;
      row.converged_fraction = static_cast<double>(n_conv) / n;
      row.feasible_fraction = static_cast<double>(n_feas) / n;
      if (n > 1) {
        const double var_s =
            std::max(0.0, (sum_s2 - sum_s * sum_s / n) / (n - 1));
        const double var_r =
            std::max(0.0, (sum_r2 - sum_r * sum_r / n) / (n - 1));
        row.se_secrecy = std::sqrt(var_s / n);
        row.se_rate = std::sqrt(var_r / n);
      }
    }
    result.aggregates.push_back(std::move(row));
  }
  return result;
}

std::vector<BeampatternRow> beampattern(const Scenario& sc,
                                        const Solution& sol,
                                        double grid_step_deg) {
  if (grid_step_deg <= 0.0)
    throw std::invalid_argument("beampattern: non-positive grid step");
  std::vector<BeampatternRow> rows;
  for (double deg = -90.0; deg <= 90.0 + 1e-9; deg += grid_step_deg) {
    BeampatternRow r;
    r.theta_deg = std::min(deg, 90.0);
    const double theta =
        std::clamp(deg2rad(r.theta_deg), -kPi / 2.0, kPi / 2.0);
    r.gain = beam_gain(sol, sc, theta);
    rows.push_back(r);
  }
  return rows;
}

void write_records_csv(const std::string& path,
                       const std::vector<TrialRecord>& records,
                       bool include_runtime) {
  std::ofstream out = open_csv(path);
  out << "seed,snr_db,n_tx,n_users,n_targets,sum_secrecy,sum_rate,"
         "fairness_index,iterations,converged,feasible,power_slack,"
         "min_sensing_margin,beamwidth_violations,aborted";
  if (include_runtime) out << ",runtime_ms";
  out << kEol;
  for (const TrialRecord& r : records) {
    out << r.seed << ',' << format_csv_double(r.snr_db) << ',' << r.n_tx << ','
        << r.n_users << ',' << r.n_targets << ','
        << format_csv_double(r.sum_secrecy) << ','
        << format_csv_double(r.sum_rate) << ','
        << format_csv_double(r.fairness_index) << ',' << r.iterations << ','
        << (r.converged ? 1 : 0) << ',' << (r.feasible ? 1 : 0) << ','
        << format_csv_double(r.power_slack) << ','
        << format_csv_double(r.min_sensing_margin) << ','
        << r.beamwidth_violations << ',' << (r.aborted ? 1 : 0);
    if (include_runtime) out << ',' << format_csv_double(r.runtime_ms);
    out << kEol;
  }
}

void write_aggregates_csv(const std::string& path,
                          const std::vector<AggregateRow>& rows) {
  std::ofstream out = open_csv(path);
  out << "param,value,trials,mean_secrecy,se_secrecy,mean_rate,se_rate,"
         "mean_fairness,converged_fraction,feasible_fraction"
      << kEol;
  for (const AggregateRow& r : rows) {
    out << r.param << ',' << format_csv_double(r.value) << ',' << r.trials
        << ',' << format_csv_double(r.mean_secrecy) << ','
        << format_csv_double(r.se_secrecy) << ','
        << format_csv_double(r.mean_rate) << ','
        << format_csv_double(r.se_rate) << ','
        << format_csv_double(r.mean_fairness) << ','
        << format_csv_double(r.converged_fraction) << ','
        << format_csv_double(r.feasible_fraction) << kEol;
  }
}

void write_beampattern_csv(const std::string& path,
                           const std::vector<BeampatternRow>& rows,
                           const Scenario& sc, const Solution& sol) {
  std::ofstream out = open_csv(path);
  out << "theta_deg,gain,beams_gain,an_gain" << kEol;
  for (const BeampatternRow& r : rows) {
    const VecC a = steering_vector(
        std::clamp(deg2rad(r.theta_deg), -kPi / 2.0, kPi / 2.0),
        sc.config.n_tx, sc.config.spacing_ratio);
    const double an = std::norm(a.dot(sol.an_effective));
    out << format_csv_double(r.theta_deg) << ',' << format_csv_double(r.gain)
        << ',' << format_csv_double(r.gain - an) << ','
        << format_csv_double(an) << kEol;
  }
}

void write_fairness_csv(const std::string& path,
                        const std::vector<FairnessState>& trace,
                        const VecR& rho) {
  std::ofstream out = open_csv(path);
  out << "t,chi,objective,fairness,sum_rate_term,entropy";
  for (int k = 0; k < rho.size(); ++k) out << ",mu_" << (k + 1);
  out << kEol;
  int t = 0;
  for (const FairnessState& s : trace) {
    double rate_term = 0.0;
    for (int k = 0; k < rho.size(); ++k)
      rate_term += s.mu[k] * std::log2(1.0 + rho[k]);
    out << t++ << ',' << format_csv_double(s.chi) << ','
        << format_csv_double(s.objective) << ','
        << format_csv_double(s.fairness) << ','
        << format_csv_double(s.g_norm * rate_term) << ','
        << format_csv_double(s.entropy_val);
    for (int k = 0; k < s.mu.size(); ++k)
      out << ',' << format_csv_double(s.mu[k]);
    out << kEol;
  }
}

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& trace) {
  std::ofstream out = open_csv(path);
  out << "iteration,objective,sum_secrecy,f,f_r,min_power_slack,"
         "min_sensing_margin,wall_ms,f_stage1,f_stage2,f_stage3,f_stage4,"
         "fr_stage1,fr_stage2,fr_stage3,fr_stage4"
      << kEol;
  for (const TraceRow& r : trace) {
    out << r.iteration << ',' << format_csv_double(r.objective) << ','
        << format_csv_double(r.sum_secrecy) << ',' << format_csv_double(r.f)
        << ',' << format_csv_double(r.f_r) << ','
        << format_csv_double(r.min_power_slack) << ','
        << format_csv_double(r.min_sensing_margin) << ','
        << format_csv_double(r.wall_ms);
    for (double v : r.f_stages) out << ',' << format_csv_double(v);
    for (double v : r.fr_stages) out << ',' << format_csv_double(v);
    out << kEol;
  }
}

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<ChartSeries>& series) {
  constexpr int kW = 720, kH = 480;
  constexpr int kL = 70, kR = 30, kT = 50, kB = 55;
  constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                      "#9467bd", "#ff7f0e", "#8c564b"};

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool any = false;
  for (const ChartSeries& s : series)
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!any) {
        x_min = x_max = s.x[i];
        y_min = y_max = s.y[i];
        any = true;
      } else {
        x_min = std::min(x_min, s.x[i]);
        x_max = std::max(x_max, s.x[i]);
        y_min = std::min(y_min, s.y[i]);
        y_max = std::max(y_max, s.y[i]);
      }
    }
  if (x_max - x_min < 1e-12) x_max = x_min + 1.0;
  if (y_max - y_min < 1e-12) y_max = y_min + 1.0;

  auto px = [&](double x) {
    return kL + (x - x_min) / (x_max - x_min) * (kW - kL - kR);
  };
  auto py = [&](double y) {
    return kH - kB - (y - y_min) / (y_max - y_min) * (kH - kT - kB);
  };

  std::ofstream out = open_csv(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR
      << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL
      << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 4.0;
    const double yv = y_min + (y_max - y_min) * i / 4.0;
    out << "<text x=\"" << px(xv) << "\" y=\"" << kH - kB + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << format_csv_double(xv) << "</text>\n";
    out << "<text x=\"" << kL - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << format_csv_double(yv) << "</text>\n";
  }
  out << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << (kT + kH - kB) / 2 << ")\">" << y_label << "</text>\n";

  int idx = 0;
  for (const ChartSeries& s : series) {
    const char* color = kPalette[idx % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << kW - kR - 8 << "\" y=\"" << kT + 16 + 16 * idx
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\""
        << color << "\">" << s.label << "</text>\n";
    ++idx;
  }
  out << "</svg>\n";
}

}  // namespace secisac
