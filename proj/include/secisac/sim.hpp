#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "secisac/config.hpp"
#include "secisac/fairness.hpp"
#include "secisac/solver.hpp"

namespace secisac {

struct TrialRecord {
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  int n_tx = 0;
  int n_users = 0;
  int n_targets = 0;
  double sum_secrecy = 0.0;   // bit/s/Hz
  double sum_rate = 0.0;      // bit/s/Hz
  double fairness_index = 0.0;
  int iterations = 0;
  bool converged = false;
  bool feasible = false;
  double power_slack = 0.0;
  double min_sensing_margin = 0.0;
  int beamwidth_violations = 0;
  bool aborted = false;
  double runtime_ms = 0.0;
};

struct AggregateRow {
  std::string param;
  double value = 0.0;
  int trials = 0;
  double mean_secrecy = 0.0, se_secrecy = 0.0;
  double mean_rate = 0.0, se_rate = 0.0;
  double mean_fairness = 0.0;
  double converged_fraction = 0.0;
  double feasible_fraction = 0.0;
};

/// Sweep over one parameter: "snr=0:5:30" (start:step:stop, dB) or
/// "ntx=8,16,18"; an empty spec means a single point at the base config.
struct SweepSpec {
  std::string param = "none";  // "snr" | "ntx" | "none"
  std::vector<double> values = {0.0};

  static SweepSpec parse(const std::string& text);
};

struct MonteCarloResult {
  std::vector<TrialRecord> records;     // (sweep, trial) order
  std::vector<AggregateRow> aggregates; // one per sweep point
};

/// Full per-trial pipeline: sample scenario, solve with uniform weights,
/// optimize the fairness weights over the chi path, re-solve, report.
TrialRecord run_trial(const SystemConfig& config, std::uint64_t seed,
                      double snr_db, bool apply_snr);

/// Monte Carlo sweep in a worker pool; per-trial seeds are substreams of
/// (master_seed, sweep index, trial index) and results are merged in
/// deterministic order.
MonteCarloResult run_monte_carlo(const SystemConfig& config,
                                 const SweepSpec& sweep, int trials,
                                 std::uint64_t master_seed,
                                 int n_threads = 0);

struct BeampatternRow {
  double theta_deg = 0.0;
  double gain = 0.0;
};

std::vector<BeampatternRow> beampattern(const Scenario& sc,
                                        const Solution& sol,
                                        double grid_step_deg);

// CSV emission (UTF-8, header row, '.' decimal separator, RFC-4180).
void write_records_csv(const std::string& path,
                       const std::vector<TrialRecord>& records,
                       bool include_runtime = false);
void write_aggregates_csv(const std::string& path,
                          const std::vector<AggregateRow>& rows);
void write_beampattern_csv(const std::string& path,
                           const std::vector<BeampatternRow>& rows,
                           const Scenario& sc, const Solution& sol);
void write_fairness_csv(const std::string& path,
                        const std::vector<FairnessState>& trace,
                        const VecR& rho);
void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& trace);

/// Minimal static SVG line chart; one polyline per series.
struct ChartSeries {
  std::string label;
  std::vector<double> x, y;
};
void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<ChartSeries>& series);

std::string format_csv_double(double v);

}  // namespace secisac
