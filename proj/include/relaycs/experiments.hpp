#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "relaycs/impairments.hpp"
#include "relaycs/types.hpp"

namespace relaycs {

enum class Scenario {
  fig1_diagnosis,
  fig2_nmse_vs_measurements,
  fig3_nmse_vs_snr,
  custom
};

std::string scenario_name(Scenario scenario);
Scenario parse_scenario(const std::string& name);

std::string blockage_kind_name(BlockageKind kind);
BlockageKind parse_blockage_kind(const std::string& name);

/// Solver knobs applied across an experiment. Tolerances here are looser
/// than the library defaults: every reported estimate is re-fit by least
/// squares on the detected support, so the iterative solve only has to pin
/// the support down, not polish coefficients.
struct SolverSettings {
  int max_iterations = 1000;
  double tolerance = 1e-6;
  double lambda_scale = 1.0;
  double lambda_max_fraction = 1e-3;
  double diagnosis_support_fraction = 0.1;   // rho for fault detection
  double estimator_support_fraction = 1e-3;  // rho for channel recovery
  double estimator_refit_gate = 3.0;         // noise deviations; 0 = always
};

struct ExperimentConfig {
  Scenario scenario = Scenario::custom;
  int n_bs = 64;
  int n_ms = 32;
  int g_bs = 64;
  int g_ms = 32;
  int num_paths = 3;
  std::vector<int> m_bs_sweep;
  int m_ms = 1;
  std::vector<int> fault_counts;
  std::vector<double> snr_db_sweep;  // MS-side SNR
  double relay_snr_db = 30.0;
  std::vector<BlockageKind> blockage_kinds;
  int trials = 500;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = all available
  SolverSettings solver;

  /// Throws invalid_argument naming the offending field.
  void validate() const;
};

ExperimentConfig fig1_defaults();
ExperimentConfig fig2_defaults();
ExperimentConfig fig3_defaults();
ExperimentConfig custom_defaults();
ExperimentConfig defaults_for(Scenario scenario);

/// One aggregated sweep-point curve sample. Fields that do not apply to the
/// scenario (or series) stay NaN / zero and are omitted from its CSV layout.
struct SummaryRow {
  int m_bs = 0;
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  std::string series;  // blockage kind (fig1) or estimation regime
  int fault_count = 0;
  int trials = 0;
  double success_rate = std::numeric_limits<double>::quiet_NaN();
  double success_stderr = std::numeric_limits<double>::quiet_NaN();
  double mean_nmse = std::numeric_limits<double>::quiet_NaN();
  double nmse_stderr = std::numeric_limits<double>::quiet_NaN();
  double diag_success_rate = std::numeric_limits<double>::quiet_NaN();
};

struct Table {
  Scenario scenario = Scenario::custom;
  std::vector<SummaryRow> rows;
};

/// Raw per-trial outcome; one record per (sweep point, fault count, trial).
/// Equal configs and seeds reproduce these exactly, independent of the
/// thread count.
struct TrialRecord {
  Scenario scenario = Scenario::custom;
  int m_bs = 0;
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  BlockageKind kind = BlockageKind::complete;
  int fault_count = 0;
  int trial = 0;
  std::uint64_t seed = 0;  // per-trial channel/mask stream seed

  bool diag_success = false;
  int diag_missed = 0;
  int diag_false_alarm = 0;
  int diag_iterations = 0;

  double nmse_fault_free = std::numeric_limits<double>::quiet_NaN();
  double nmse_fault_unaware = std::numeric_limits<double>::quiet_NaN();
  double nmse_relay_aided = std::numeric_limits<double>::quiet_NaN();
  double nmse_baseline = std::numeric_limits<double>::quiet_NaN();
  int iter_fault_free = 0;
  int iter_fault_unaware = 0;
  int iter_relay_aided = 0;
  int iter_baseline = 0;
};

/// Field-wise equality; NaNs in the same slot compare equal.
bool operator==(const TrialRecord& lhs, const TrialRecord& rhs);
bool operator!=(const TrialRecord& lhs, const TrialRecord& rhs);

struct ExperimentResult {
  ExperimentConfig config;
  Table table;
  std::vector<TrialRecord> records;
};

/// Fault-detection success-rate sweep over (M_BS, blockage kind, S).
ExperimentResult run_fig1(const ExperimentConfig& config);
/// NMSE-vs-measurements sweep; one SNR point, all estimation regimes.
ExperimentResult run_fig2(const ExperimentConfig& config);
/// NMSE-vs-SNR sweep at a single M_BS, all estimation regimes.
ExperimentResult run_fig3(const ExperimentConfig& config);
/// Full (M_BS x SNR) grid, all estimation regimes.
ExperimentResult run_custom(const ExperimentConfig& config);

/// Dispatch on config.scenario; trials run on OpenMP workers per
/// config.threads.
ExperimentResult run(const ExperimentConfig& config);
/// Reference engine: identical math and seeding on a plain serial loop.
/// run() and run_serial() must produce equal records.
ExperimentResult run_serial(const ExperimentConfig& config);

}  // namespace relaycs
