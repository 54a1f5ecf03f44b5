#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gasmld/encoder.hpp"
#include "gasmld/gas.hpp"
#include "gasmld/gsm.hpp"

namespace gasmld {

inline constexpr const char* kProjectVersion = "1.0.0";

enum class Backend { Structured, StateVector };

std::optional<Backend> backend_from_name(const std::string& name);
const char* backend_name(Backend backend);

struct ExperimentConfig {
  GsmConfig gsm;
  ApRule ap_rule = ApRule::Cyclic;
  std::string ap_table_path;
  double lambda1 = 15.0;
  double lambda2 = -1.0;  // negative selects the encoder default
  int precision_bits = 8;
  int margin_bits = 0;
  double lambda_growth = 8.0 / 7.0;
  int m_override = 0;          // 0: derive from the objective range
  std::int64_t patience = 0;   // 0: driver default
  std::int64_t max_qcqd = 0;   // 0: driver default
  // Stop each trial once the threshold reaches the classical optimum; the
  // query-to-optimum statistics are exact under this policy.
  bool stop_at_optimum = true;
  int trials = 1000;
  Backend backend = Backend::Structured;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0: hardware concurrency
  // Directory for trace.csv, trials.csv, summary.json; empty disables file
  // output.
  std::string out_dir;

  // N_t=4, N_r=4, K=3, Q=4, QPSK at 0 dB with lambda1=15, 1000 trials.
  static ExperimentConfig reference_preset();
  // key = value lines; '#' starts a comment. Unknown keys are an error.
  static ExperimentConfig from_file(const std::string& path);
  void apply_option(const std::string& key, const std::string& value);
};

struct TrialResult {
  int trial = 0;
  double classical_metric = 0.0;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  bool optimum_found = false;
  std::int64_t qcqd_to_optimum = -1;
  std::int64_t qccd_to_optimum = -1;
  std::int64_t qcqd_total = 0;
  std::int64_t qccd_total = 0;
  std::int64_t iterations = 0;
  StopReason stop_reason = StopReason::Patience;
  int m = 0;
};

// CDF point: (value, fraction of all trials at or below it).
using CdfPoint = std::pair<std::int64_t, double>;

struct ExperimentSummary {
  ExperimentConfig cfg;
  std::vector<TrialResult> trials;
  int optimum_found_count = 0;
  std::int64_t classical_candidates = 0;
  double mean_classical_optimum = 0.0;
  double mean_initial_objective = 0.0;
  // Mean best-so-far exact objective after q measurements (index q-1).
  std::vector<double> mean_objective_vs_qccd;
  // Mean best-so-far exact objective after r total rotations (index r).
  std::vector<double> mean_objective_vs_qcqd;
  // Classical random-order exhaustive scan, mean best-so-far after q
  // evaluations (index q-1).
  std::vector<double> mean_baseline_vs_queries;
  std::vector<CdfPoint> cdf_qcqd_to_optimum;
  std::vector<CdfPoint> cdf_qccd_to_optimum;
};

// Monte Carlo over independent channel realizations: per trial, synthesize,
// compile, search, and compare against the exhaustive detector. Writes
// trace.csv, trials.csv, and summary.json into cfg.out_dir when set.
// Deterministic for a fixed config regardless of thread count.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

// Serialized forms of the tabular outputs (also what run_experiment writes;
// trace.csv is produced only by run_experiment, which alone holds the rows).
std::string trials_csv(const ExperimentSummary& summary);
std::string summary_json(const ExperimentSummary& summary);

struct RatioRow {
  int n_tx = 0;
  int k = 0;
  int l = 0;
  std::int64_t q = 0;  // C(n_tx, k)
  double f = 0.0;      // sqrt of the binary search-space size
  double g = 0.0;      // classical candidate count L^K * Q
  double ratio = 0.0;  // f / g
};

// Search-space ratio of the binary formulation's Grover cost to the
// exhaustive candidate count, with Q = C(n_tx, k) exactly.
std::vector<RatioRow> complexity_ratio(int n_tx, const std::vector<int>& ks,
                                       const std::vector<int>& ls);
std::string ratio_csv(const std::vector<RatioRow>& rows);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Self-contained consistency suite: mapping goldens, pattern-table golden,
// Grover law, cross-simulator equivalence, and compiler-vs-exhaustive
// detector agreement. full widens instance counts.
std::vector<CheckResult> validate(bool full);

}  // namespace gasmld
