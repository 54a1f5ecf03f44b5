#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unistd.h>

#include "json.hpp"

#include "gasmld/bench.hpp"

using namespace gasmld;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("gasmld-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig small_config() {
  ExperimentConfig cfg = ExperimentConfig::reference_preset();
  cfg.trials = 6;
  cfg.master_seed = 3;
  cfg.patience = 200;
  cfg.max_qcqd = 100000;
  return cfg;
}

}  // namespace

TEST_CASE("the preset matches the reference link parameters") {
  const ExperimentConfig cfg = ExperimentConfig::reference_preset();
  CHECK(cfg.gsm.n_tx == 4);
  CHECK(cfg.gsm.n_rx == 4);
  CHECK(cfg.gsm.k_active == 3);
  CHECK(cfg.gsm.q_aps == 4);
  CHECK(cfg.gsm.constellation == Constellation::Qpsk);
  CHECK(cfg.gsm.snr_db == 0.0);
  CHECK(cfg.lambda1 == 15.0);
  CHECK(cfg.trials == 1000);
  CHECK(cfg.backend == Backend::Structured);
  CHECK(cfg.precision_bits == 8);
  CHECK(cfg.stop_at_optimum);
}

TEST_CASE("config files use key = value with comments") {
  TempDir tmp("config");
  const fs::path file = tmp.path / "run.cfg";
  {
    std::ofstream out(file);
    out << "# reference preset, shrunk\n"
        << "n_tx = 4\n"
        << "n_rx = 2\n"
        << "k_active = 3\n"
        << "q_aps = 4\n"
        << "constellation = 16qam   # four bits per symbol\n"
        << "snr_db = 10\n"
        << "lambda1 = 7.5\n"
        << "trials = 12\n"
        << "backend = structured\n"
        << "seed = 99\n"
        << "stop_at_optimum = false\n"
        << "\n";
  }
  const ExperimentConfig cfg = ExperimentConfig::from_file(file.string());
  CHECK(cfg.gsm.n_tx == 4);
  CHECK(cfg.gsm.n_rx == 2);
  CHECK(cfg.gsm.constellation == Constellation::Qam16);
  CHECK(cfg.gsm.snr_db == 10.0);
  CHECK(cfg.lambda1 == 7.5);
  CHECK(cfg.trials == 12);
  CHECK(cfg.master_seed == 99);
  CHECK_FALSE(cfg.stop_at_optimum);

  ExperimentConfig bad;
  CHECK_THROWS_AS(bad.apply_option("unknown_key", "1"), std::invalid_argument);
  CHECK_THROWS_AS(bad.apply_option("trials", "many"), std::invalid_argument);
  CHECK_THROWS_AS(bad.apply_option("backend", "annealer"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/path.cfg"),
                  std::invalid_argument);
}

TEST_CASE("backend and rule names round-trip") {
  CHECK(backend_from_name("structured") == Backend::Structured);
  CHECK(backend_from_name("statevector") == Backend::StateVector);
  CHECK_FALSE(backend_from_name("qpu").has_value());
  CHECK(std::string(backend_name(Backend::Structured)) == "structured");
  CHECK(std::string(backend_name(Backend::StateVector)) == "statevector");
}

TEST_CASE("search-space ratio reproduces the reference points") {
  const auto rows = complexity_ratio(16, {1}, {2});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].q == 16);
  CHECK(rows[0].f == 65536.0);
  CHECK(rows[0].g == 32.0);
  CHECK(rows[0].ratio == 2048.0);

  const auto big = complexity_ratio(16, {8}, {16});
  REQUIRE(big.size() == 1);
  CHECK(big[0].q == 12870);
  CHECK(std::abs(big[0].ratio - 0.0199) / 0.0199 <= 1e-3);
  CHECK(big[0].ratio == doctest::Approx(256.0 / 12870.0).epsilon(1e-12));
}

TEST_CASE("the ratio falls monotonically as more antennas are active") {
  std::vector<int> ks;
  for (int k = 1; k <= 8; ++k) ks.push_back(k);
  const auto rows = complexity_ratio(16, ks, {16});
  REQUIRE(rows.size() == 8);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].ratio < rows[i - 1].ratio);
}

TEST_CASE("ratio parameters are validated") {
  CHECK_THROWS_AS(complexity_ratio(0, {1}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(complexity_ratio(16, {0}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(complexity_ratio(16, {17}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(complexity_ratio(16, {1}, {3}), std::invalid_argument);
  CHECK_THROWS_AS(complexity_ratio(16, {1}, {1}), std::invalid_argument);
}

TEST_CASE("ratio csv carries the fixed header") {
  const std::string csv = ratio_csv(complexity_ratio(16, {1, 2}, {2, 4}));
  CHECK(csv.rfind("n_tx,k,l,q,f,g,ratio\n", 0) == 0);
  std::size_t rows = 0;
  for (char c : csv) rows += (c == '\n') ? 1 : 0;
  CHECK(rows == 5);
}

TEST_CASE("a small experiment finds the optimum and writes its files") {
  TempDir tmp("run");
  ExperimentConfig cfg = small_config();
  cfg.out_dir = tmp.path.string();
  const ExperimentSummary summary = run_experiment(cfg);

  CHECK(summary.trials.size() == 6);
  CHECK(summary.classical_candidates == 256);
  CHECK(summary.optimum_found_count == 6);
  CHECK(summary.mean_initial_objective > summary.mean_classical_optimum);
  for (const TrialResult& t : summary.trials) {
    CHECK(t.optimum_found);
    CHECK(t.stop_reason == StopReason::TargetReached);
    CHECK(t.final_objective ==
          doctest::Approx(t.classical_metric).epsilon(1e-6));
    CHECK(t.qccd_to_optimum >= 1);
    CHECK(t.qccd_total >= t.qccd_to_optimum);
    CHECK(t.m >= 1);
  }

  // Files must exist with the advertised headers.
  const std::string trace = slurp(tmp.path / "trace.csv");
  CHECK(trace.rfind("trial,i,L_i,y_i,measured_value,improved,cumulative_qcqd,"
                    "cumulative_qccd\n",
                    0) == 0);
  const std::string trials = slurp(tmp.path / "trials.csv");
  CHECK(trials.rfind("trial,classical_metric,initial_objective,"
                     "final_objective,optimum_found,qcqd_to_optimum,"
                     "qccd_to_optimum,qcqd_total,qccd_total,iterations,"
                     "stop_reason,m\n",
                     0) == 0);
  std::size_t trial_rows = 0;
  for (char c : trials) trial_rows += (c == '\n') ? 1 : 0;
  CHECK(trial_rows == 7);

  const auto parsed = nlohmann::json::parse(slurp(tmp.path / "summary.json"));
  CHECK(parsed["version"] == kProjectVersion);
  CHECK(parsed["config"]["seed"] == 3);
  CHECK(parsed["classical"]["candidates"] == 256);
  CHECK(parsed["gas"]["trials"] == 6);
  CHECK(parsed["gas"]["optimum_found"] == 6);
  CHECK(parsed["gas"]["mean_objective_vs_qccd"].size() >= 1);
}

TEST_CASE("mean curves fall monotonically toward the classical optimum") {
  const ExperimentSummary summary = run_experiment(small_config());
  REQUIRE(!summary.mean_objective_vs_qccd.empty());
  CHECK(summary.mean_objective_vs_qccd.front() ==
        doctest::Approx(summary.mean_initial_objective).epsilon(1e-12));
  for (std::size_t i = 1; i < summary.mean_objective_vs_qccd.size(); ++i)
    CHECK(summary.mean_objective_vs_qccd[i] <=
          summary.mean_objective_vs_qccd[i - 1] + 1e-12);
  CHECK(summary.mean_objective_vs_qccd.back() ==
        doctest::Approx(summary.mean_classical_optimum).epsilon(1e-6));

  for (std::size_t i = 1; i < summary.mean_objective_vs_qcqd.size(); ++i)
    CHECK(summary.mean_objective_vs_qcqd[i] <=
          summary.mean_objective_vs_qcqd[i - 1] + 1e-12);

  REQUIRE(summary.mean_baseline_vs_queries.size() == 256);
  for (std::size_t i = 1; i < summary.mean_baseline_vs_queries.size(); ++i)
    CHECK(summary.mean_baseline_vs_queries[i] <=
          summary.mean_baseline_vs_queries[i - 1] + 1e-12);
  CHECK(summary.mean_baseline_vs_queries.back() ==
        doctest::Approx(summary.mean_classical_optimum).epsilon(1e-9));

  REQUIRE(!summary.cdf_qccd_to_optimum.empty());
  CHECK(summary.cdf_qccd_to_optimum.back().second ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identical configurations produce byte-identical outputs") {
  TempDir tmp_a("det-a");
  TempDir tmp_b("det-b");
  ExperimentConfig cfg = small_config();
  cfg.out_dir = tmp_a.path.string();
  run_experiment(cfg);
  cfg.out_dir = tmp_b.path.string();
  cfg.threads = 1;  // thread count must not influence the results
  run_experiment(cfg);
  for (const char* name : {"trace.csv", "trials.csv", "summary.json"})
    CHECK(slurp(tmp_a.path / name) == slurp(tmp_b.path / name));
}

TEST_CASE("trial serialization is stable") {
  const ExperimentSummary summary = run_experiment(small_config());
  const std::string a = trials_csv(summary);
  const std::string b = trials_csv(summary);
  CHECK(a == b);
  const std::string ja = summary_json(summary);
  CHECK(ja == summary_json(summary));
  CHECK(ja.back() == '\n');
}

TEST_CASE("the statevector backend solves a reduced link") {
  // Two antennas, one active, one-bit symbols: 4 variables. A noiseless
  // channel and a small penalty weight keep the register narrow enough for
  // the full simulation to stay quick.
  ExperimentConfig cfg;
  cfg.gsm = GsmConfig{2, 1, 1, 2, Constellation::Bpsk,
                      std::numeric_limits<double>::infinity()};
  cfg.backend = Backend::StateVector;
  cfg.trials = 3;
  cfg.master_seed = 11;
  cfg.lambda1 = 4.0;
  cfg.patience = 400;
  cfg.max_qcqd = 100000;
  const ExperimentSummary summary = run_experiment(cfg);
  CHECK(summary.trials.size() == 3);
  CHECK(summary.optimum_found_count == 3);
  CHECK(summary.classical_candidates == 4);
  for (const TrialResult& t : summary.trials)
    CHECK(t.final_objective <= 1e-9);
}

TEST_CASE("the built-in consistency suite passes at the fast level") {
  const auto results = validate(false);
  REQUIRE(results.size() == 5);
  for (const CheckResult& check : results) {
    INFO(check.name, ": ", check.detail);
    CHECK(check.passed);
  }
}
