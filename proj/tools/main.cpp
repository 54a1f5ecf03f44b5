#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gasmld/bench.hpp"
#include "gasmld/text.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;

// "1-8" or "2,4,16" style integer lists.
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string field = text.substr(pos, comma - pos);
    const std::size_t dash = field.find('-');
    if (dash == std::string::npos) {
      out.push_back(std::stoi(field));
    } else {
      const int lo = std::stoi(field.substr(0, dash));
      const int hi = std::stoi(field.substr(dash + 1));
      if (hi < lo) throw std::invalid_argument("empty range " + field);
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

int run_command(const std::string& config_path, bool preset,
                std::int64_t seed, int trials, const std::string& backend,
                int threads, const std::string& out_dir) {
  gasmld::ExperimentConfig cfg;
  if (!config_path.empty())
    cfg = gasmld::ExperimentConfig::from_file(config_path);
  else if (preset)
    cfg = gasmld::ExperimentConfig::reference_preset();
  else {
    std::cerr << "run: pass --config FILE or --preset\n";
    return kExitConfigError;
  }
  if (seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed);
  if (trials > 0) cfg.trials = trials;
  if (!backend.empty()) {
    const auto b = gasmld::backend_from_name(backend);
    if (!b) {
      std::cerr << "unknown backend: " << backend << "\n";
      return kExitConfigError;
    }
    cfg.backend = *b;
  }
  if (threads > 0) cfg.threads = threads;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (cfg.out_dir.empty()) cfg.out_dir = ".";

  const gasmld::ExperimentSummary summary = gasmld::run_experiment(cfg);
  std::cout << "trials: " << cfg.trials << "\n"
            << "optimum found: " << summary.optimum_found_count << "/"
            << cfg.trials << "\n"
            << "mean classical optimum: "
            << gasmld::format_double(summary.mean_classical_optimum) << "\n"
            << "mean initial objective: "
            << gasmld::format_double(summary.mean_initial_objective) << "\n"
            << "outputs: " << cfg.out_dir << "/{trace.csv,trials.csv,summary.json}\n";
  return kExitOk;
}

int ratio_command(int n_tx, const std::string& k_list,
                  const std::string& l_list, const std::string& out_dir) {
  const auto rows = gasmld::complexity_ratio(n_tx, parse_int_list(k_list),
                                             parse_int_list(l_list));
  const std::string csv = gasmld::ratio_csv(rows);
  std::cout << csv;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / "ratio.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << path.string() << "\n";
      return kExitConfigError;
    }
    out << csv;
  }
  return kExitOk;
}

int validate_command(const std::string& level) {
  if (level != "fast" && level != "full") {
    std::cerr << "unknown level: " << level << "\n";
    return kExitConfigError;
  }
  const auto checks = gasmld::validate(level == "full");
  bool all_passed = true;
  for (const gasmld::CheckResult& check : checks) {
    all_passed &= check.passed;
    std::cout << (check.passed ? "PASS" : "FAIL") << "  " << check.name
              << " (" << check.detail << ")\n";
  }
  std::cout << (all_passed ? "all checks passed\n" : "checks FAILED\n");
  return all_passed ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive amplitude-amplification search for GSM detection"};
  app.require_subcommand(1);

  std::string config_path;
  bool preset = false;
  std::int64_t seed = -1;
  int trials = 0;
  std::string backend;
  int threads = 0;
  std::string out_dir;
  CLI::App* run = app.add_subcommand("run", "run a detection experiment");
  run->add_option("--config", config_path, "key = value config file");
  run->add_flag_callback(
      "--preset", [&preset] { preset = true; },
      "use the built-in reference preset");
  run->add_option("--seed", seed, "master seed override");
  run->add_option("--trials", trials, "trial count override");
  run->add_option("--backend", backend, "structured or statevector");
  run->add_option("--threads", threads, "worker thread count");
  run->add_option("--out", out_dir, "output directory (default .)");

  int ratio_ntx = 16;
  std::string ratio_k = "1-8";
  std::string ratio_l = "2,4,16";
  std::string ratio_out;
  CLI::App* ratio =
      app.add_subcommand("ratio", "search-space complexity ratio table");
  ratio->add_option("--ntx", ratio_ntx, "transmit antenna count");
  ratio->add_option("--k", ratio_k, "active antenna counts, e.g. 1-8");
  ratio->add_option("--l", ratio_l, "constellation sizes, e.g. 2,4,16");
  ratio->add_option("--out", ratio_out, "directory for ratio.csv");

  std::string level = "fast";
  CLI::App* validate =
      app.add_subcommand("validate", "run the consistency suite");
  validate->add_option("--level", level, "fast or full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (run->parsed())
      return run_command(config_path, preset, seed, trials, backend, threads,
                         out_dir);
    if (ratio->parsed())
      return ratio_command(ratio_ntx, ratio_k, ratio_l, ratio_out);
    return validate_command(level);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
