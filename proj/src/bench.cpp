#include "gasmld/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "gasmld/statevector.hpp"
#include "gasmld/structured.hpp"
#include "gasmld/text.hpp"

namespace gasmld {

namespace {

using Json = nlohmann::ordered_json;

std::int64_t binomial64(int n, int k) {
  if (k < 0 || k > n) return 0;
  __int128 out = 1;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  if (out > std::numeric_limits<std::int64_t>::max())
    throw std::overflow_error("binomial overflow");
  return static_cast<std::int64_t>(out);
}

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin])))
    ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1])))
    --end;
  return s.substr(begin, end - begin);
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer for " + key + ": " + value);
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number for " + key + ": " + value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("bad flag for " + key + ": " + value);
}

// Per-trial stream seeds; the tags keep channel, search, and baseline
// draws independent of each other.
std::uint64_t channel_seed(std::uint64_t master, int trial) {
  return master + static_cast<std::uint64_t>(trial);
}
std::uint64_t search_seed(std::uint64_t master, int trial) {
  return splitmix64(channel_seed(master, trial));
}
std::uint64_t baseline_seed(std::uint64_t master, int trial) {
  return splitmix64(channel_seed(master, trial) ^ 0x6261736523736372ull);
}

struct TrialData {
  TrialResult result;
  GasResult gas;
  double scale = 1.0;
  // Best-so-far exact objective after each measurement (index q-1).
  std::vector<double> qccd_series;
  // (cumulative rotations, best-so-far exact objective) change points.
  std::vector<std::pair<std::int64_t, double>> qcqd_steps;
  // Classical random-order scan, best-so-far after each evaluation.
  std::vector<double> baseline;
};

TrialData run_trial(const ExperimentConfig& cfg, const ApCodebook& codebook,
                    int trial) {
  TrialData data;
  const ChannelRealization chan =
      synthesize(cfg.gsm, codebook, channel_seed(cfg.master_seed, trial))
          .second;
  const MldProblem problem =
      build_objective(chan, cfg.gsm, codebook, cfg.lambda1, cfg.lambda2,
                      cfg.precision_bits);
  const MldResult classical = classical_mld(chan, cfg.gsm, codebook);
  const std::uint64_t target_x = encode_candidate(
      classical.ap_index, classical.sym_bits, problem.layout, codebook);
  const std::int64_t target_int = problem.quantized.poly.eval(target_x);

  const int m = cfg.m_override > 0
                    ? cfg.m_override
                    : choose_m(problem.quantized, cfg.margin_bits);

  GasParams params;
  params.lambda_growth = cfg.lambda_growth;
  params.m = m;
  params.margin_bits = cfg.margin_bits;
  params.termination.patience = cfg.patience;
  params.termination.max_qcqd = cfg.max_qcqd;
  if (cfg.stop_at_optimum) params.termination.target = target_int;
  params.seed = search_seed(cfg.master_seed, trial);

  if (cfg.backend == Backend::Structured) {
    StructuredSampler sampler(problem.quantized.poly, m);
    data.gas = run_gas(problem.quantized, problem.objective, sampler, params);
  } else {
    StateVectorSampler sampler(problem.quantized, m);
    data.gas = run_gas(problem.quantized, problem.objective, sampler, params);
  }
  data.scale = problem.quantized.scale;

  // Best-so-far exact values along the search.
  double best_exact = problem.objective.eval(data.gas.initial_x);
  data.qccd_series.push_back(best_exact);
  data.qcqd_steps.emplace_back(0, best_exact);
  std::int64_t rotations = 0;
  for (const TraceRecord& rec : data.gas.trace) {
    rotations += rec.rotations;
    if (rec.improved) {
      best_exact = problem.objective.eval(rec.measured_x);
      data.qcqd_steps.emplace_back(rotations, best_exact);
    }
    data.qccd_series.push_back(best_exact);
  }

  TrialResult& out = data.result;
  out.trial = trial;
  out.classical_metric = classical.metric;
  out.initial_objective = problem.objective.eval(data.gas.initial_x);
  out.final_objective = data.gas.best_value;
  const double denom = std::max(1.0, std::abs(classical.metric));
  out.optimum_found =
      data.gas.best_value_int == target_int &&
      std::abs(data.gas.best_value - classical.metric) <= 1e-6 * denom;
  out.qcqd_total = data.gas.qcqd;
  out.qccd_total = data.gas.qccd;
  out.iterations = static_cast<std::int64_t>(data.gas.trace.size());
  out.stop_reason = data.gas.stop_reason;
  out.m = data.gas.m;

  if (out.optimum_found) {
    if (data.gas.initial_value_int <= target_int) {
      out.qcqd_to_optimum = 0;
      out.qccd_to_optimum = 1;
    } else {
      std::int64_t cum = 0;
      for (const TraceRecord& rec : data.gas.trace) {
        cum += rec.rotations;
        if (rec.measured_value <= target_int) {
          out.qcqd_to_optimum = cum;
          out.qccd_to_optimum = rec.iteration + 1;
          break;
        }
      }
    }
  }

  // Classical comparator: evaluate the feasible candidates in random order
  // and track the best metric seen.
  const int width = cfg.gsm.bits_per_sym();
  const int total_bits = cfg.gsm.symbol_bits_total();
  const std::int64_t per_ap = std::int64_t{1} << total_bits;
  const std::int64_t candidates = per_ap * codebook.size();
  std::vector<std::int64_t> order(candidates);
  for (std::int64_t i = 0; i < candidates; ++i) order[i] = i;
  Rng shuffle_rng(baseline_seed(cfg.master_seed, trial));
  for (std::int64_t i = candidates - 1; i > 0; --i) {
    const auto j = static_cast<std::int64_t>(
        shuffle_rng.uniform_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::complex<double>> symbols(cfg.gsm.k_active);
  for (std::int64_t c : order) {
    const int ap = static_cast<int>(c / per_ap);
    const auto bits =
        integer_to_bits(static_cast<std::uint64_t>(c % per_ap), total_bits);
    for (int k = 0; k < cfg.gsm.k_active; ++k) {
      const std::span<const std::uint8_t> sym_bits(
          bits.data() + static_cast<std::size_t>(k) * width,
          static_cast<std::size_t>(width));
      symbols[k] = map_symbol(sym_bits, cfg.gsm.constellation);
    }
    best = std::min(best, residual_metric(chan, codeword(symbols,
                                                         codebook.pattern(ap),
                                                         cfg.gsm.n_tx)));
    data.baseline.push_back(best);
  }
  return data;
}

std::vector<CdfPoint> empirical_cdf(std::vector<std::int64_t> values,
                                    int total_trials) {
  std::sort(values.begin(), values.end());
  std::vector<CdfPoint> cdf;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool last_of_value = i + 1 == values.size() ||
                               values[i + 1] != values[i];
    if (last_of_value)
      cdf.emplace_back(values[i], static_cast<double>(i + 1) /
                                      static_cast<double>(total_trials));
  }
  return cdf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << body;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Json config_json(const ExperimentConfig& cfg) {
  Json j;
  j["n_tx"] = cfg.gsm.n_tx;
  j["n_rx"] = cfg.gsm.n_rx;
  j["k_active"] = cfg.gsm.k_active;
  j["q_aps"] = cfg.gsm.q_aps;
  j["constellation"] = constellation_name(cfg.gsm.constellation);
  j["snr_db"] = cfg.gsm.snr_db;
  j["ap_rule"] = ap_rule_name(cfg.ap_rule);
  if (!cfg.ap_table_path.empty()) j["ap_table"] = cfg.ap_table_path;
  j["lambda1"] = cfg.lambda1;
  j["lambda2"] = cfg.lambda2;
  j["precision_bits"] = cfg.precision_bits;
  j["margin_bits"] = cfg.margin_bits;
  j["lambda_growth"] = cfg.lambda_growth;
  j["m"] = cfg.m_override;
  j["patience"] = cfg.patience;
  j["max_qcqd"] = cfg.max_qcqd;
  j["stop_at_optimum"] = cfg.stop_at_optimum;
  j["trials"] = cfg.trials;
  j["backend"] = backend_name(cfg.backend);
  j["seed"] = cfg.master_seed;
  return j;
}

}  // namespace

std::optional<Backend> backend_from_name(const std::string& name) {
  if (name == "structured") return Backend::Structured;
  if (name == "statevector") return Backend::StateVector;
  return std::nullopt;
}

const char* backend_name(Backend backend) {
  switch (backend) {
    case Backend::Structured: return "structured";
    case Backend::StateVector: return "statevector";
  }
  throw std::invalid_argument("unknown backend");
}

ExperimentConfig ExperimentConfig::reference_preset() {
  ExperimentConfig cfg;
  cfg.gsm = GsmConfig{4, 4, 3, 4, Constellation::Qpsk, 0.0};
  cfg.lambda1 = 15.0;
  cfg.trials = 1000;
  return cfg;
}

void ExperimentConfig::apply_option(const std::string& key,
                                    const std::string& value) {
  if (key == "n_tx") gsm.n_tx = static_cast<int>(parse_int(key, value));
  else if (key == "n_rx") gsm.n_rx = static_cast<int>(parse_int(key, value));
  else if (key == "k_active")
    gsm.k_active = static_cast<int>(parse_int(key, value));
  else if (key == "q_aps") gsm.q_aps = static_cast<int>(parse_int(key, value));
  else if (key == "constellation") {
    const auto c = constellation_from_name(value);
    if (!c) throw std::invalid_argument("unknown constellation: " + value);
    gsm.constellation = *c;
  } else if (key == "snr_db") gsm.snr_db = parse_real(key, value);
  else if (key == "ap_rule") {
    const auto r = ap_rule_from_name(value);
    if (!r) throw std::invalid_argument("unknown ap_rule: " + value);
    ap_rule = *r;
  } else if (key == "ap_table") ap_table_path = value;
  else if (key == "lambda1") lambda1 = parse_real(key, value);
  else if (key == "lambda2") lambda2 = parse_real(key, value);
  else if (key == "precision_bits")
    precision_bits = static_cast<int>(parse_int(key, value));
  else if (key == "margin_bits")
    margin_bits = static_cast<int>(parse_int(key, value));
  else if (key == "lambda_growth") lambda_growth = parse_real(key, value);
  else if (key == "m") m_override = static_cast<int>(parse_int(key, value));
  else if (key == "patience") patience = parse_int(key, value);
  else if (key == "max_qcqd") max_qcqd = parse_int(key, value);
  else if (key == "stop_at_optimum") stop_at_optimum = parse_bool(key, value);
  else if (key == "trials") trials = static_cast<int>(parse_int(key, value));
  else if (key == "backend") {
    const auto b = backend_from_name(value);
    if (!b) throw std::invalid_argument("unknown backend: " + value);
    backend = *b;
  } else if (key == "seed")
    master_seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "threads") threads = static_cast<int>(parse_int(key, value));
  else if (key == "out_dir") out_dir = value;
  else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected key = value");
    cfg.apply_option(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("trials must be positive");
  cfg.gsm.validate();
  const ApCodebook codebook =
      ApCodebook::build(cfg.gsm, cfg.ap_rule, cfg.ap_table_path);

  std::vector<TrialData> data(cfg.trials);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const int trial = next.fetch_add(1);
      if (trial >= cfg.trials) return;
      try {
        data[trial] = run_trial(cfg, codebook, trial);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const unsigned hw = std::thread::hardware_concurrency();
  const int n_threads = cfg.threads > 0
                            ? cfg.threads
                            : static_cast<int>(std::max(1u, hw));
  std::vector<std::thread> pool;
  for (int i = 1; i < std::min(n_threads, cfg.trials); ++i)
    pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  ExperimentSummary summary;
  summary.cfg = cfg;
  summary.classical_candidates =
      (std::int64_t{1} << cfg.gsm.symbol_bits_total()) * codebook.size();

  std::size_t max_qccd = 0;
  std::int64_t max_qcqd = 0;
  for (const TrialData& d : data) {
    summary.trials.push_back(d.result);
    summary.optimum_found_count += d.result.optimum_found ? 1 : 0;
    summary.mean_classical_optimum += d.result.classical_metric;
    summary.mean_initial_objective += d.result.initial_objective;
    max_qccd = std::max(max_qccd, d.qccd_series.size());
    max_qcqd = std::max(max_qcqd, d.result.qcqd_total);
  }
  const auto n_trials = static_cast<double>(cfg.trials);
  summary.mean_classical_optimum /= n_trials;
  summary.mean_initial_objective /= n_trials;

  summary.mean_objective_vs_qccd.assign(max_qccd, 0.0);
  for (const TrialData& d : data)
    for (std::size_t q = 0; q < max_qccd; ++q)
      summary.mean_objective_vs_qccd[q] +=
          d.qccd_series[std::min(q, d.qccd_series.size() - 1)];
  for (double& v : summary.mean_objective_vs_qccd) v /= n_trials;

  summary.mean_objective_vs_qcqd.assign(
      static_cast<std::size_t>(max_qcqd) + 1, 0.0);
  for (const TrialData& d : data) {
    std::size_t step = 0;
    double current = d.qcqd_steps.front().second;
    for (std::int64_t r = 0; r <= max_qcqd; ++r) {
      while (step < d.qcqd_steps.size() && d.qcqd_steps[step].first <= r)
        current = d.qcqd_steps[step++].second;
      summary.mean_objective_vs_qcqd[static_cast<std::size_t>(r)] += current;
    }
  }
  for (double& v : summary.mean_objective_vs_qcqd) v /= n_trials;

  summary.mean_baseline_vs_queries.assign(
      static_cast<std::size_t>(summary.classical_candidates), 0.0);
  for (const TrialData& d : data)
    for (std::size_t q = 0; q < d.baseline.size(); ++q)
      summary.mean_baseline_vs_queries[q] += d.baseline[q];
  for (double& v : summary.mean_baseline_vs_queries) v /= n_trials;

  std::vector<std::int64_t> qcqd_hits;
  std::vector<std::int64_t> qccd_hits;
  for (const TrialData& d : data) {
    if (!d.result.optimum_found) continue;
    qcqd_hits.push_back(d.result.qcqd_to_optimum);
    qccd_hits.push_back(d.result.qccd_to_optimum);
  }
  summary.cdf_qcqd_to_optimum = empirical_cdf(std::move(qcqd_hits), cfg.trials);
  summary.cdf_qccd_to_optimum = empirical_cdf(std::move(qccd_hits), cfg.trials);

  if (!cfg.out_dir.empty()) {
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    // Trace rows live in `data`, not the summary; serialize from here.
    std::ostringstream trace;
    trace << "trial,i,L_i,y_i,measured_value,improved,cumulative_qcqd,"
             "cumulative_qccd\n";
    for (const TrialData& d : data) {
      std::int64_t cum = 0;
      for (const TraceRecord& rec : d.gas.trace) {
        cum += rec.rotations;
        trace << d.result.trial << ',' << rec.iteration << ','
              << rec.rotations << ','
              << format_double(d.scale *
                               static_cast<double>(rec.threshold_after))
              << ','
              << format_double(d.scale *
                               static_cast<double>(rec.measured_value))
              << ',' << (rec.improved ? 1 : 0) << ',' << cum << ','
              << rec.iteration + 1 << '\n';
      }
    }
    write_file(dir / "trace.csv", trace.str());
    write_file(dir / "trials.csv", trials_csv(summary));
    write_file(dir / "summary.json", summary_json(summary));
  }
  return summary;
}

std::string trials_csv(const ExperimentSummary& summary) {
  std::ostringstream out;
  out << "trial,classical_metric,initial_objective,final_objective,"
         "optimum_found,qcqd_to_optimum,qccd_to_optimum,qcqd_total,"
         "qccd_total,iterations,stop_reason,m\n";
  for (const TrialResult& t : summary.trials) {
    out << t.trial << ',' << format_double(t.classical_metric) << ','
        << format_double(t.initial_objective) << ','
        << format_double(t.final_objective) << ','
        << (t.optimum_found ? 1 : 0) << ',' << t.qcqd_to_optimum << ','
        << t.qccd_to_optimum << ',' << t.qcqd_total << ',' << t.qccd_total
        << ',' << t.iterations << ',' << stop_reason_name(t.stop_reason)
        << ',' << t.m << '\n';
  }
  return out.str();
}

std::string summary_json(const ExperimentSummary& summary) {
  Json j;
  j["version"] = kProjectVersion;
  j["config"] = config_json(summary.cfg);

  Json classical;
  classical["candidates"] = summary.classical_candidates;
  classical["mean_optimum"] = summary.mean_classical_optimum;
  classical["mean_best_vs_queries"] = summary.mean_baseline_vs_queries;
  j["classical"] = classical;

  Json gas;
  gas["trials"] = summary.cfg.trials;
  gas["optimum_found"] = summary.optimum_found_count;
  gas["mean_initial_objective"] = summary.mean_initial_objective;
  Json reasons = Json::object();
  for (const TrialResult& t : summary.trials) {
    const char* name = stop_reason_name(t.stop_reason);
    reasons[name] = (reasons.contains(name) ? reasons[name].get<int>() : 0) + 1;
  }
  gas["stop_reasons"] = reasons;
  gas["mean_objective_vs_qccd"] = summary.mean_objective_vs_qccd;
  gas["mean_objective_vs_qcqd"] = summary.mean_objective_vs_qcqd;
  Json cdf_qcqd = Json::array();
  for (const auto& [value, fraction] : summary.cdf_qcqd_to_optimum)
    cdf_qcqd.push_back(Json::array({value, fraction}));
  gas["cdf_qcqd_to_optimum"] = cdf_qcqd;
  Json cdf_qccd = Json::array();
  for (const auto& [value, fraction] : summary.cdf_qccd_to_optimum)
    cdf_qccd.push_back(Json::array({value, fraction}));
  gas["cdf_qccd_to_optimum"] = cdf_qccd;
  j["gas"] = gas;
  return j.dump(2) + "\n";
}

std::vector<RatioRow> complexity_ratio(int n_tx, const std::vector<int>& ks,
                                       const std::vector<int>& ls) {
  if (n_tx < 1 || n_tx > 32)
    throw std::invalid_argument("n_tx outside [1, 32]");
  std::vector<RatioRow> rows;
  for (int l : ls) {
    if (l < 2 || (l & (l - 1)) != 0)
      throw std::invalid_argument("constellation size must be a power of two");
    const int log2_l = std::countr_zero(static_cast<unsigned>(l));
    for (int k : ks) {
      if (k < 1 || k > n_tx)
        throw std::invalid_argument("k outside [1, n_tx]");
      RatioRow row;
      row.n_tx = n_tx;
      row.k = k;
      row.l = l;
      row.q = binomial64(n_tx, k);
      const long double f_exp = 0.5L * n_tx * (log2_l + 1);
      const long double log2_g =
          static_cast<long double>(k) * log2_l +
          std::log2(static_cast<long double>(row.q));
      row.f = static_cast<double>(std::exp2(f_exp));
      row.g = static_cast<double>(std::exp2(log2_g));
      row.ratio = static_cast<double>(std::exp2(f_exp - log2_g));
      rows.push_back(row);
    }
  }
  return rows;
}

std::string ratio_csv(const std::vector<RatioRow>& rows) {
  std::ostringstream out;
  out << "n_tx,k,l,q,f,g,ratio\n";
  for (const RatioRow& row : rows)
    out << row.n_tx << ',' << row.k << ',' << row.l << ',' << row.q << ','
        << format_double(row.f) << ',' << format_double(row.g) << ','
        << format_double(row.ratio) << '\n';
  return out.str();
}

namespace {

CheckResult check_constellation_goldens() {
  CheckResult check{"constellation goldens", true, ""};
  const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  const double inv_sqrt10 = 1.0 / std::sqrt(10.0);
  struct Golden {
    Constellation c;
    std::vector<std::uint8_t> bits;
    std::complex<double> want;
  };
  const std::vector<Golden> goldens = {
      {Constellation::Bpsk, {0}, {inv_sqrt2, inv_sqrt2}},
      {Constellation::Bpsk, {1}, {-inv_sqrt2, -inv_sqrt2}},
      {Constellation::Qpsk, {0, 1}, {inv_sqrt2, -inv_sqrt2}},
      {Constellation::Qam16, {0, 0, 0, 0}, {inv_sqrt10, inv_sqrt10}},
      {Constellation::Qam16, {1, 0, 1, 0}, {-3 * inv_sqrt10, inv_sqrt10}},
  };
  for (const Golden& g : goldens) {
    const auto got = map_symbol(g.bits, g.c);
    if (std::abs(got - g.want) > 1e-15) {
      check.passed = false;
      check.detail = "point mismatch";
      return check;
    }
  }
  for (Constellation c :
       {Constellation::Bpsk, Constellation::Qpsk, Constellation::Qam16}) {
    const int order = constellation_order(c);
    double energy = 0.0;
    for (int v = 0; v < order; ++v)
      energy += std::norm(
          map_symbol(integer_to_bits(v, bits_per_symbol(c)), c));
    if (std::abs(energy / order - 1.0) > 1e-12) {
      check.passed = false;
      check.detail = std::string("mean energy off for ") +
                     constellation_name(c);
      return check;
    }
  }
  check.detail = "all points and energies exact";
  return check;
}

CheckResult check_pattern_table_golden() {
  CheckResult check{"activation pattern table golden", true, ""};
  const std::string want = "0,1,2\n1,2,3\n2,3,0\n3,0,1\n";
  const std::string got = ApCodebook::cyclic(4, 3, 4).table_text();
  check.passed = got == want;
  check.detail = check.passed ? "byte-exact" : "rendered table differs";
  return check;
}

CheckResult check_grover_law(bool full) {
  CheckResult check{"amplification law", true, ""};
  const int instances = full ? 20 : 5;
  double worst = 0.0;
  Rng rng(20240901);
  for (int inst = 0; inst < instances; ++inst) {
    const int n = 4 + static_cast<int>(rng.uniform_below(7));  // 4..10
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::int64_t> values(size);
    for (auto& v : values)
      v = static_cast<std::int64_t>(rng.uniform_below(41)) - 20;
    std::int64_t t = 0;
    for (std::int64_t v : values) t += (v < 0) ? 1 : 0;
    const double theta =
        std::asin(std::sqrt(static_cast<double>(t) /
                            static_cast<double>(size)));
    AmplitudeState state = prepare_from_table(values, 8);
    for (int steps = 0; steps <= 10; ++steps) {
      const double want = std::pow(std::sin((2.0 * steps + 1.0) * theta), 2);
      worst = std::max(worst,
                       std::abs(success_probability(state) - want));
      grover_step(state);
    }
  }
  check.passed = worst <= 1e-9;
  check.detail = "max deviation " + format_double(worst);
  return check;
}

CheckResult check_simulator_equivalence(bool full) {
  CheckResult check{"simulator equivalence", true, ""};
  const int instances = full ? 20 : 5;
  double worst = 0.0;
  Rng rng(20240902);
  for (int inst = 0; inst < instances; ++inst) {
    const int n = 3 + static_cast<int>(rng.uniform_below(4));  // 3..6
    BinaryPolynomial p(n);
    const int terms = 3 + static_cast<int>(rng.uniform_below(6));
    for (int i = 0; i < terms; ++i) {
      const auto mask = rng.uniform_below(std::uint64_t{1} << n);
      const auto coeff =
          static_cast<double>(static_cast<std::int64_t>(rng.uniform_below(17)) - 8);
      p.add_term(Monomial::from_mask(mask), coeff);
    }
    const IntegerPolynomial quantized = quantize(p, 0);
    const std::int64_t threshold =
        quantized.poly.eval(rng.uniform_below(std::uint64_t{1} << n));
    const int m = std::min(choose_m(quantized, 0), 16 - n);
    if (m < 1) continue;
    const auto [lo, hi] = range_bound(quantized.poly);
    if (hi - lo >= (std::int64_t{1} << (m - 1))) continue;

    const GateSequence a_y = build_a_y(quantized, threshold, m);
    const GateSequence grover = grover_operator(a_y, n, m);
    StateVector sv = StateVector::zero(n + m);
    sv.apply(a_y);
    AmplitudeState st = prepare(quantized.poly, threshold, m);
    for (int steps = 0; steps <= 3; ++steps) {
      const auto marginal = x_marginal(sv, n, m);
      for (std::size_t x = 0; x < marginal.size(); ++x)
        worst = std::max(worst,
                         std::abs(marginal[x] - st.amps[x] * st.amps[x]));
      sv.apply(grover);
      grover_step(st);
    }
  }
  check.passed = worst <= 1e-9;
  check.detail = "max marginal deviation " + format_double(worst);
  return check;
}

CheckResult check_detector_agreement(bool full) {
  CheckResult check{"compiled objective vs exhaustive detector", true, ""};
  const int channels = full ? 100 : 10;
  const ExperimentConfig preset = ExperimentConfig::reference_preset();
  const ApCodebook codebook = ApCodebook::build(preset.gsm, ApRule::Cyclic);
  double worst = 0.0;
  for (int ch = 0; ch < channels; ++ch) {
    const ChannelRealization chan =
        synthesize(preset.gsm, codebook, 7000 + static_cast<std::uint64_t>(ch))
            .second;
    const MldProblem problem = build_objective(
        chan, preset.gsm, codebook, preset.lambda1, -1.0, 8);
    const MldResult classical = classical_mld(chan, preset.gsm, codebook);

    std::uint64_t argmin = 0;
    double best = std::numeric_limits<double>::infinity();
    const std::uint64_t space = std::uint64_t{1} << problem.layout.n();
    for (std::uint64_t x = 0; x < space; ++x) {
      const double v = problem.objective.eval(x);
      if (v < best) {
        best = v;
        argmin = x;
      }
    }
    const DecodedAssignment decoded = decode_assignment(
        argmin, problem.layout, codebook, preset.gsm.constellation);
    if (!decoded.valid || decoded.ap_index != classical.ap_index ||
        decoded.bits_symbols != classical.sym_bits) {
      check.passed = false;
      check.detail = "argmin decode mismatch at channel " +
                     std::to_string(ch);
      return check;
    }
    const std::uint64_t feas = encode_candidate(
        classical.ap_index, classical.sym_bits, problem.layout, codebook);
    worst = std::max(worst, std::abs(problem.objective.eval(feas) -
                                     classical.metric));
  }
  check.passed = worst <= 1e-9;
  if (check.detail.empty())
    check.detail = "max feasible-point deviation " + format_double(worst);
  return check;
}

}  // namespace

std::vector<CheckResult> validate(bool full) {
  std::vector<CheckResult> checks;
  checks.push_back(check_constellation_goldens());
  checks.push_back(check_pattern_table_golden());
  checks.push_back(check_grover_law(full));
  checks.push_back(check_simulator_equivalence(full));
  checks.push_back(check_detector_agreement(full));
  return checks;
}

}  // namespace gasmld
