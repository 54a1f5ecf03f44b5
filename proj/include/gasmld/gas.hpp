#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gasmld/polynomial.hpp"
#include "gasmld/rng.hpp"

namespace gasmld {

// Measurement back-end contract: prepare the threshold-shifted search state,
// apply the requested number of Grover iterations, measure the variable
// register. Implementations are in structured.hpp and statevector.hpp.
class GroverSampler {
 public:
  virtual ~GroverSampler() = default;
  virtual int num_vars() const = 0;
  virtual std::uint64_t sample(std::int64_t threshold, std::int64_t rotations,
                               Rng& rng) = 0;
};

struct TerminationPolicy {
  // Consecutive non-improving iterations before giving up;
  // <= 0 selects ceil(sqrt(2^n)).
  std::int64_t patience = 0;
  // Total rotation budget; <= 0 selects ceil(10 * sqrt(2^n)).
  std::int64_t max_qcqd = 0;
  // Known optimum in integer units; stops once the threshold reaches it.
  std::optional<std::int64_t> target;
};

struct GasParams {
  double lambda_growth = 8.0 / 7.0;
  // Value-register width; 0 derives it from the objective's range.
  int m = 0;
  int margin_bits = 0;
  TerminationPolicy termination;
  std::uint64_t seed = 0;
};

enum class StopReason { Patience, RotationBudget, TargetReached };

const char* stop_reason_name(StopReason reason);

// One adaptive iteration. threshold_after is the threshold in force after
// the improvement check, so it strictly decreases exactly on improved rows.
struct TraceRecord {
  std::int64_t iteration = 0;
  std::int64_t rotations = 0;
  std::uint64_t measured_x = 0;
  std::int64_t measured_value = 0;
  std::int64_t threshold_after = 0;
  bool improved = false;
};

struct GasResult {
  std::uint64_t best_x = 0;
  std::int64_t best_value_int = 0;
  double best_value = 0.0;  // exact objective at best_x
  std::uint64_t initial_x = 0;
  std::int64_t initial_value_int = 0;
  std::vector<TraceRecord> trace;
  std::int64_t qcqd = 0;  // sum of rotation counts
  std::int64_t qccd = 0;  // measurements, counting the initial sample
  StopReason stop_reason = StopReason::Patience;
  int m = 0;
};

// Smallest register width that holds every reachable shifted value
// E(x) - threshold in two's complement, plus margin_bits. The threshold is
// itself an objective value, so the worst-case span is +/-(upper - lower).
int choose_m(const IntegerPolynomial& p, int margin_bits = 0);

// Uniform on {0, ..., ceil(k-1)}; the ceiling is nudged down by 1e-12 so
// representation error in k cannot inflate the draw set.
std::int64_t sample_rotation_count(double k, Rng& rng);

// Adaptive threshold search: start from one uniform classical sample, then
// repeatedly sample with a randomly drawn rotation count, lower the
// threshold on improvement (resetting k to 1), and grow k by lambda_growth
// (capped at sqrt(2^n)) otherwise. Decisions run in the quantized integer
// domain; best_value reports the exact objective at the winning assignment.
GasResult run_gas(const IntegerPolynomial& quantized,
                  const BinaryPolynomial& exact, GroverSampler& sampler,
                  const GasParams& params);

}  // namespace gasmld
