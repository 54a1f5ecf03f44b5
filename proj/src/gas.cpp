#include "gasmld/gas.hpp"

#include <cmath>
#include <stdexcept>

namespace gasmld {

const char* stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::Patience: return "patience";
    case StopReason::RotationBudget: return "rotation_budget";
    case StopReason::TargetReached: return "target_reached";
  }
  throw std::invalid_argument("unknown stop reason");
}

int choose_m(const IntegerPolynomial& p, int margin_bits) {
  if (margin_bits < 0)
    throw std::invalid_argument("margin_bits must be non-negative");
  const auto [lower, upper] = range_bound(p.poly);
  const std::int64_t span = upper - lower;
  int m = 1;
  // Need -2^(m-1) <= -span and span < 2^(m-1).
  while (m < 62 && !((std::int64_t{1} << (m - 1)) > span)) ++m;
  return m + margin_bits;
}

std::int64_t sample_rotation_count(double k, Rng& rng) {
  if (k < 1.0) throw std::invalid_argument("rotation parameter below 1");
  const double ceiling = std::ceil(k - 1.0 - 1e-12);
  const auto max_rotations = static_cast<std::int64_t>(std::max(0.0, ceiling));
  return static_cast<std::int64_t>(
      rng.uniform_below(static_cast<std::uint64_t>(max_rotations) + 1));
}

GasResult run_gas(const IntegerPolynomial& quantized,
                  const BinaryPolynomial& exact, GroverSampler& sampler,
                  const GasParams& params) {
  const int n = quantized.poly.n_vars();
  if (sampler.num_vars() != n)
    throw std::invalid_argument("sampler variable count mismatch");
  if (params.lambda_growth <= 1.0)
    throw std::invalid_argument("lambda_growth must exceed 1");

  const double sqrt_space = std::sqrt(std::ldexp(1.0, n));
  const std::int64_t patience =
      params.termination.patience > 0
          ? params.termination.patience
          : static_cast<std::int64_t>(std::ceil(sqrt_space));
  const std::int64_t max_qcqd =
      params.termination.max_qcqd > 0
          ? params.termination.max_qcqd
          : static_cast<std::int64_t>(std::ceil(10.0 * sqrt_space));

  Rng rng(params.seed);
  GasResult result;
  result.m = params.m > 0 ? params.m
                          : choose_m(quantized, params.margin_bits);

  const std::uint64_t space =
      n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n);
  result.initial_x = n == 64 ? rng.next() : rng.uniform_below(space);
  result.initial_value_int = quantized.poly.eval(result.initial_x);
  result.best_x = result.initial_x;
  result.best_value_int = result.initial_value_int;
  result.qccd = 1;

  double k = 1.0;
  std::int64_t threshold = result.initial_value_int;
  std::int64_t stale = 0;
  std::int64_t iteration = 0;
  StopReason reason = StopReason::Patience;

  if (params.termination.target &&
      threshold <= *params.termination.target) {
    reason = StopReason::TargetReached;
  } else {
    for (;;) {
      ++iteration;
      const std::int64_t rotations = sample_rotation_count(k, rng);
      const std::uint64_t x = sampler.sample(threshold, rotations, rng);
      const std::int64_t value = quantized.poly.eval(x);
      result.qcqd += rotations;
      ++result.qccd;

      const bool improved = value < threshold;
      if (improved) {
        threshold = value;
        result.best_x = x;
        result.best_value_int = value;
        k = 1.0;
        stale = 0;
      } else {
        k = std::min(k * params.lambda_growth, sqrt_space);
        ++stale;
      }
      result.trace.push_back(
          {iteration, rotations, x, value, threshold, improved});

      if (params.termination.target &&
          threshold <= *params.termination.target) {
        reason = StopReason::TargetReached;
        break;
      }
      if (result.qcqd >= max_qcqd) {
        reason = StopReason::RotationBudget;
        break;
      }
      if (stale >= patience) {
        reason = StopReason::Patience;
        break;
      }
    }
  }

  result.stop_reason = reason;
  result.best_value = exact.eval(result.best_x);
  return result;
}

}  // namespace gasmld
