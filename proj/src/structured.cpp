#include "gasmld/structured.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gasmld {

namespace {

constexpr int kMaxVars = 26;

void check_window(const std::vector<std::int64_t>& values, int m) {
  if (m < 1 || m > 62) throw std::invalid_argument("register width");
  const std::int64_t half = std::int64_t{1} << (m - 1);
  for (std::int64_t v : values)
    if (v < -half || v >= half)
      throw std::overflow_error("shifted value outside the register window");
}

}  // namespace

AmplitudeState prepare_from_table(std::vector<std::int64_t> shifted_values,
                                  int m) {
  const std::size_t size = shifted_values.size();
  if (size == 0 || (size & (size - 1)) != 0)
    throw std::invalid_argument("value table size must be a power of two");
  int n = 0;
  while ((std::size_t{1} << n) < size) ++n;
  if (n > kMaxVars) throw std::invalid_argument("too many variables");
  check_window(shifted_values, m);

  AmplitudeState state;
  state.n = n;
  state.m = m;
  state.values = std::move(shifted_values);
  state.amps.assign(size, 1.0 / std::sqrt(static_cast<double>(size)));
  return state;
}

AmplitudeState prepare(const Polynomial<std::int64_t>& objective,
                       std::int64_t threshold, int m) {
  const int n = objective.n_vars();
  if (n > kMaxVars) throw std::invalid_argument("too many variables");
  std::vector<std::int64_t> values(std::size_t{1} << n);
  for (std::size_t x = 0; x < values.size(); ++x)
    values[x] = objective.eval(x) - threshold;
  return prepare_from_table(std::move(values), m);
}

void grover_step(AmplitudeState& state) {
  for (std::size_t x = 0; x < state.amps.size(); ++x)
    if (state.values[x] < 0) state.amps[x] = -state.amps[x];
  const double mean =
      std::accumulate(state.amps.begin(), state.amps.end(), 0.0) /
      static_cast<double>(state.amps.size());
  for (double& amp : state.amps) amp = 2.0 * mean - amp;
}

double success_probability(const AmplitudeState& state) {
  double total = 0.0;
  for (std::size_t x = 0; x < state.amps.size(); ++x)
    if (state.values[x] < 0) total += state.amps[x] * state.amps[x];
  return total;
}

std::uint64_t measure(const AmplitudeState& state, Rng& rng) {
  const double u = rng.uniform01();
  double cumulative = 0.0;
  for (std::size_t x = 0; x < state.amps.size(); ++x) {
    cumulative += state.amps[x] * state.amps[x];
    if (u < cumulative) return x;
  }
  return state.amps.size() - 1;
}

StructuredSampler::StructuredSampler(const Polynomial<std::int64_t>& objective,
                                     int m)
    : n_(objective.n_vars()), m_(m) {
  if (n_ > kMaxVars) throw std::invalid_argument("too many variables");
  values_.resize(std::size_t{1} << n_);
  for (std::size_t x = 0; x < values_.size(); ++x)
    values_[x] = objective.eval(x);
}

std::uint64_t StructuredSampler::sample(std::int64_t threshold,
                                        std::int64_t rotations, Rng& rng) {
  std::vector<std::int64_t> shifted(values_.size());
  for (std::size_t x = 0; x < shifted.size(); ++x)
    shifted[x] = values_[x] - threshold;
  AmplitudeState state = prepare_from_table(std::move(shifted), m_);
  for (std::int64_t step = 0; step < rotations; ++step) grover_step(state);
  return measure(state, rng);
}

}  // namespace gasmld
