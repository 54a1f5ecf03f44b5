#pragma once

#include <cstdint>
#include <vector>

#include "gasmld/gas.hpp"
#include "gasmld/polynomial.hpp"
#include "gasmld/rng.hpp"

namespace gasmld {

// Search state over the 2^n variable register. The value register never
// needs amplitudes of its own: with integer coefficients it is a
// deterministic basis state per x, so entry x carries the shifted objective
// value and one real amplitude. Grover dynamics keep the amplitudes real.
struct AmplitudeState {
  int n = 0;
  int m = 0;
  std::vector<double> amps;          // 2^n, indexed by assignment
  std::vector<std::int64_t> values;  // E_int(x) - threshold
};

// Uniform superposition with the value table filled by evaluation; every
// shifted value must fit the m-bit two's-complement window.
AmplitudeState prepare(const Polynomial<std::int64_t>& objective,
                       std::int64_t threshold, int m);
AmplitudeState prepare_from_table(std::vector<std::int64_t> shifted_values,
                                  int m);

// One Grover iteration: negate amplitudes of negative-value states (the
// sign-qubit oracle), then reflect about the uniform vector.
void grover_step(AmplitudeState& state);

// Total probability on negative-value states.
double success_probability(const AmplitudeState& state);

// Samples an assignment from |amp|^2.
std::uint64_t measure(const AmplitudeState& state, Rng& rng);

// Sampler bound to one quantized objective; the unshifted value table is
// computed once and reused across iterations.
class StructuredSampler final : public GroverSampler {
 public:
  StructuredSampler(const Polynomial<std::int64_t>& objective, int m);

  int num_vars() const override { return n_; }
  std::uint64_t sample(std::int64_t threshold, std::int64_t rotations,
                       Rng& rng) override;

 private:
  int n_;
  int m_;
  std::vector<std::int64_t> values_;
};

}  // namespace gasmld
