#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gasmld/gas.hpp"
#include "gasmld/polynomial.hpp"
#include "gasmld/rng.hpp"

namespace gasmld {

// Gate descriptors for the search circuit. Simulator-level shortcuts are
// deliberate: the multi-controlled phase acts directly on matching basis
// states and Diffusion is the full-space reflection 2|0..0><0..0| - I; gate
// decomposition fidelity is out of scope.
enum class GateKind { Hadamard, Phase, ControlledPhase, Swap, PauliZ, Diffusion };

struct Gate {
  GateKind kind = GateKind::Hadamard;
  int target = 0;
  int target2 = 0;                 // swap partner
  double theta = 0.0;              // phase angle
  std::uint64_t control_mask = 0;  // control qubits, excludes target
};

using GateSequence = std::vector<Gate>;

Gate hadamard(int q);
Gate phase(int q, double theta);
Gate controlled_phase(std::uint64_t control_mask, int q, double theta);
Gate swap_qubits(int a, int b);
Gate pauli_z(int q);
Gate diffusion();

// Dense amplitudes over n_qubits qubits; basis index bit q is qubit q.
// Variable qubits occupy bits 0..n-1, value qubits n..n+m-1 with qubit n+j
// carrying weight 2^j (the sign qubit is n+m-1).
class StateVector {
 public:
  static constexpr int kMaxQubits = 26;

  static StateVector zero(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<std::complex<double>>& amps() const { return amps_; }
  std::vector<std::complex<double>>& amps() { return amps_; }

  void apply(const Gate& gate);
  void apply(const GateSequence& seq);

  double norm_squared() const;

 private:
  int n_qubits_ = 0;
  std::vector<std::complex<double>> amps_;
};

// Fourier transform on the m-qubit block starting at first_qubit, mapping
// |v> to 2^(-m/2) sum_r exp(2*pi*i*v*r/2^m) |r>.
GateSequence qft_sequence(int first_qubit, int m);

// Exact inverse: gates reversed with negated angles.
GateSequence inverted(const GateSequence& seq);

// State preparation A_y: Hadamard wall, one phase block per objective term
// (angle 2*pi*coeff/2^m, distributed over the value qubits by weight,
// controlled on the term's variables), inverse Fourier transform. The
// threshold is folded into the constant term, so conditioned on x the value
// register reads (E(x) - threshold) mod 2^m exactly.
GateSequence build_a_y(const IntegerPolynomial& p, std::int64_t threshold,
                       int m);

// Same construction for a real-coefficient polynomial (threshold already
// subtracted): phases are no longer multiples of 2*pi/2^m, so the register
// holds a superposition concentrated near the true value. Study tool only.
GateSequence encode_real_coefficients(const BinaryPolynomial& shifted, int m);

// One Grover iteration: sign-qubit oracle, then the reflection about the
// prepared state realized as A_y^dagger D A_y with D = 2|0..0><0..0| - I.
GateSequence grover_operator(const GateSequence& a_y, int n, int m);

// Probability of each x, summed over the value register.
std::vector<double> x_marginal(const StateVector& state, int n, int m);

// Probability that the sign qubit reads 1 (register value >= 2^(m-1)).
double sign_qubit_probability(const StateVector& state, int n, int m);

// Full-basis measurement.
std::uint64_t measure_state(const StateVector& state, Rng& rng);

// Per-basis-state "x,register,probability" rows; refuses n+m > 16.
std::string dump_csv(const StateVector& state, int n, int m);

// Probability that the sign-qubit readout after encode_real_coefficients
// disagrees with the true sign of the shifted objective, averaged over the
// uniform superposition.
double oracle_misclassification(const BinaryPolynomial& shifted, int m);

// Gate-level sampler for gas-core; rebuilds A_y per threshold.
class StateVectorSampler final : public GroverSampler {
 public:
  StateVectorSampler(IntegerPolynomial objective, int m);

  int num_vars() const override { return n_; }
  std::uint64_t sample(std::int64_t threshold, std::int64_t rotations,
                       Rng& rng) override;

 private:
  IntegerPolynomial objective_;
  int n_;
  int m_;
};

}  // namespace gasmld
