#include "gasmld/statevector.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gasmld {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_qubit(int q, int n_qubits) {
  if (q < 0 || q >= n_qubits) throw std::out_of_range("qubit index");
}

}  // namespace

Gate hadamard(int q) { return {GateKind::Hadamard, q, 0, 0.0, 0}; }

Gate phase(int q, double theta) { return {GateKind::Phase, q, 0, theta, 0}; }

Gate controlled_phase(std::uint64_t control_mask, int q, double theta) {
  if (control_mask == 0) return phase(q, theta);
  return {GateKind::ControlledPhase, q, 0, theta, control_mask};
}

Gate swap_qubits(int a, int b) { return {GateKind::Swap, a, b, 0.0, 0}; }

Gate pauli_z(int q) { return {GateKind::PauliZ, q, 0, 0.0, 0}; }

Gate diffusion() { return {GateKind::Diffusion, 0, 0, 0.0, 0}; }

StateVector StateVector::zero(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::invalid_argument("qubit count outside [1, 26]");
  StateVector state;
  state.n_qubits_ = n_qubits;
  state.amps_.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
  state.amps_[0] = {1.0, 0.0};
  return state;
}

void StateVector::apply(const Gate& gate) {
  const std::size_t size = amps_.size();
  switch (gate.kind) {
    case GateKind::Hadamard: {
      check_qubit(gate.target, n_qubits_);
      const std::size_t bit = std::size_t{1} << gate.target;
      const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
      for (std::size_t idx = 0; idx < size; ++idx) {
        if (idx & bit) continue;
        const auto a = amps_[idx];
        const auto b = amps_[idx | bit];
        amps_[idx] = inv_sqrt2 * (a + b);
        amps_[idx | bit] = inv_sqrt2 * (a - b);
      }
      break;
    }
    case GateKind::Phase:
    case GateKind::ControlledPhase: {
      check_qubit(gate.target, n_qubits_);
      if (gate.control_mask >> n_qubits_)
        throw std::out_of_range("control qubit index");
      const std::uint64_t required =
          gate.control_mask | (std::uint64_t{1} << gate.target);
      const std::complex<double> factor = std::polar(1.0, gate.theta);
      for (std::size_t idx = 0; idx < size; ++idx)
        if ((idx & required) == required) amps_[idx] *= factor;
      break;
    }
    case GateKind::Swap: {
      check_qubit(gate.target, n_qubits_);
      check_qubit(gate.target2, n_qubits_);
      const std::size_t bit_a = std::size_t{1} << gate.target;
      const std::size_t bit_b = std::size_t{1} << gate.target2;
      for (std::size_t idx = 0; idx < size; ++idx)
        if ((idx & bit_a) && !(idx & bit_b))
          std::swap(amps_[idx], amps_[(idx & ~bit_a) | bit_b]);
      break;
    }
    case GateKind::PauliZ: {
      check_qubit(gate.target, n_qubits_);
      const std::size_t bit = std::size_t{1} << gate.target;
      for (std::size_t idx = 0; idx < size; ++idx)
        if (idx & bit) amps_[idx] = -amps_[idx];
      break;
    }
    case GateKind::Diffusion: {
      const auto zero_amp = amps_[0];
      for (auto& amp : amps_) amp = -amp;
      amps_[0] = zero_amp;
      break;
    }
  }
}

void StateVector::apply(const GateSequence& seq) {
  for (const Gate& gate : seq) apply(gate);
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& amp : amps_) total += std::norm(amp);
  return total;
}

GateSequence qft_sequence(int first_qubit, int m) {
  if (first_qubit < 0 || m < 1) throw std::invalid_argument("qft block");
  GateSequence seq;
  for (int j = m - 1; j >= 0; --j) {
    seq.push_back(hadamard(first_qubit + j));
    for (int i = j - 1; i >= 0; --i)
      seq.push_back(controlled_phase(
          std::uint64_t{1} << (first_qubit + i), first_qubit + j,
          std::numbers::pi / static_cast<double>(std::int64_t{1} << (j - i))));
  }
  for (int i = 0; i < m / 2; ++i)
    seq.push_back(swap_qubits(first_qubit + i, first_qubit + m - 1 - i));
  return seq;
}

GateSequence inverted(const GateSequence& seq) {
  GateSequence out;
  out.reserve(seq.size());
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    Gate gate = *it;
    if (gate.kind == GateKind::Phase || gate.kind == GateKind::ControlledPhase)
      gate.theta = -gate.theta;
    out.push_back(gate);
  }
  return out;
}

namespace {

// Phase block encoding one term: angle 2*pi*coeff*2^j/2^m on value qubit j,
// controlled on the term's variables. For integer coefficients the angle is
// reduced exactly modulo 2^m first.
void push_term_phases(GateSequence& seq, std::uint64_t var_mask, double coeff,
                      bool integral, int n, int m) {
  for (int j = 0; j < m; ++j) {
    double angle;
    if (integral) {
      const std::int64_t modulus = std::int64_t{1} << m;
      auto residue = static_cast<std::int64_t>(coeff) % modulus;
      if (residue < 0) residue += modulus;
      for (int shift = 0; shift < j; ++shift)
        residue = (residue * 2) % modulus;
      angle = kTwoPi * static_cast<double>(residue) /
              static_cast<double>(modulus);
      if (angle == 0.0) continue;
    } else {
      angle = kTwoPi * coeff * std::ldexp(1.0, j - m);
    }
    seq.push_back(controlled_phase(var_mask, n + j, angle));
  }
}

template <class Coeff>
GateSequence build_preparation(const Polynomial<Coeff>& shifted, bool integral,
                               int m) {
  const int n = shifted.n_vars();
  if (m < 1) throw std::invalid_argument("value register needs a qubit");
  if (n + m > StateVector::kMaxQubits)
    throw std::invalid_argument("state exceeds the qubit ceiling");

  GateSequence seq;
  for (int q = 0; q < n + m; ++q) seq.push_back(hadamard(q));
  for (const auto& [mono, coeff] : shifted.terms())
    push_term_phases(seq, mono.mask(), static_cast<double>(coeff), integral,
                     n, m);
  for (const Gate& gate : inverted(qft_sequence(n, m))) seq.push_back(gate);
  return seq;
}

}  // namespace

GateSequence build_a_y(const IntegerPolynomial& p, std::int64_t threshold,
                       int m) {
  Polynomial<std::int64_t> shifted = p.poly;
  shifted.add_term(Monomial{}, -threshold);
  return build_preparation(shifted, true, m);
}

GateSequence encode_real_coefficients(const BinaryPolynomial& shifted, int m) {
  return build_preparation(shifted, false, m);
}

GateSequence grover_operator(const GateSequence& a_y, int n, int m) {
  GateSequence seq;
  seq.push_back(pauli_z(n + m - 1));
  for (const Gate& gate : inverted(a_y)) seq.push_back(gate);
  seq.push_back(diffusion());
  for (const Gate& gate : a_y) seq.push_back(gate);
  return seq;
}

std::vector<double> x_marginal(const StateVector& state, int n, int m) {
  if (n + m != state.n_qubits())
    throw std::invalid_argument("register split mismatch");
  std::vector<double> probs(std::size_t{1} << n, 0.0);
  const std::size_t x_mask = (std::size_t{1} << n) - 1;
  const auto& amps = state.amps();
  for (std::size_t idx = 0; idx < amps.size(); ++idx)
    probs[idx & x_mask] += std::norm(amps[idx]);
  return probs;
}

double sign_qubit_probability(const StateVector& state, int n, int m) {
  if (n + m != state.n_qubits())
    throw std::invalid_argument("register split mismatch");
  const std::size_t sign_bit = std::size_t{1} << (n + m - 1);
  double total = 0.0;
  const auto& amps = state.amps();
  for (std::size_t idx = 0; idx < amps.size(); ++idx)
    if (idx & sign_bit) total += std::norm(amps[idx]);
  return total;
}

std::uint64_t measure_state(const StateVector& state, Rng& rng) {
  const double u = rng.uniform01();
  double cumulative = 0.0;
  const auto& amps = state.amps();
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    cumulative += std::norm(amps[idx]);
    if (u < cumulative) return idx;
  }
  return amps.size() - 1;
}

std::string dump_csv(const StateVector& state, int n, int m) {
  if (n + m > 16) throw std::invalid_argument("dump limited to 16 qubits");
  if (n + m != state.n_qubits())
    throw std::invalid_argument("register split mismatch");
  std::ostringstream out;
  out << "x,register,probability\n";
  const std::size_t x_mask = (std::size_t{1} << n) - 1;
  const auto& amps = state.amps();
  char buf[64];
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    std::snprintf(buf, sizeof buf, "%.17g", std::norm(amps[idx]));
    out << (idx & x_mask) << ',' << (idx >> n) << ',' << buf << '\n';
  }
  return out.str();
}

double oracle_misclassification(const BinaryPolynomial& shifted, int m) {
  const int n = shifted.n_vars();
  StateVector state = StateVector::zero(n + m);
  state.apply(encode_real_coefficients(shifted, m));

  const std::size_t x_mask = (std::size_t{1} << n) - 1;
  const std::size_t sign_bit = std::size_t{1} << (n + m - 1);
  double wrong = 0.0;
  const auto& amps = state.amps();
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    const bool flagged = (idx & sign_bit) != 0;
    const bool negative = shifted.eval(idx & x_mask) < 0.0;
    if (flagged != negative) wrong += std::norm(amps[idx]);
  }
  return wrong;
}

StateVectorSampler::StateVectorSampler(IntegerPolynomial objective, int m)
    : objective_(std::move(objective)),
      n_(objective_.poly.n_vars()),
      m_(m) {
  if (n_ + m_ > StateVector::kMaxQubits)
    throw std::invalid_argument("state exceeds the qubit ceiling");
}

std::uint64_t StateVectorSampler::sample(std::int64_t threshold,
                                         std::int64_t rotations, Rng& rng) {
  const GateSequence a_y = build_a_y(objective_, threshold, m_);
  StateVector state = StateVector::zero(n_ + m_);
  state.apply(a_y);
  const GateSequence grover = grover_operator(a_y, n_, m_);
  for (std::int64_t step = 0; step < rotations; ++step) state.apply(grover);
  const std::uint64_t idx = measure_state(state, rng);
  return idx & ((std::uint64_t{1} << n_) - 1);
}

}  // namespace gasmld
