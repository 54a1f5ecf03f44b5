#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gasmld/gsm.hpp"
#include "gasmld/polynomial.hpp"

namespace gasmld {

// Bit layout of the optimization variables: one symbol-bit block per
// transmit antenna (antenna-major, bit-minor), then one activation bit per
// antenna. Assignment integers put variable v at bit (1 << v).
struct VariableLayout {
  int n_tx = 0;
  int bits_per_sym = 0;

  int n() const { return n_tx * (bits_per_sym + 1); }
  int symbol_var(int antenna, int bit) const {
    return antenna * bits_per_sym + bit;
  }
  int activation_var(int antenna) const {
    return n_tx * bits_per_sym + antenna;
  }
};

// Codeword entry polynomials c_i(x) = s(symbol bits of antenna i) *
// activation bit of antenna i, as multilinear polynomials over the layout's
// variables. The symbol mapping is interpolated exactly over all bit
// patterns, so eval at a feasible assignment reproduces map_symbol.
std::vector<ComplexPolynomial> codeword_polynomials(const VariableLayout& layout,
                                                    Constellation constellation);

// Squared residual norm sum_r |y_r - sum_i H_{r,i} c_i(x)|^2 expanded to a
// real polynomial; imaginary residues beyond 1e-12 are an error.
BinaryPolynomial norm_objective(const ChannelRealization& chan,
                                const VariableLayout& layout,
                                Constellation constellation);

// (sum_i activation_i - k_active)^2.
BinaryPolynomial cardinality_penalty(const VariableLayout& layout,
                                     int k_active);

// Sum over the K-subsets of antennas that no codebook pattern activates of
// the product of their activation bits.
BinaryPolynomial exclusion_penalty(const VariableLayout& layout,
                                   const ApCodebook& codebook);

struct MldProblem {
  GsmConfig cfg;
  ApCodebook codebook;
  ChannelRealization chan;
  VariableLayout layout;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int precision_bits = 8;
  BinaryPolynomial objective;
  IntegerPolynomial quantized;
};

// Compiles one detection instance into norm + lambda1 * cardinality +
// lambda2 * exclusion and quantizes it. lambda2 < 0 selects the default:
// lambda1 when excluded subsets exist, otherwise 0.
MldProblem build_objective(const ChannelRealization& chan,
                           const GsmConfig& cfg, const ApCodebook& codebook,
                           double lambda1, double lambda2 = -1.0,
                           int precision_bits = 8);

struct DecodedAssignment {
  bool valid = false;
  int ap_index = 0;
  std::vector<std::complex<double>> symbols;     // codebook column order
  std::vector<std::uint8_t> bits_symbols;        // column-major concatenation
  std::vector<std::uint8_t> bits_ap;
};

// Reads the activation bits; the assignment is valid when exactly k_active
// antennas are set and the active set matches a codebook pattern. Symbols
// come from the active antennas' bit blocks in codebook column order.
DecodedAssignment decode_assignment(std::uint64_t x,
                                    const VariableLayout& layout,
                                    const ApCodebook& codebook,
                                    Constellation constellation);

// Assignment with the given pattern's activation bits set and each active
// antenna's symbol block filled from bits_symbols in column order; inactive
// blocks stay zero.
std::uint64_t encode_candidate(int ap_index,
                               std::span<const std::uint8_t> bits_symbols,
                               const VariableLayout& layout,
                               const ApCodebook& codebook);

std::uint64_t encode_frame(const TransmitFrame& frame,
                           const VariableLayout& layout,
                           const ApCodebook& codebook);

// Debug rendering: layout summary plus objective term list.
std::string describe(const MldProblem& problem);

}  // namespace gasmld
