#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gasmld/rng.hpp"

namespace gasmld {

enum class Constellation { Bpsk, Qpsk, Qam16 };

// L: number of constellation points.
int constellation_order(Constellation c);
// log2 L.
int bits_per_symbol(Constellation c);
const char* constellation_name(Constellation c);
std::optional<Constellation> constellation_from_name(const std::string& name);

// 5G-NR-style unit-energy mapping. Bits are ordered b0 first.
std::complex<double> map_symbol(std::span<const std::uint8_t> bits,
                                Constellation c);
// Exact inverse; throws std::domain_error when the point is not in the
// constellation (tolerance 1e-9).
std::vector<std::uint8_t> demap_symbol(std::complex<double> point,
                                       Constellation c);

// Bit-vector <-> integer with the first bit most significant, matching the
// written order of bit sequences (e.g. "10" is 2).
std::uint64_t bits_to_integer(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> integer_to_bits(std::uint64_t value, int width);

struct GsmConfig {
  int n_tx = 4;
  int n_rx = 4;
  int k_active = 3;
  int q_aps = 4;
  Constellation constellation = Constellation::Qpsk;
  double snr_db = 0.0;

  int order() const { return constellation_order(constellation); }
  int bits_per_sym() const { return bits_per_symbol(constellation); }
  int symbol_bits_total() const { return k_active * bits_per_sym(); }
  int ap_bits() const;
  // sigma_n^2 with unit per-symbol power; +inf dB means noiseless.
  double noise_var() const;
  // Throws std::invalid_argument on any violated constraint.
  void validate() const;
};

enum class ApRule { Cyclic, Lex, ExplicitTable };

std::optional<ApRule> ap_rule_from_name(const std::string& name);
const char* ap_rule_name(ApRule rule);

// Ordered list of Q activation patterns. A pattern is the K antenna indices
// in column order of the activation matrix A (one 1 per column); the list
// position is the value of the AP bit sequence.
class ApCodebook {
 public:
  // Pattern q activates antennas {(q+0), ..., (q+K-1)} mod N_t in that order.
  static ApCodebook cyclic(int n_tx, int k_active, int q_aps);
  // First Q of the lexicographically ordered ascending K-combinations.
  static ApCodebook lex(int n_tx, int k_active, int q_aps);
  // One pattern per line, comma-separated antenna indices in column order;
  // line number = bit-sequence value.
  static ApCodebook from_table_text(const std::string& text, int n_tx,
                                    int k_active);
  static ApCodebook from_table_file(const std::string& path, int n_tx,
                                    int k_active);
  static ApCodebook build(const GsmConfig& cfg, ApRule rule,
                          const std::string& table_path = "");

  int n_tx() const { return n_tx_; }
  int k_active() const { return k_active_; }
  int size() const { return static_cast<int>(patterns_.size()); }
  int bit_width() const;
  const std::vector<std::vector<int>>& patterns() const { return patterns_; }
  const std::vector<int>& pattern(int ap) const { return patterns_.at(ap); }

  // Bit i set means antenna i is active.
  std::uint32_t active_mask(int ap) const;
  std::optional<int> index_of_active_mask(std::uint32_t mask) const;
  std::optional<int> index_of_pattern(std::span<const int> antennas) const;

  // Activation matrix, row-major N_t x K; entry (i, k) is 1 when column k
  // activates antenna i.
  std::vector<std::uint8_t> ap_matrix(int ap) const;

  // Canonical rendering in the explicit-table format; round-trips through
  // from_table_text.
  std::string table_text() const;

 private:
  ApCodebook(int n_tx, int k_active, std::vector<std::vector<int>> patterns);
  int n_tx_;
  int k_active_;
  std::vector<std::vector<int>> patterns_;
};

struct TransmitFrame {
  std::vector<std::uint8_t> bits_symbols;  // K*log2(L), symbol-major
  std::vector<std::uint8_t> bits_ap;       // log2(Q)
  std::vector<std::complex<double>> symbols;  // K
  int ap_index = 0;
};

struct ChannelRealization {
  int n_rx = 0;
  int n_tx = 0;
  std::vector<std::complex<double>> h;  // row-major N_r x N_t
  double noise_var = 0.0;
  std::vector<std::complex<double>> y;  // N_r

  std::complex<double> h_at(int row, int col) const {
    return h[static_cast<std::size_t>(row) * n_tx + col];
  }
};

// Transmit codeword A*s: length-N_t vector with symbols[k] placed on antenna
// pattern[k].
std::vector<std::complex<double>> codeword(std::span<const std::complex<double>> symbols,
                                           std::span<const int> antennas,
                                           int n_tx);

// ||y - H * codeword||^2.
double residual_metric(const ChannelRealization& chan,
                       std::span<const std::complex<double>> code);

// Draws bits, channel, and noise from the seed and forms y = H*A*s + n.
// Deterministic given (cfg, codebook, seed).
std::pair<TransmitFrame, ChannelRealization> synthesize(
    const GsmConfig& cfg, const ApCodebook& codebook, std::uint64_t seed);

struct MldResult {
  std::vector<std::complex<double>> symbols;  // K
  int ap_index = 0;
  std::vector<std::uint8_t> sym_bits;  // K*log2(L)
  double metric = 0.0;
  std::int64_t n_evaluations = 0;
};

// Exhaustive minimum of the residual metric over all L^K * Q candidates.
// Ties break toward the smallest (ap_index, symbol bits as integer).
MldResult classical_mld(const ChannelRealization& chan, const GsmConfig& cfg,
                        const ApCodebook& codebook);

struct DemapResult {
  std::vector<std::uint8_t> bits_symbols;
  std::vector<std::uint8_t> bits_ap;
};

// Inverse mapping of a detected (symbols, antenna pattern) pair back to bits.
DemapResult demap(std::span<const std::complex<double>> symbols,
                  std::span<const int> antennas, const ApCodebook& codebook,
                  const GsmConfig& cfg);

}  // namespace gasmld
