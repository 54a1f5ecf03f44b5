#include "gasmld/encoder.hpp"

#include <bit>
#include <sstream>

namespace gasmld {

namespace {

ComplexPolynomial constant_poly(int n_vars, std::complex<double> value) {
  ComplexPolynomial p(n_vars);
  p.add_term(Monomial{}, value);
  return p;
}

// x_var or (1 - x_var) as a polynomial.
ComplexPolynomial bit_factor(int n_vars, int var, bool set) {
  ComplexPolynomial p(n_vars);
  if (set) {
    p.add_term(Monomial::from_indices({var}), 1.0);
  } else {
    p.add_term(Monomial{}, 1.0);
    p.add_term(Monomial::from_indices({var}), -1.0);
  }
  return p;
}

ComplexPolynomial conjugated(const ComplexPolynomial& p) {
  ComplexPolynomial out(p.n_vars());
  for (const auto& [mono, coeff] : p.terms())
    out.add_term(mono, std::conj(coeff));
  return out;
}

std::vector<std::uint32_t> excluded_k_subsets(const VariableLayout& layout,
                                              const ApCodebook& codebook) {
  std::vector<std::uint32_t> allowed;
  for (int ap = 0; ap < codebook.size(); ++ap)
    allowed.push_back(codebook.active_mask(ap));

  std::vector<std::uint32_t> excluded;
  const std::uint32_t all = (std::uint32_t{1} << layout.n_tx) - 1;
  for (std::uint32_t mask = 0; mask <= all; ++mask) {
    if (std::popcount(mask) != codebook.k_active()) continue;
    bool found = false;
    for (std::uint32_t a : allowed) found |= (a == mask);
    if (!found) excluded.push_back(mask);
  }
  return excluded;
}

}  // namespace

std::vector<ComplexPolynomial> codeword_polynomials(
    const VariableLayout& layout, Constellation constellation) {
  const int n = layout.n();
  const int width = bits_per_symbol(constellation);
  const int order = constellation_order(constellation);

  std::vector<ComplexPolynomial> entries;
  entries.reserve(layout.n_tx);
  for (int antenna = 0; antenna < layout.n_tx; ++antenna) {
    // Multilinear interpolation of the symbol map over the antenna's bit
    // block: sum over bit patterns of value * prod(x or 1-x).
    ComplexPolynomial symbol(n);
    for (int value = 0; value < order; ++value) {
      const auto bits =
          integer_to_bits(static_cast<std::uint64_t>(value), width);
      ComplexPolynomial term =
          constant_poly(n, map_symbol(bits, constellation));
      for (int b = 0; b < width; ++b)
        term = term * bit_factor(n, layout.symbol_var(antenna, b),
                                 bits[b] != 0);
      symbol += term;
    }
    ComplexPolynomial activation(n);
    activation.add_term(
        Monomial::from_indices({layout.activation_var(antenna)}), 1.0);
    entries.push_back(symbol * activation);
  }
  return entries;
}

BinaryPolynomial norm_objective(const ChannelRealization& chan,
                                const VariableLayout& layout,
                                Constellation constellation) {
  const int n = layout.n();
  const auto entries = codeword_polynomials(layout, constellation);

  ComplexPolynomial total(n);
  for (int r = 0; r < chan.n_rx; ++r) {
    ComplexPolynomial residual = constant_poly(n, chan.y[r]);
    for (int i = 0; i < chan.n_tx; ++i)
      residual -= chan.h_at(r, i) * entries[i];
    total += residual * conjugated(residual);
  }
  return to_real(total, 1e-12);
}

BinaryPolynomial cardinality_penalty(const VariableLayout& layout,
                                     int k_active) {
  BinaryPolynomial count(layout.n());
  count.add_term(Monomial{}, -static_cast<double>(k_active));
  for (int i = 0; i < layout.n_tx; ++i)
    count.add_term(Monomial::from_indices({layout.activation_var(i)}), 1.0);
  return count * count;
}

BinaryPolynomial exclusion_penalty(const VariableLayout& layout,
                                   const ApCodebook& codebook) {
  BinaryPolynomial penalty(layout.n());
  for (std::uint32_t subset : excluded_k_subsets(layout, codebook)) {
    std::uint64_t mono = 0;
    for (int i = 0; i < layout.n_tx; ++i)
      if (subset & (std::uint32_t{1} << i))
        mono |= std::uint64_t{1} << layout.activation_var(i);
    penalty.add_term(Monomial::from_mask(mono), 1.0);
  }
  return penalty;
}

MldProblem build_objective(const ChannelRealization& chan,
                           const GsmConfig& cfg, const ApCodebook& codebook,
                           double lambda1, double lambda2,
                           int precision_bits) {
  if (lambda1 <= 0) throw std::invalid_argument("lambda1 must be positive");
  const VariableLayout layout{cfg.n_tx, cfg.bits_per_sym()};

  BinaryPolynomial objective = norm_objective(chan, layout, cfg.constellation);
  objective += lambda1 * cardinality_penalty(layout, cfg.k_active);

  const BinaryPolynomial exclusion = exclusion_penalty(layout, codebook);
  if (lambda2 < 0) lambda2 = exclusion.empty() ? 0.0 : lambda1;
  if (lambda2 > 0 && !exclusion.empty()) objective += lambda2 * exclusion;

  MldProblem problem{cfg,     codebook, chan,
                     layout,  lambda1,  lambda2,
                     precision_bits, objective,
                     quantize(objective, precision_bits)};
  return problem;
}

DecodedAssignment decode_assignment(std::uint64_t x,
                                    const VariableLayout& layout,
                                    const ApCodebook& codebook,
                                    Constellation constellation) {
  DecodedAssignment out;
  std::uint32_t active = 0;
  for (int i = 0; i < layout.n_tx; ++i)
    if ((x >> layout.activation_var(i)) & 1) active |= std::uint32_t{1} << i;

  if (std::popcount(active) != codebook.k_active()) return out;
  const auto ap = codebook.index_of_active_mask(active);
  if (!ap) return out;

  out.valid = true;
  out.ap_index = *ap;
  out.bits_ap = integer_to_bits(static_cast<std::uint64_t>(*ap),
                                codebook.bit_width());
  const int width = layout.bits_per_sym;
  for (int antenna : codebook.pattern(*ap)) {
    std::vector<std::uint8_t> bits(width);
    for (int b = 0; b < width; ++b)
      bits[b] = static_cast<std::uint8_t>(
          (x >> layout.symbol_var(antenna, b)) & 1);
    out.symbols.push_back(map_symbol(bits, constellation));
    out.bits_symbols.insert(out.bits_symbols.end(), bits.begin(), bits.end());
  }
  return out;
}

std::uint64_t encode_candidate(int ap_index,
                               std::span<const std::uint8_t> bits_symbols,
                               const VariableLayout& layout,
                               const ApCodebook& codebook) {
  const int width = layout.bits_per_sym;
  const auto& pattern = codebook.pattern(ap_index);
  if (bits_symbols.size() != pattern.size() * static_cast<std::size_t>(width))
    throw std::invalid_argument("symbol bit count does not match pattern");

  std::uint64_t x = 0;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    x |= std::uint64_t{1} << layout.activation_var(pattern[k]);
    for (int b = 0; b < width; ++b)
      if (bits_symbols[k * width + b])
        x |= std::uint64_t{1} << layout.symbol_var(pattern[k], b);
  }
  return x;
}

std::uint64_t encode_frame(const TransmitFrame& frame,
                           const VariableLayout& layout,
                           const ApCodebook& codebook) {
  return encode_candidate(frame.ap_index, frame.bits_symbols, layout,
                          codebook);
}

std::string describe(const MldProblem& problem) {
  std::ostringstream out;
  out << "variables: " << problem.layout.n() << " ("
      << problem.layout.n_tx << " antennas x " << problem.layout.bits_per_sym
      << " symbol bits + " << problem.layout.n_tx << " activation bits)\n"
      << "lambda1: " << problem.lambda1 << "  lambda2: " << problem.lambda2
      << "  precision_bits: " << problem.precision_bits << "\n"
      << "objective terms (" << problem.objective.terms().size() << "):\n"
      << to_text(problem.objective)
      << "quantized terms (scale " << problem.quantized.scale << "):\n"
      << to_text(problem.quantized.poly);
  return out.str();
}

}  // namespace gasmld
