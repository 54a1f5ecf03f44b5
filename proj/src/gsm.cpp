#include "gasmld/gsm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gasmld {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t out = 1;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

void check_bit(std::uint8_t b) {
  if (b > 1) throw std::invalid_argument("bit value must be 0 or 1");
}

}  // namespace

int constellation_order(Constellation c) {
  switch (c) {
    case Constellation::Bpsk: return 2;
    case Constellation::Qpsk: return 4;
    case Constellation::Qam16: return 16;
  }
  throw std::invalid_argument("unknown constellation");
}

int bits_per_symbol(Constellation c) {
  switch (c) {
    case Constellation::Bpsk: return 1;
    case Constellation::Qpsk: return 2;
    case Constellation::Qam16: return 4;
  }
  throw std::invalid_argument("unknown constellation");
}

const char* constellation_name(Constellation c) {
  switch (c) {
    case Constellation::Bpsk: return "bpsk";
    case Constellation::Qpsk: return "qpsk";
    case Constellation::Qam16: return "16qam";
  }
  throw std::invalid_argument("unknown constellation");
}

std::optional<Constellation> constellation_from_name(const std::string& name) {
  if (name == "bpsk") return Constellation::Bpsk;
  if (name == "qpsk") return Constellation::Qpsk;
  if (name == "16qam" || name == "qam16") return Constellation::Qam16;
  return std::nullopt;
}

std::complex<double> map_symbol(std::span<const std::uint8_t> bits,
                                Constellation c) {
  if (static_cast<int>(bits.size()) != bits_per_symbol(c))
    throw std::invalid_argument("wrong bit count for constellation");
  for (std::uint8_t b : bits) check_bit(b);
  switch (c) {
    case Constellation::Bpsk: {
      const double v = 1.0 - 2.0 * bits[0];
      return {kInvSqrt2 * v, kInvSqrt2 * v};
    }
    case Constellation::Qpsk:
      return {kInvSqrt2 * (1.0 - 2.0 * bits[0]),
              kInvSqrt2 * (1.0 - 2.0 * bits[1])};
    case Constellation::Qam16: {
      const double scale = 1.0 / std::sqrt(10.0);
      const double re =
          (1.0 - 2.0 * bits[0]) * (2.0 - (1.0 - 2.0 * bits[2]));
      const double im =
          (1.0 - 2.0 * bits[1]) * (2.0 - (1.0 - 2.0 * bits[3]));
      return {scale * re, scale * im};
    }
  }
  throw std::invalid_argument("unknown constellation");
}

std::vector<std::uint8_t> demap_symbol(std::complex<double> point,
                                       Constellation c) {
  const int width = bits_per_symbol(c);
  const int order = constellation_order(c);
  for (int value = 0; value < order; ++value) {
    const auto bits = integer_to_bits(static_cast<std::uint64_t>(value), width);
    if (std::abs(map_symbol(bits, c) - point) <= 1e-9) return bits;
  }
  throw std::domain_error("point is not a constellation symbol");
}

std::uint64_t bits_to_integer(std::span<const std::uint8_t> bits) {
  std::uint64_t value = 0;
  for (std::uint8_t b : bits) {
    check_bit(b);
    value = (value << 1) | b;
  }
  return value;
}

std::vector<std::uint8_t> integer_to_bits(std::uint64_t value, int width) {
  std::vector<std::uint8_t> bits(width);
  for (int i = 0; i < width; ++i)
    bits[i] = static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1);
  return bits;
}

int GsmConfig::ap_bits() const {
  int bits = 0;
  while ((1 << bits) < q_aps) ++bits;
  return bits;
}

double GsmConfig::noise_var() const {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  return std::pow(10.0, -snr_db / 10.0);
}

void GsmConfig::validate() const {
  if (n_tx < 1 || n_tx > 32) throw std::invalid_argument("n_tx out of range");
  if (n_rx < 1) throw std::invalid_argument("n_rx must be positive");
  if (k_active < 1 || k_active > n_tx)
    throw std::invalid_argument("k_active must be in [1, n_tx]");
  if (!is_power_of_two(q_aps) || q_aps < 2)
    throw std::invalid_argument("q_aps must be a power of two, at least 2");
  const std::int64_t combos = binomial(n_tx, k_active);
  std::int64_t cap = 1;
  while (cap * 2 <= combos) cap *= 2;
  if (q_aps > cap)
    throw std::invalid_argument(
        "q_aps exceeds the largest power of two within C(n_tx, k_active)");
}

std::optional<ApRule> ap_rule_from_name(const std::string& name) {
  if (name == "cyclic") return ApRule::Cyclic;
  if (name == "lex") return ApRule::Lex;
  if (name == "table") return ApRule::ExplicitTable;
  return std::nullopt;
}

const char* ap_rule_name(ApRule rule) {
  switch (rule) {
    case ApRule::Cyclic: return "cyclic";
    case ApRule::Lex: return "lex";
    case ApRule::ExplicitTable: return "table";
  }
  throw std::invalid_argument("unknown ap rule");
}

ApCodebook::ApCodebook(int n_tx, int k_active,
                       std::vector<std::vector<int>> patterns)
    : n_tx_(n_tx), k_active_(k_active), patterns_(std::move(patterns)) {
  if (k_active < 1 || k_active > n_tx)
    throw std::invalid_argument("k_active must be in [1, n_tx]");
  std::vector<std::uint32_t> masks;
  for (const auto& pattern : patterns_) {
    if (static_cast<int>(pattern.size()) != k_active)
      throw std::invalid_argument("pattern must list k_active antennas");
    std::uint32_t mask = 0;
    for (int antenna : pattern) {
      if (antenna < 0 || antenna >= n_tx)
        throw std::invalid_argument("antenna index out of range");
      const std::uint32_t bit = std::uint32_t{1} << antenna;
      // Two columns on one antenna would sum two symbols on a single
      // transmit chain; activation patterns are K-subsets.
      if (mask & bit)
        throw std::invalid_argument("pattern repeats an antenna");
      mask |= bit;
    }
    masks.push_back(mask);
  }
  for (std::size_t i = 0; i < patterns_.size(); ++i)
    for (std::size_t j = i + 1; j < patterns_.size(); ++j)
      if (patterns_[i] == patterns_[j])
        throw std::invalid_argument("duplicate activation pattern");
  (void)masks;
}

ApCodebook ApCodebook::cyclic(int n_tx, int k_active, int q_aps) {
  if (q_aps < 1 || q_aps > n_tx)
    throw std::invalid_argument("cyclic rule needs q_aps <= n_tx");
  std::vector<std::vector<int>> patterns;
  for (int q = 0; q < q_aps; ++q) {
    std::vector<int> pattern(k_active);
    for (int i = 0; i < k_active; ++i) pattern[i] = (q + i) % n_tx;
    patterns.push_back(std::move(pattern));
  }
  return ApCodebook(n_tx, k_active, std::move(patterns));
}

ApCodebook ApCodebook::lex(int n_tx, int k_active, int q_aps) {
  if (binomial(n_tx, k_active) < q_aps)
    throw std::invalid_argument("q_aps exceeds the number of combinations");
  std::vector<std::vector<int>> patterns;
  std::vector<int> combo(k_active);
  for (int i = 0; i < k_active; ++i) combo[i] = i;
  while (static_cast<int>(patterns.size()) < q_aps) {
    patterns.push_back(combo);
    // Next combination in lexicographic order.
    int pos = k_active - 1;
    while (pos >= 0 && combo[pos] == n_tx - k_active + pos) --pos;
    if (pos < 0) break;
    ++combo[pos];
    for (int i = pos + 1; i < k_active; ++i) combo[i] = combo[i - 1] + 1;
  }
  if (static_cast<int>(patterns.size()) < q_aps)
    throw std::invalid_argument("combination enumeration exhausted");
  return ApCodebook(n_tx, k_active, std::move(patterns));
}

ApCodebook ApCodebook::from_table_text(const std::string& text, int n_tx,
                                       int k_active) {
  std::vector<std::vector<int>> patterns;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::vector<int> pattern;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      size_t pos = 0;
      int antenna = 0;
      try {
        antenna = std::stoi(field, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad antenna index in table");
      }
      while (pos < field.size() &&
             std::isspace(static_cast<unsigned char>(field[pos])))
        ++pos;
      if (pos != field.size())
        throw std::invalid_argument("bad antenna index in table");
      pattern.push_back(antenna);
    }
    patterns.push_back(std::move(pattern));
  }
  if (patterns.empty()) throw std::invalid_argument("empty pattern table");
  return ApCodebook(n_tx, k_active, std::move(patterns));
}

ApCodebook ApCodebook::from_table_file(const std::string& path, int n_tx,
                                       int k_active) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open pattern table " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_table_text(buf.str(), n_tx, k_active);
}

ApCodebook ApCodebook::build(const GsmConfig& cfg, ApRule rule,
                             const std::string& table_path) {
  switch (rule) {
    case ApRule::Cyclic:
      return cyclic(cfg.n_tx, cfg.k_active, cfg.q_aps);
    case ApRule::Lex:
      return lex(cfg.n_tx, cfg.k_active, cfg.q_aps);
    case ApRule::ExplicitTable: {
      ApCodebook book = from_table_file(table_path, cfg.n_tx, cfg.k_active);
      if (book.size() != cfg.q_aps)
        throw std::invalid_argument("pattern table size does not match q_aps");
      return book;
    }
  }
  throw std::invalid_argument("unknown ap rule");
}

int ApCodebook::bit_width() const {
  int bits = 0;
  while ((1 << bits) < size()) ++bits;
  return bits;
}

std::uint32_t ApCodebook::active_mask(int ap) const {
  std::uint32_t mask = 0;
  for (int antenna : patterns_.at(ap)) mask |= std::uint32_t{1} << antenna;
  return mask;
}

std::optional<int> ApCodebook::index_of_active_mask(std::uint32_t mask) const {
  for (int ap = 0; ap < size(); ++ap)
    if (active_mask(ap) == mask) return ap;
  return std::nullopt;
}

std::optional<int> ApCodebook::index_of_pattern(
    std::span<const int> antennas) const {
  for (int ap = 0; ap < size(); ++ap) {
    const auto& pattern = patterns_[ap];
    if (std::equal(pattern.begin(), pattern.end(), antennas.begin(),
                   antennas.end()))
      return ap;
  }
  return std::nullopt;
}

std::vector<std::uint8_t> ApCodebook::ap_matrix(int ap) const {
  std::vector<std::uint8_t> a(
      static_cast<std::size_t>(n_tx_) * k_active_, 0);
  const auto& pattern = patterns_.at(ap);
  for (int k = 0; k < k_active_; ++k)
    a[static_cast<std::size_t>(pattern[k]) * k_active_ + k] = 1;
  return a;
}

std::string ApCodebook::table_text() const {
  std::string out;
  for (const auto& pattern : patterns_) {
    for (int k = 0; k < k_active_; ++k) {
      if (k > 0) out += ',';
      out += std::to_string(pattern[k]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::complex<double>> codeword(
    std::span<const std::complex<double>> symbols,
    std::span<const int> antennas, int n_tx) {
  std::vector<std::complex<double>> code(n_tx, {0.0, 0.0});
  for (std::size_t k = 0; k < antennas.size(); ++k)
    code[antennas[k]] += symbols[k];
  return code;
}

double residual_metric(const ChannelRealization& chan,
                       std::span<const std::complex<double>> code) {
  double metric = 0.0;
  for (int r = 0; r < chan.n_rx; ++r) {
    std::complex<double> acc = chan.y[r];
    for (int c = 0; c < chan.n_tx; ++c) acc -= chan.h_at(r, c) * code[c];
    metric += std::norm(acc);
  }
  return metric;
}

std::pair<TransmitFrame, ChannelRealization> synthesize(
    const GsmConfig& cfg, const ApCodebook& codebook, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);

  TransmitFrame frame;
  frame.bits_symbols.resize(cfg.symbol_bits_total());
  for (auto& b : frame.bits_symbols)
    b = static_cast<std::uint8_t>(rng.uniform_below(2));
  frame.bits_ap.resize(cfg.ap_bits());
  for (auto& b : frame.bits_ap)
    b = static_cast<std::uint8_t>(rng.uniform_below(2));
  frame.ap_index = static_cast<int>(bits_to_integer(frame.bits_ap));

  const int width = cfg.bits_per_sym();
  for (int k = 0; k < cfg.k_active; ++k) {
    const std::span<const std::uint8_t> bits(
        frame.bits_symbols.data() + static_cast<std::size_t>(k) * width,
        static_cast<std::size_t>(width));
    frame.symbols.push_back(map_symbol(bits, cfg.constellation));
  }

  ChannelRealization chan;
  chan.n_rx = cfg.n_rx;
  chan.n_tx = cfg.n_tx;
  chan.noise_var = cfg.noise_var();
  chan.h.resize(static_cast<std::size_t>(cfg.n_rx) * cfg.n_tx);
  for (auto& entry : chan.h) entry = rng.complex_gaussian();

  const auto code =
      codeword(frame.symbols, codebook.pattern(frame.ap_index), cfg.n_tx);
  const double noise_amp = std::sqrt(chan.noise_var);
  chan.y.resize(cfg.n_rx);
  for (int r = 0; r < cfg.n_rx; ++r) {
    std::complex<double> acc = {0.0, 0.0};
    for (int c = 0; c < cfg.n_tx; ++c) acc += chan.h_at(r, c) * code[c];
    chan.y[r] = acc + noise_amp * rng.complex_gaussian();
  }
  return {std::move(frame), std::move(chan)};
}

MldResult classical_mld(const ChannelRealization& chan, const GsmConfig& cfg,
                        const ApCodebook& codebook) {
  const int width = cfg.bits_per_sym();
  const int total_bits = cfg.symbol_bits_total();
  const std::uint64_t symbol_combos = std::uint64_t{1} << total_bits;

  MldResult best;
  best.metric = std::numeric_limits<double>::infinity();
  std::int64_t evaluations = 0;

  std::vector<std::complex<double>> symbols(cfg.k_active);
  for (int ap = 0; ap < codebook.size(); ++ap) {
    const auto& pattern = codebook.pattern(ap);
    for (std::uint64_t s = 0; s < symbol_combos; ++s) {
      const auto bits = integer_to_bits(s, total_bits);
      for (int k = 0; k < cfg.k_active; ++k) {
        const std::span<const std::uint8_t> sym_bits(
            bits.data() + static_cast<std::size_t>(k) * width,
            static_cast<std::size_t>(width));
        symbols[k] = map_symbol(sym_bits, cfg.constellation);
      }
      const double metric =
          residual_metric(chan, codeword(symbols, pattern, cfg.n_tx));
      ++evaluations;
      // Strict inequality keeps the first minimizer in scan order, which is
      // the smallest (ap_index, symbol bits) pair.
      if (metric < best.metric) {
        best.metric = metric;
        best.symbols = symbols;
        best.ap_index = ap;
        best.sym_bits = bits;
      }
    }
  }
  best.n_evaluations = evaluations;
  return best;
}

DemapResult demap(std::span<const std::complex<double>> symbols,
                  std::span<const int> antennas, const ApCodebook& codebook,
                  const GsmConfig& cfg) {
  const auto ap = codebook.index_of_pattern(antennas);
  if (!ap) throw std::domain_error("pattern is not in the codebook");
  DemapResult out;
  out.bits_ap = integer_to_bits(static_cast<std::uint64_t>(*ap),
                                codebook.bit_width());
  for (const auto& symbol : symbols) {
    const auto bits = demap_symbol(symbol, cfg.constellation);
    out.bits_symbols.insert(out.bits_symbols.end(), bits.begin(), bits.end());
  }
  return out;
}

}  // namespace gasmld
