#include "gasmld/polynomial.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "gasmld/text.hpp"

namespace gasmld {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out))
    throw std::overflow_error("integer polynomial bound overflow");
  return out;
}

template <class Coeff>
std::string render_text(const Polynomial<Coeff>& p,
                        std::string (*fmt)(Coeff)) {
  std::string out;
  for (const auto& [mono, coeff] : p.terms()) {
    out += fmt(coeff);
    for (int idx : mono.indices()) {
      out += ' ';
      out += std::to_string(idx);
    }
    out += '\n';
  }
  return out;
}

template <class Coeff, class ParseCoeff>
Polynomial<Coeff> parse_text(const std::string& text, int n_vars,
                             ParseCoeff parse_coeff) {
  Polynomial<Coeff> p(n_vars);
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string coeff_str;
    if (!(fields >> coeff_str)) continue;
    std::uint64_t mask = 0;
    int idx = 0;
    while (fields >> idx) {
      if (idx < 0 || idx >= n_vars)
        throw std::out_of_range("variable index beyond n_vars");
      mask |= std::uint64_t{1} << idx;
    }
    if (!fields.eof()) throw std::invalid_argument("malformed term line");
    p.add_term(Monomial::from_mask(mask), parse_coeff(coeff_str));
  }
  return p;
}

}  // namespace

IntegerPolynomial quantize(const BinaryPolynomial& p, int precision_bits) {
  if (precision_bits < 0)
    throw std::invalid_argument("precision_bits must be non-negative");
  const double unit = std::ldexp(1.0, precision_bits);
  IntegerPolynomial out{Polynomial<std::int64_t>(p.n_vars()),
                        std::ldexp(1.0, -precision_bits)};
  for (const auto& [mono, coeff] : p.terms()) {
    const double scaled = coeff * unit;
    if (std::abs(scaled) >= 0x1.0p62)
      throw std::overflow_error("quantized coefficient overflow");
    out.poly.add_term(mono, std::llround(scaled));
  }
  return out;
}

std::pair<std::int64_t, std::int64_t> range_bound(
    const Polynomial<std::int64_t>& p) {
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  for (const auto& [mono, coeff] : p.terms()) {
    if (mono.is_constant()) {
      lower = checked_add(lower, coeff);
      upper = checked_add(upper, coeff);
    } else if (coeff < 0) {
      lower = checked_add(lower, coeff);
    } else {
      upper = checked_add(upper, coeff);
    }
  }
  return {lower, upper};
}

std::pair<std::int64_t, std::int64_t> exhaustive_range(
    const Polynomial<std::int64_t>& p) {
  if (p.n_vars() > 20)
    throw std::invalid_argument("exhaustive range limited to 20 variables");
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  const std::uint64_t count = std::uint64_t{1} << p.n_vars();
  for (std::uint64_t x = 0; x < count; ++x) {
    const std::int64_t v = p.eval(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

BinaryPolynomial to_real(const ComplexPolynomial& p, double imag_tol) {
  BinaryPolynomial out(p.n_vars());
  for (const auto& [mono, coeff] : p.terms()) {
    if (std::abs(coeff.imag()) > imag_tol)
      throw std::domain_error("imaginary residue exceeds tolerance");
    out.add_term(mono, coeff.real());
  }
  return out;
}

std::string to_text(const BinaryPolynomial& p) {
  return render_text<double>(p, +[](double c) { return format_double(c); });
}

std::string to_text(const Polynomial<std::int64_t>& p) {
  return render_text<std::int64_t>(
      p, +[](std::int64_t c) { return std::to_string(c); });
}

BinaryPolynomial binary_polynomial_from_text(const std::string& text,
                                             int n_vars) {
  return parse_text<double>(text, n_vars, [](const std::string& s) {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad coefficient");
    return v;
  });
}

Polynomial<std::int64_t> integer_polynomial_from_text(const std::string& text,
                                                      int n_vars) {
  return parse_text<std::int64_t>(text, n_vars, [](const std::string& s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      throw std::invalid_argument("bad coefficient");
    return v;
  });
}

}  // namespace gasmld
