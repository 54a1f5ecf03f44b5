#pragma once

#include <bit>
#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gasmld {

// Product of distinct binary variables, stored as a bitmask over indices
// 0..63. Idempotence (x_i^2 = x_i) is the mask OR, so it can never hold a
// repeated index. The empty mask is the constant term.
class Monomial {
 public:
  constexpr Monomial() = default;

  static constexpr Monomial from_mask(std::uint64_t mask) {
    return Monomial(mask);
  }

  static Monomial from_indices(std::initializer_list<int> indices) {
    std::uint64_t mask = 0;
    for (int i : indices) {
      if (i < 0 || i >= 64) throw std::out_of_range("variable index");
      mask |= std::uint64_t{1} << i;
    }
    return Monomial(mask);
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr int degree() const { return std::popcount(mask_); }
  constexpr bool is_constant() const { return mask_ == 0; }

  // True when every variable of the monomial is 1 in the assignment.
  constexpr bool satisfied_by(std::uint64_t assignment) const {
    return (assignment & mask_) == mask_;
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::uint64_t m = mask_; m != 0; m &= m - 1)
      out.push_back(std::countr_zero(m));
    return out;
  }

  friend constexpr Monomial operator*(Monomial a, Monomial b) {
    return Monomial(a.mask_ | b.mask_);
  }

  friend constexpr auto operator<=>(Monomial, Monomial) = default;

 private:
  explicit constexpr Monomial(std::uint64_t mask) : mask_(mask) {}
  std::uint64_t mask_ = 0;
};

// Multilinear polynomial over binary variables x_0..x_{n_vars-1}. Terms are
// kept in a sorted map for deterministic iteration; coefficients that become
// exactly zero are dropped.
template <class Coeff>
class Polynomial {
 public:
  Polynomial() = default;

  explicit Polynomial(int n_vars) : n_vars_(n_vars) {
    if (n_vars < 0 || n_vars > 64)
      throw std::invalid_argument("variable count must be in [0, 64]");
  }

  int n_vars() const { return n_vars_; }
  const std::map<Monomial, Coeff>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [mono, coeff] : terms_) d = std::max(d, mono.degree());
    return d;
  }

  Coeff coefficient(Monomial mono) const {
    auto it = terms_.find(mono);
    return it == terms_.end() ? Coeff{} : it->second;
  }

  Coeff constant_term() const { return coefficient(Monomial{}); }

  void add_term(Monomial mono, Coeff coeff) {
    check_fits(mono);
    auto [it, inserted] = terms_.try_emplace(mono, coeff);
    if (!inserted) it->second += coeff;
    if (it->second == Coeff{}) terms_.erase(it);
  }

  // Assignment bit i (value 1 << i) is variable x_i.
  Coeff eval(std::uint64_t assignment) const {
    Coeff sum{};
    for (const auto& [mono, coeff] : terms_)
      if (mono.satisfied_by(assignment)) sum += coeff;
    return sum;
  }

  Polynomial& operator+=(const Polynomial& other) {
    check_same_vars(other);
    for (const auto& [mono, coeff] : other.terms_) add_term(mono, coeff);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& other) {
    check_same_vars(other);
    for (const auto& [mono, coeff] : other.terms_) add_term(mono, -coeff);
    return *this;
  }

  Polynomial& operator*=(Coeff scalar) {
    if (scalar == Coeff{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [mono, coeff] : terms_) coeff *= scalar;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    a += b;
    return a;
  }

  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    a -= b;
    return a;
  }

  friend Polynomial operator*(Polynomial p, Coeff scalar) {
    p *= scalar;
    return p;
  }

  friend Polynomial operator*(Coeff scalar, Polynomial p) {
    p *= scalar;
    return p;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same_vars(b);
    Polynomial out(a.n_vars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void check_fits(Monomial mono) const {
    const std::uint64_t allowed =
        n_vars_ == 64 ? ~std::uint64_t{0}
                      : (std::uint64_t{1} << n_vars_) - 1;
    if ((mono.mask() & ~allowed) != 0)
      throw std::out_of_range("monomial uses a variable beyond n_vars");
  }

  void check_same_vars(const Polynomial& other) const {
    if (n_vars_ != other.n_vars_)
      throw std::invalid_argument("variable-count mismatch");
  }

  int n_vars_ = 0;
  std::map<Monomial, Coeff> terms_;
};

using BinaryPolynomial = Polynomial<double>;
using ComplexPolynomial = Polynomial<std::complex<double>>;

// Integer-coefficient polynomial together with the real value of one integer
// unit. Produced by quantize; the algorithm's arithmetic stays exact in the
// integer domain and `scale` converts results back to real units.
struct IntegerPolynomial {
  Polynomial<std::int64_t> poly;
  double scale = 1.0;

  double real_value(std::int64_t v) const {
    return scale * static_cast<double>(v);
  }
};

// Coefficient-wise round(c * 2^precision_bits); scale = 2^-precision_bits.
IntegerPolynomial quantize(const BinaryPolynomial& p, int precision_bits);

// Sign-split bound: lower = constant + sum of negative non-constant
// coefficients, upper = constant + sum of positive ones. Always contains
// [min_x, max_x]; loose but overflow-checked.
std::pair<std::int64_t, std::int64_t> range_bound(
    const Polynomial<std::int64_t>& p);

// Exact min/max over all 2^n assignments; verification helper, n <= 20.
std::pair<std::int64_t, std::int64_t> exhaustive_range(
    const Polynomial<std::int64_t>& p);

// Drops imaginary parts, which must all be below imag_tol in magnitude.
BinaryPolynomial to_real(const ComplexPolynomial& p, double imag_tol = 1e-12);

// One term per line: coefficient then space-separated variable indices
// (constant term is the bare coefficient). Round-trips exactly for integer
// polynomials; doubles use shortest-exact formatting.
std::string to_text(const BinaryPolynomial& p);
std::string to_text(const Polynomial<std::int64_t>& p);
BinaryPolynomial binary_polynomial_from_text(const std::string& text,
                                             int n_vars);
Polynomial<std::int64_t> integer_polynomial_from_text(const std::string& text,
                                                      int n_vars);

}  // namespace gasmld
