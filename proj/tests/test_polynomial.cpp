#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>

#include "gasmld/polynomial.hpp"
#include "gasmld/rng.hpp"

using namespace gasmld;

namespace {

BinaryPolynomial random_poly(int n_vars, int terms, Rng& rng) {
  BinaryPolynomial p(n_vars);
  for (int i = 0; i < terms; ++i) {
    const auto mask = rng.uniform_below(std::uint64_t{1} << n_vars);
    const double coeff = (rng.uniform01() - 0.5) * 10.0;
    p.add_term(Monomial::from_mask(mask), coeff);
  }
  return p;
}

Polynomial<std::int64_t> random_int_poly(int n_vars, int terms, Rng& rng) {
  Polynomial<std::int64_t> p(n_vars);
  for (int i = 0; i < terms; ++i) {
    const auto mask = rng.uniform_below(std::uint64_t{1} << n_vars);
    const auto coeff =
        static_cast<std::int64_t>(rng.uniform_below(21)) - 10;
    p.add_term(Monomial::from_mask(mask), coeff);
  }
  return p;
}

}  // namespace

TEST_CASE("monomial product applies idempotence") {
  const Monomial a = Monomial::from_indices({0, 3});
  const Monomial b = Monomial::from_indices({0, 1});
  CHECK((a * b).indices() == std::vector<int>{0, 1, 3});
  CHECK((a * a) == a);
  CHECK(Monomial{}.degree() == 0);
  CHECK(a.degree() == 2);
}

TEST_CASE("monomial rejects out-of-range index") {
  CHECK_THROWS_AS(Monomial::from_indices({64}), std::out_of_range);
  CHECK_THROWS_AS(Monomial::from_indices({-1}), std::out_of_range);
}

TEST_CASE("addition merges coefficients and drops cancellations") {
  BinaryPolynomial a(2);
  a.add_term(Monomial::from_indices({0}), 1.0);
  BinaryPolynomial b = a;
  const BinaryPolynomial sum = a + b;
  CHECK(sum.coefficient(Monomial::from_indices({0})) == 2.0);

  BinaryPolynomial c(2);
  c.add_term(Monomial::from_indices({0, 1}), 1.0);
  c.add_term(Monomial{}, 1.0);
  BinaryPolynomial d(2);
  d.add_term(Monomial::from_indices({0, 1}), -1.0);
  const BinaryPolynomial e = c + d;
  CHECK(e.terms().size() == 1);
  CHECK(e.constant_term() == 1.0);

  const BinaryPolynomial zero(2);
  CHECK((c + zero) == c);
}

TEST_CASE("addition rejects variable-count mismatch") {
  BinaryPolynomial a(2);
  BinaryPolynomial b(3);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
}

TEST_CASE("multiplication reduces repeated variables") {
  // (x0 + 1)(x0 + x1) = 2 x0 + x0 x1 + x1
  BinaryPolynomial a(2);
  a.add_term(Monomial::from_indices({0}), 1.0);
  a.add_term(Monomial{}, 1.0);
  BinaryPolynomial b(2);
  b.add_term(Monomial::from_indices({0}), 1.0);
  b.add_term(Monomial::from_indices({1}), 1.0);
  const BinaryPolynomial prod = a * b;
  CHECK(prod.coefficient(Monomial::from_indices({0})) == 2.0);
  CHECK(prod.coefficient(Monomial::from_indices({0, 1})) == 1.0);
  CHECK(prod.coefficient(Monomial::from_indices({1})) == 1.0);
  CHECK(prod.terms().size() == 3);

  BinaryPolynomial x0(1);
  x0.add_term(Monomial::from_indices({0}), 1.0);
  CHECK((x0 * x0) == x0);
}

TEST_CASE("product evaluation equals evaluation product on all assignments") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const BinaryPolynomial a = random_poly(6, 6, rng);
    const BinaryPolynomial b = random_poly(6, 6, rng);
    const BinaryPolynomial prod = a * b;
    for (std::uint64_t x = 0; x < 64; ++x)
      CHECK(prod.eval(x) ==
            doctest::Approx(a.eval(x) * b.eval(x)).epsilon(1e-12));
  }
}

TEST_CASE("evaluation sums satisfied terms") {
  BinaryPolynomial p(2);
  p.add_term(Monomial::from_indices({0}), 2.0);
  p.add_term(Monomial::from_indices({0, 1}), 1.0);
  p.add_term(Monomial::from_indices({1}), 1.0);
  CHECK(p.eval(0b11) == 4.0);
  CHECK(p.eval(0) == 0.0);

  p.add_term(Monomial{}, -7.5);
  CHECK(p.eval(0) == -7.5);
}

TEST_CASE("evaluation is linear and multiplicative on random instances") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const BinaryPolynomial a = random_poly(8, 10, rng);
    const BinaryPolynomial b = random_poly(8, 10, rng);
    const BinaryPolynomial sum = a + b;
    const BinaryPolynomial prod = a * b;
    for (std::uint64_t x = 0; x < 256; ++x) {
      CHECK(sum.eval(x) == doctest::Approx(a.eval(x) + b.eval(x)).epsilon(1e-12));
      CHECK(prod.eval(x) ==
            doctest::Approx(a.eval(x) * b.eval(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("no stored monomial repeats an index") {
  // Structural: masks cannot repeat indices by construction; verify that
  // products of overlapping monomials stay within the variable budget.
  Rng rng(13);
  const BinaryPolynomial a = random_poly(10, 15, rng);
  const BinaryPolynomial b = random_poly(10, 15, rng);
  const BinaryPolynomial prod = a * b;
  for (const auto& [mono, coeff] : prod.terms()) {
    CHECK(mono.degree() <= 10);
    CHECK((mono.mask() >> 10) == 0);
  }
}

TEST_CASE("quantize rounds to scaled integers") {
  BinaryPolynomial p(2);
  p.add_term(Monomial::from_indices({0}), 0.3);
  p.add_term(Monomial::from_indices({1}), -1.25);
  const IntegerPolynomial q = quantize(p, 2);
  CHECK(q.scale == 0.25);
  CHECK(q.poly.coefficient(Monomial::from_indices({0})) == 1);
  CHECK(q.poly.coefficient(Monomial::from_indices({1})) == -5);
}

TEST_CASE("quantize at precision zero keeps integer coefficients") {
  BinaryPolynomial p(3);
  p.add_term(Monomial::from_indices({0, 2}), 4.0);
  p.add_term(Monomial{}, -3.0);
  const IntegerPolynomial q = quantize(p, 0);
  CHECK(q.scale == 1.0);
  CHECK(q.poly.coefficient(Monomial::from_indices({0, 2})) == 4);
  CHECK(q.poly.constant_term() == -3);
}

TEST_CASE("quantized evaluation error is bounded by terms times half scale") {
  Rng rng(14);
  const BinaryPolynomial p = random_poly(8, 12, rng);
  const int precision = 6;
  const IntegerPolynomial q = quantize(p, precision);
  const double bound =
      q.scale / 2.0 * static_cast<double>(p.terms().size()) + 1e-12;
  for (std::uint64_t x = 0; x < 256; ++x) {
    const double approx = q.real_value(q.poly.eval(x));
    CHECK(std::abs(approx - p.eval(x)) <= bound);
  }
}

TEST_CASE("range bound splits coefficients by sign") {
  Polynomial<std::int64_t> p(2);
  p.add_term(Monomial::from_indices({0, 1}), 4);
  p.add_term(Monomial::from_indices({0}), -3);
  p.add_term(Monomial{}, 2);
  const auto [lower, upper] = range_bound(p);
  CHECK(lower == -1);
  CHECK(upper == 6);

  Polynomial<std::int64_t> c(2);
  c.add_term(Monomial{}, 5);
  CHECK(range_bound(c) == std::pair<std::int64_t, std::int64_t>{5, 5});
}

TEST_CASE("brute-force extrema lie inside the range bound") {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const Polynomial<std::int64_t> p = random_int_poly(8, 10, rng);
    const auto [lower, upper] = range_bound(p);
    const auto [lo, hi] = exhaustive_range(p);
    CHECK(lower <= lo);
    CHECK(hi <= upper);
  }
}

TEST_CASE("complex polynomials with negligible imaginary parts become real") {
  ComplexPolynomial p(2);
  p.add_term(Monomial::from_indices({0}), {2.0, 1e-14});
  const BinaryPolynomial r = to_real(p);
  CHECK(r.coefficient(Monomial::from_indices({0})) == 2.0);

  ComplexPolynomial bad(2);
  bad.add_term(Monomial::from_indices({0}), {2.0, 1e-3});
  CHECK_THROWS_AS(to_real(bad), std::domain_error);
}

TEST_CASE("text round-trip is exact for integer polynomials") {
  Rng rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial<std::int64_t> p = random_int_poly(10, 12, rng);
    const Polynomial<std::int64_t> back =
        integer_polynomial_from_text(to_text(p), 10);
    CHECK(back == p);
  }
}

TEST_CASE("text format writes one term per line with indices") {
  Polynomial<std::int64_t> p(3);
  p.add_term(Monomial{}, 2);
  p.add_term(Monomial::from_indices({0, 2}), -3);
  CHECK(to_text(p) == "2\n-3 0 2\n");
}

TEST_CASE("text round-trip preserves double coefficients bit-for-bit") {
  Rng rng(17);
  const BinaryPolynomial p = random_poly(8, 10, rng);
  const BinaryPolynomial back = binary_polynomial_from_text(to_text(p), 8);
  CHECK(back == p);
}

TEST_CASE("add_term range checks variable indices") {
  BinaryPolynomial p(4);
  CHECK_THROWS_AS(p.add_term(Monomial::from_indices({4}), 1.0),
                  std::out_of_range);
}
