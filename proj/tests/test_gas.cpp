#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "gasmld/gas.hpp"
#include "gasmld/structured.hpp"

using namespace gasmld;

namespace {

IntegerPolynomial make_integer_poly(int n_vars,
                                    std::vector<std::pair<Monomial, std::int64_t>> terms,
                                    double scale = 1.0) {
  IntegerPolynomial p;
  p.poly = Polynomial<std::int64_t>(n_vars);
  for (const auto& [mono, coeff] : terms) p.poly.add_term(mono, coeff);
  p.scale = scale;
  return p;
}

BinaryPolynomial as_exact(const IntegerPolynomial& p) {
  BinaryPolynomial out(p.poly.n_vars());
  for (const auto& [mono, coeff] : p.poly.terms())
    out.add_term(mono, static_cast<double>(coeff) * p.scale);
  return out;
}

// Deterministic stand-in sampler: replays a scripted list of outcomes and
// records the rotation counts it was asked to run.
class ScriptedSampler final : public GroverSampler {
 public:
  ScriptedSampler(int n_vars, std::vector<std::uint64_t> script)
      : n_vars_(n_vars), script_(std::move(script)) {}

  int num_vars() const override { return n_vars_; }

  std::uint64_t sample(std::int64_t threshold, std::int64_t rotations,
                       Rng& rng) override {
    (void)threshold;
    (void)rng;
    rotations_seen_.push_back(rotations);
    const std::uint64_t x = script_[std::min(cursor_, script_.size() - 1)];
    ++cursor_;
    return x;
  }

  const std::vector<std::int64_t>& rotations_seen() const {
    return rotations_seen_;
  }

 private:
  int n_vars_;
  std::vector<std::uint64_t> script_;
  std::size_t cursor_ = 0;
  std::vector<std::int64_t> rotations_seen_;
};

}  // namespace

TEST_CASE("value-register width fits the shifted coefficient range") {
  // 4*x0*x1 - 3*x0 + 2 over {0,1}^2 spans [-1, 6]: five bits of headroom
  // would waste a qubit, four suffice (2^3 = 8 > 7).
  const auto p = make_integer_poly(
      2, {{Monomial::from_indices({0, 1}), 4},
          {Monomial::from_indices({0}), -3},
          {Monomial::from_mask(0), 2}});
  CHECK(choose_m(p) == 4);
  CHECK(choose_m(p, 2) == 6);

  // A constant objective has zero span; one bit is the floor.
  const auto c = make_integer_poly(2, {{Monomial::from_mask(0), 5}});
  CHECK(choose_m(c) == 1);
}

TEST_CASE("rotation counts are uniform below the ceiling of k") {
  Rng rng(123);
  SUBCASE("k below one rotation always yields zero") {
    for (int i = 0; i < 100; ++i)
      CHECK(sample_rotation_count(1.0, rng) == 0);
  }
  SUBCASE("k slightly above one reaches both zero and one") {
    std::array<int, 2> seen{};
    for (int i = 0; i < 1000; ++i) {
      const std::int64_t r = sample_rotation_count(8.0 / 7.0, rng);
      REQUIRE(r >= 0);
      REQUIRE(r <= 1);
      ++seen[static_cast<std::size_t>(r)];
    }
    CHECK(seen[0] > 0);
    CHECK(seen[1] > 0);
  }
  SUBCASE("k = 3 is uniform over {0, 1, 2}") {
    std::array<double, 3> counts{};
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
      counts[static_cast<std::size_t>(sample_rotation_count(3.0, rng))] += 1;
    double chi2 = 0;
    const double expected = draws / 3.0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < 13.8);  // chi-square, 2 dof, upper 0.1% point
  }
  SUBCASE("integer k excludes k itself") {
    for (int i = 0; i < 10000; ++i) CHECK(sample_rotation_count(64.0, rng) <= 63);
  }
  SUBCASE("k below one is rejected") {
    CHECK_THROWS_AS(sample_rotation_count(0.5, rng), std::invalid_argument);
  }
}

TEST_CASE("thresholds only move down and only on strict improvement") {
  // Objective over 2 vars: values E(0)=7, E(1)=3, E(2)=3, E(3)=1.
  const auto p = make_integer_poly(
      2, {{Monomial::from_mask(0), 7},
          {Monomial::from_indices({0}), -4},
          {Monomial::from_indices({1}), -4},
          {Monomial::from_indices({0, 1}), 2}});
  ScriptedSampler sampler(2, {1, 2, 2, 3, 3, 3});
  GasParams params;
  params.seed = 9;
  params.termination.patience = 3;
  params.m = 5;
  const GasResult result = run_gas(p, as_exact(p), sampler, params);

  std::int64_t threshold = result.initial_value_int;
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    const TraceRecord& rec = result.trace[i];
    CHECK(rec.iteration == static_cast<std::int64_t>(i) + 1);
    CHECK(rec.threshold_after <= threshold);
    if (rec.improved) {
      CHECK(rec.measured_value < threshold);
      CHECK(rec.threshold_after == rec.measured_value);
    } else {
      CHECK(rec.measured_value >= threshold);
      CHECK(rec.threshold_after == threshold);
    }
    threshold = rec.threshold_after;
  }
  CHECK(result.best_value_int == 1);
  CHECK(result.best_x == 3);
  CHECK(result.stop_reason == StopReason::Patience);
}

TEST_CASE("query accounting sums rotations and counts every dissipative sample") {
  const auto p = make_integer_poly(
      2, {{Monomial::from_mask(0), 7},
          {Monomial::from_indices({0}), -4},
          {Monomial::from_indices({1}), -4},
          {Monomial::from_indices({0, 1}), 2}});
  ScriptedSampler sampler(2, {1, 3});
  GasParams params;
  params.seed = 4;
  params.m = 5;
  params.termination.patience = 2;
  const GasResult result = run_gas(p, as_exact(p), sampler, params);

  std::int64_t rotation_sum = 0;
  for (const TraceRecord& rec : result.trace) rotation_sum += rec.rotations;
  CHECK(result.qcqd == rotation_sum);
  CHECK(result.qccd == static_cast<std::int64_t>(result.trace.size()) + 1);
  CHECK(result.trace.size() == sampler.rotations_seen().size());
}

TEST_CASE("growth factor schedules longer rotations after failures") {
  // Scripted non-improving measurements: k grows by 8/7 each round (capped at
  // sqrt(2^n) = 4 here), so the ceiling of admissible rotation counts must
  // eventually exceed one.
  const auto p = make_integer_poly(4, {{Monomial::from_indices({0}), 1}});
  ScriptedSampler sampler(4, {1});  // E(1)=1; initial draw may be anything
  GasParams params;
  params.seed = 2;
  params.m = 3;
  params.termination.patience = 40;
  params.termination.max_qcqd = 1000000;  // let patience end the run
  const GasResult result = run_gas(p, as_exact(p), sampler, params);
  CHECK(result.stop_reason == StopReason::Patience);
  const auto& seen = sampler.rotations_seen();
  CHECK(*std::max_element(seen.begin(), seen.end()) >= 2);
}

TEST_CASE("rotation budget halts the search") {
  const auto p = make_integer_poly(1, {{Monomial::from_indices({0}), 1}});
  ScriptedSampler sampler(1, {1});
  GasParams params;
  params.seed = 2;
  params.m = 3;
  params.termination.patience = 1000000;
  params.termination.max_qcqd = 5;
  const GasResult result = run_gas(p, as_exact(p), sampler, params);
  CHECK(result.stop_reason == StopReason::RotationBudget);
  CHECK(result.qcqd >= 5);
}

TEST_CASE("target termination stops as soon as the threshold reaches it") {
  const auto p = make_integer_poly(
      2, {{Monomial::from_mask(0), 7},
          {Monomial::from_indices({0}), -4},
          {Monomial::from_indices({1}), -4},
          {Monomial::from_indices({0, 1}), 2}});
  SUBCASE("target found on a later iteration") {
    ScriptedSampler sampler(2, {1, 3});
    GasParams params;
    params.seed = 11;
    params.m = 5;
    params.termination.target = 1;
    const GasResult result = run_gas(p, as_exact(p), sampler, params);
    CHECK(result.stop_reason == StopReason::TargetReached);
    CHECK(result.best_value_int == 1);
    // Either the initial draw already met the target (empty trace) or the
    // search ended exactly when the scripted x = 3 measurement arrived.
    if (result.trace.empty()) {
      CHECK(result.initial_value_int == 1);
    } else {
      CHECK(result.trace.back().measured_value == 1);
    }
  }
  SUBCASE("initial sample already at target leaves an empty trace") {
    ScriptedSampler sampler(2, {0});
    GasParams params;
    params.m = 5;
    params.termination.target = 10;  // every value qualifies
    const GasResult result = run_gas(p, as_exact(p), sampler, params);
    CHECK(result.stop_reason == StopReason::TargetReached);
    CHECK(result.trace.empty());
    CHECK(result.qccd == 1);
    CHECK(result.qcqd == 0);
    CHECK(result.best_value_int == result.initial_value_int);
  }
}

TEST_CASE("reported best value uses the unquantized objective") {
  // Quantized and exact objectives from one quantization: scale applies.
  BinaryPolynomial exact(1);
  exact.add_term(Monomial::from_indices({0}), -0.75);
  exact.add_term(Monomial::from_mask(0), 0.5);
  const IntegerPolynomial quant = quantize(exact, 2);
  ScriptedSampler sampler(1, {1});
  GasParams params;
  params.m = 4;
  params.termination.target = quant.poly.eval(1);
  const GasResult result = run_gas(quant, exact, sampler, params);
  CHECK(result.best_x == 1);
  CHECK(result.best_value == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(result.best_value_int == quant.poly.eval(1));
}

TEST_CASE("default budgets scale with the square root of the search space") {
  // n = 4: patience ceil(sqrt(16)) = 4, budget ceil(10*sqrt(16)) = 40.
  const auto p = make_integer_poly(4, {{Monomial::from_indices({0}), 1}});
  ScriptedSampler sampler(4, {1});
  GasParams params;
  params.seed = 3;
  params.m = 3;
  const GasResult result = run_gas(p, as_exact(p), sampler, params);
  // The scripted sampler never improves below E(1)=1 once threshold is 1, so
  // patience (4 consecutive misses) fires long before the 40-rotation budget.
  CHECK(result.stop_reason == StopReason::Patience);
  CHECK(result.trace.size() >= 4);
}

TEST_CASE("runs are reproducible bit for bit with a real sampler") {
  Rng gen(2024);
  BinaryPolynomial objective(5);
  for (int t = 0; t < 8; ++t) {
    const std::uint64_t mask = gen.next() & 0x1f;
    objective.add_term(Monomial::from_mask(mask),
                       gen.uniform01() * 8.0 - 4.0);
  }
  const IntegerPolynomial quant = quantize(objective, 6);

  auto run_once = [&]() {
    StructuredSampler sampler(quant.poly, choose_m(quant));
    GasParams params;
    params.seed = 77;
    return run_gas(quant, objective, sampler, params);
  };
  const GasResult a = run_once();
  const GasResult b = run_once();
  CHECK(a.best_x == b.best_x);
  CHECK(a.best_value == b.best_value);
  CHECK(a.qcqd == b.qcqd);
  CHECK(a.qccd == b.qccd);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].rotations == b.trace[i].rotations);
    CHECK(a.trace[i].measured_x == b.trace[i].measured_x);
    CHECK(a.trace[i].measured_value == b.trace[i].measured_value);
    CHECK(a.trace[i].threshold_after == b.trace[i].threshold_after);
    CHECK(a.trace[i].improved == b.trace[i].improved);
  }
}

TEST_CASE("structured sampler drives the search to the true minimum") {
  // Deterministic small instance: minimum is reachable and the target stop
  // certifies it.
  BinaryPolynomial objective(6);
  Rng gen(31);
  for (int t = 0; t < 10; ++t) {
    const std::uint64_t mask = gen.next() & 0x3f;
    objective.add_term(Monomial::from_mask(mask),
                       gen.uniform01() * 10.0 - 5.0);
  }
  const IntegerPolynomial quant = quantize(objective, 6);
  const auto [lo, hi] = exhaustive_range(quant.poly);
  StructuredSampler sampler(quant.poly, choose_m(quant));
  GasParams params;
  params.seed = 5150;
  params.termination.target = lo;
  params.termination.max_qcqd = 1000000;
  params.termination.patience = 1000000;
  const GasResult result = run_gas(quant, objective, sampler, params);
  CHECK(result.stop_reason == StopReason::TargetReached);
  CHECK(result.best_value_int == lo);
  CHECK(result.best_value ==
        doctest::Approx(objective.eval(result.best_x)).epsilon(1e-12));
}
