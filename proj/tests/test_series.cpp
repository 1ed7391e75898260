#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>

#include "doctest.h"
#include "rentire/error.hpp"
#include "rentire/radius.hpp"
#include "rentire/random.hpp"
#include "rentire/series.hpp"

using namespace rentire;
using cd = std::complex<double>;

TEST_CASE("Poisson weights sum to one") {
  for (double r : {0.5, 5.0, 50.0, 280.0}) {
    double s = 0.0;
    for (std::size_t n = 0; n < 2000; ++n) s += std::exp(log_poisson_weight(n, r));
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(log_poisson_weight(0, 0.0) == 0.0);
  CHECK(std::isinf(log_poisson_weight(3, 0.0)));
}

TEST_CASE("constant coefficients give exp(z)") {
  SeriesHandle h(CoefficientSource::constant(1.0));
  for (double r : {0.0, 1.0, 10.0, 100.0, 300.0})
    for (double th : {0.0, 0.7, 2.0, -3.0}) {
      const cd z = std::polar(r, th);
      const auto e = h.evaluate_scaled(0, z);
      const cd expect = std::exp(z - r);
      CHECK(std::abs(e.scaled_value - expect) < 1e-11);
      CHECK(e.log_scale == r);
      CHECK(e.tail_bound < 1e-11);
    }
  // Every derivative of exp is exp.
  const cd z{3.0, -4.0};
  CHECK(std::abs(h.evaluate_scaled(5, z).scaled_value - h.evaluate_scaled(0, z).scaled_value) < 1e-15);
}

TEST_CASE("deterministic polynomial and its derivatives") {
  // f(z) = 1 + 2z + 3z²/2 + 4z³/6.
  SeriesHandle h(CoefficientSource::fixed({1.0, 2.0, 3.0, 4.0}));
  const cd z{0.5, 1.25};
  const cd f = 1.0 + 2.0 * z + 1.5 * z * z + (4.0 / 6.0) * z * z * z;
  const cd f1 = 2.0 + 3.0 * z + 2.0 * z * z;
  const cd f2 = 3.0 + 4.0 * z;
  CHECK(std::abs(h.evaluate_scaled(0, z).raw() - f) < 1e-13);
  CHECK(std::abs(h.evaluate_scaled(1, z).raw() - f1) < 1e-13);
  CHECK(std::abs(h.evaluate_scaled(2, z).raw() - f2) < 1e-13);
  CHECK(std::abs(h.evaluate_scaled(4, z).raw()) == 0.0);
}

TEST_CASE("FFT circle kernel matches direct Horner evaluation") {
  for (std::size_t len : {1u, 17u, 64u, 100u, 300u}) {
    std::vector<cd> c(len);
    for (std::size_t n = 0; n < len; ++n)
      c[n] = {counter_uniform(1, n, 0) - 0.5, counter_uniform(1, n, 1) - 0.5};
    for (std::size_t m : {16u, 64u, 256u}) {
      const auto a = circle_values_fft(c, m);
      const auto b = circle_values_direct(c, m);
      REQUIRE(a.size() == m);
      double err = 0.0;
      for (std::size_t j = 0; j < m; ++j) err = std::max(err, std::abs(a[j] - b[j]));
      CAPTURE(len);
      CAPTURE(m);
      CHECK(err < 1e-12 * static_cast<double>(len));
    }
  }
  CHECK_THROWS_AS(circle_values_fft(std::vector<cd>{1.0}, 0), ConfigError);
}

TEST_CASE("circle samples agree with pointwise evaluation") {
  SeriesHandle h(CoefficientSource::random(DistSpec::complex_gaussian(), 4));
  const double r = 40.0;
  const auto cs = h.circle_samples(0, r);
  const std::size_t m = cs.values.size();
  CHECK(m == grid_size_for(cs.truncation_index));
  for (std::size_t j : {std::size_t{0}, m / 3, m - 1}) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    CHECK(std::abs(cs.values[j] - h.evaluate_scaled(0, std::polar(r, th)).scaled_value) < 1e-12);
  }
  CHECK_THROWS_AS(h.circle_samples(0, r, 24), ConfigError);
  CHECK_THROWS_AS(h.circle_samples(0, r, 8), ConfigError);
  CHECK_NOTHROW(h.circle_samples(0, r, 16));
}

TEST_CASE("argument validation") {
  SeriesHandle h(CoefficientSource::constant(1.0));
  CHECK_THROWS_AS(h.evaluate_scaled(0, cd{std::nan(""), 0.0}), ConfigError);
  CHECK_THROWS_AS(h.evaluate_scaled(0, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(h.evaluate_scaled(0, 1.0, 2.0), ConfigError);
  CHECK_THROWS_AS(truncation_index(CoefficientSource::constant(1.0), 200.0, 1e-12, {100, 0}),
                  TruncationError);
}

TEST_CASE("reported tail bound covers the change from a tighter tolerance") {
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    for (const auto& d : {DistSpec::complex_gaussian(), DistSpec::gaussian_plus_log_pareto(1.0)}) {
      SeriesHandle h(CoefficientSource::random(d, seed));
      const cd z = std::polar(25.0, 1.0);
      const auto loose = h.evaluate_scaled(0, z, 1e-6);
      const auto tight = h.evaluate_scaled(0, z, 1e-15);
      CHECK(loose.truncation_index <= tight.truncation_index);
      CHECK(std::abs(loose.scaled_value - tight.scaled_value) <= loose.tail_bound + tight.tail_bound + 1e-14);
    }
}

TEST_CASE("divergent stream: truncation failure rate matches the exact crossing probability") {
  // At r = 1 a term reaches 1 exactly when log|X_n| ≥ log n!. The scan
  // starts past the floor index 16 and runs to the verify horizon.
  const auto d = DistSpec::divergent_log_tail();
  const std::size_t horizon = 200000, seeds = 60;
  const TruncationLimits lim{horizon, horizon};
  std::size_t thrown = 0;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    try {
      truncation_index(CoefficientSource::random(d, s), 1.0, 1e-12, lim);
    } catch (const TruncationError&) {
      ++thrown;
    }
  }
  const double p = root_test_crossing_probability(d, 1.0, 17, horizon);
  CAPTURE(p);
  CAPTURE(thrown);
  CHECK(std::abs(static_cast<double>(thrown) / seeds - p) <= 4.0 * std::sqrt(p * (1 - p) / seeds));
  CHECK(default_limits(CoefficientSource::random(d, 0)).verify_horizon > 0);
  CHECK(default_limits(CoefficientSource::random(DistSpec::complex_gaussian(), 0)).verify_horizon == 0);
}

TEST_CASE("block decomposition: far blocks are negligible, triangle inequality holds") {
  const std::size_t R = 20, seeds = 100;
  std::size_t small = 0;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    SeriesHandle h(CoefficientSource::random(DistSpec::complex_gaussian(), s));
    const auto sups = h.block_decompose(R, 2);
    REQUIRE(sups.size() == 3);
    if (sups[1] + sups[2] < 1e-3 * sups[0]) ++small;
    const auto cs = h.circle_samples(0, static_cast<double>(R), 256);
    double sup = 0.0;
    for (const auto& v : cs.values) sup = std::max(sup, std::abs(v));
    CHECK(sup <= sups[0] + sups[1] + sups[2] + cs.tail_bound + 1e-12);
  }
  CHECK(small >= 95);
  SeriesHandle h(CoefficientSource::constant(1.0));
  CHECK_THROWS_AS(h.block_decompose(0, 1), ConfigError);
}

TEST_CASE("shifted handles reproduce derivatives bit for bit") {
  const auto src = CoefficientSource::random(DistSpec::borderline_tail(2.0), 12);
  SeriesHandle h(src);
  const cd z = std::polar(7.0, 0.3);
  for (std::size_t k : {1u, 5u, 40u}) {
    SeriesHandle g = h.shifted(k);
    const cd a = g.evaluate_scaled(0, z).scaled_value;
    const cd b = h.evaluate_scaled(k, z).scaled_value;
    CHECK(std::memcmp(&a, &b, sizeof(cd)) == 0);
  }
}
