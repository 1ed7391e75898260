#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rentire/error.hpp"
#include "rentire/radius.hpp"

using namespace rentire;

TEST_CASE("root test for unit coefficients tends to e/n") {
  const auto prof = root_test_profile(CoefficientSource::constant(1.0), 1000);
  CHECK(prof.n_max() == 1000);
  CHECK(prof.t(100) == doctest::Approx(std::numbers::e / 100.0).epsilon(0.05));
  CHECK(prof.t(1) == doctest::Approx(1.0));
  for (double v : prof.log_t) CHECK_FALSE(std::isnan(v));
  CHECK_THROWS_AS(root_test_profile(CoefficientSource::constant(1.0), 50), ConfigError);
}

TEST_CASE("radius estimates separate entire and non-entire families") {
  const std::size_t n_max = 10000, seeds = 40;
  std::size_t gauss_ok = 0, div_big = 0, border_ok = 0;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    const auto g = radius_estimate(root_test_profile(CoefficientSource::random(DistSpec::complex_gaussian(), s), n_max), 5000);
    const auto d = radius_estimate(root_test_profile(CoefficientSource::random(DistSpec::divergent_log_tail(), s), n_max), 5000);
    const auto b = radius_estimate(root_test_profile(CoefficientSource::random(DistSpec::borderline_tail(2.0), s), n_max), 5000);
    gauss_ok += g.trailing_max < 0.05;
    div_big += d.trailing_max > 1.0;
    CHECK(d.global_max > 1.0);  // t_1 = |X_1| >= e
    border_ok += b.trailing_max < 0.1;
  }
  // Divergent law: P(max_{5000 < n ≤ 10⁴} t_n ≥ 1) from the exact product.
  const double p_div = root_test_crossing_probability(DistSpec::divergent_log_tail(), 1.0, 5001, n_max);
  CHECK(gauss_ok == seeds);
  CHECK(border_ok >= seeds - 1);
  CAPTURE(p_div);
  CHECK(std::abs(static_cast<double>(div_big) / seeds - p_div) <= 4.0 * std::sqrt(p_div * (1 - p_div) / seeds) + 1.0 / seeds);
}

TEST_CASE("radius estimate bookkeeping") {
  RootTestProfile p;
  for (int n = 1; n <= 200; ++n) {
    p.log_abs.push_back(0.0);
    p.log_t.push_back(n == 37 ? 2.0 : -1.0 - 0.001 * n);
  }
  const auto e = radius_estimate(p, 50);
  CHECK(e.global_argmax == 37);
  CHECK(e.global_max == doctest::Approx(std::exp(2.0)));
  CHECK(e.trailing_max == doctest::Approx(std::exp(-1.0 - 0.151)));
  CHECK_THROWS_AS(radius_estimate(p, 0), ConfigError);
  CHECK_THROWS_AS(radius_estimate(p, 101), ConfigError);
}

TEST_CASE("Borel-Cantelli counter") {
  CHECK(borel_cantelli_counter(CoefficientSource::constant(1.0), 1.0, 10000).count == 0);
  CHECK(std::isnan(borel_cantelli_counter(CoefficientSource::constant(1.0), 1.0, 100).expected));
  for (std::uint64_t s = 0; s < 20; ++s)
    CHECK(borel_cantelli_counter(CoefficientSource::random(DistSpec::complex_gaussian(), s), 1.0, 10000).count == 0);

  // Divergent law: hit frequency over seeds against 1 − Π(1 − P(|X| ≥ (Mn)^n)).
  const auto dist = DistSpec::divergent_log_tail();
  const std::size_t n_max = 5000, seeds = 400;
  std::size_t any = 0;
  double total = 0.0, expected = 0.0;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    const auto c = borel_cantelli_counter(CoefficientSource::random(dist, s), 1.0, n_max);
    any += c.count > 0;
    total += static_cast<double>(c.count);
    expected = c.expected;
  }
  const double p = borel_cantelli_hit_probability(dist, 1.0, 2, n_max);
  CAPTURE(p);
  CHECK(std::abs(static_cast<double>(any) / seeds - p) <= 3.0 * std::sqrt(p * (1 - p) / seeds));
  // E count = Σ 1/(n log n) over 2 ≤ n ≤ n_max.
  double oracle = 0.0;
  for (std::size_t n = 2; n <= n_max; ++n) oracle += 1.0 / (n * std::log(static_cast<double>(n)));
  CHECK(expected == doctest::Approx(oracle).epsilon(1e-12));
  const double mean = total / seeds;
  CHECK(mean > oracle / 3.0);
  CHECK(mean < oracle * 3.0);

  const auto src = CoefficientSource::random(dist, 3);
  CHECK(borel_cantelli_counter(src, 1.0, 1000).count <= borel_cantelli_counter(src, 1.0, 4000).count);
  CHECK_THROWS_AS(borel_cantelli_counter(src, 0.0, 100), ConfigError);
}

TEST_CASE("exact crossing probabilities") {
  // Single index: P(log|X| ≥ log level + log 1!) for the divergent law is 1/log(level).
  CHECK(root_test_crossing_probability(DistSpec::divergent_log_tail(), std::exp(4.0), 1, 1) == doctest::Approx(0.25));
  CHECK(borel_cantelli_hit_probability(DistSpec::complex_gaussian(), 1.0, 2, 10000) < 1e-3);
  CHECK_THROWS_AS(root_test_crossing_probability(DistSpec::complex_gaussian(), 1.0, 0, 5), ConfigError);
}
