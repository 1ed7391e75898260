#include <cmath>
#include <cstring>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "rentire/dist.hpp"
#include "rentire/error.hpp"
#include "rentire/stats.hpp"

using namespace rentire;

namespace {

// Empirical P(log|X| ≥ L) from n draws.
Estimate empirical_log_tail(const DistSpec& d, double L, std::size_t n, std::uint64_t seed) {
  const CoefficientStream s(d, seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += s.sample(i).log_abs >= L ? 1 : 0;
  return binomial_estimate(hits, n);
}

void check_tail(const DistSpec& d, double L, std::uint64_t seed) {
  const std::size_t n = 200000;
  const double exact = tail_probability_log(d, L);
  const auto e = empirical_log_tail(d, L, n, seed);
  CAPTURE(L);
  CAPTURE(e.value);
  CAPTURE(exact);
  CHECK(std::abs(e.value - exact) <= 4.0 * binomial_se(exact, n));
}

}  // namespace

TEST_CASE("family names round-trip") {
  for (Family f : {Family::complex_gaussian, Family::gaussian_plus_log_pareto,
                   Family::divergent_log_tail, Family::borderline_tail})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_THROWS_AS(family_from_name("cauchy"), ConfigError);
}

TEST_CASE("complex Gaussian: unit second moment, Rayleigh modulus, symmetric parts") {
  const CoefficientStream s(DistSpec::complex_gaussian(), 3);
  const std::size_t n = 200000;
  double m2 = 0.0, re2 = 0.0, im2 = 0.0, re = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = s.sample(i).value();
    m2 += std::norm(v);
    re2 += v.real() * v.real();
    im2 += v.imag() * v.imag();
    re += v.real();
  }
  // |X|² ~ Exp(1): SE of the mean is 1/sqrt(n).
  CHECK(std::abs(m2 / n - 1.0) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(re2 / n - 0.5) < 0.01);
  CHECK(std::abs(im2 / n - 0.5) < 0.01);
  CHECK(std::abs(re / n) < 4.0 * std::sqrt(0.5 / n));
  for (double r : {0.5, 1.0, 1.5}) check_tail(DistSpec::complex_gaussian(), std::log(r), 5);
  CHECK(tail_probability(DistSpec::complex_gaussian(), 1.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("divergent log tail: P(|X| >= r) = 1/log r") {
  const auto d = DistSpec::divergent_log_tail();
  for (double L : {1.5, 2.0, 10.0, 100.0}) check_tail(d, L, 7);
  CHECK(tail_probability_log(d, 4.0) == doctest::Approx(0.25));
  CHECK(tail_probability_log(d, 0.5) == 1.0);
}

TEST_CASE("borderline tail matches 1/((log r)(log log r)^alpha)") {
  const auto d = DistSpec::borderline_tail(2.0);
  for (double L : {std::exp(1.0), std::exp(1.5), std::exp(3.0)}) check_tail(d, L, 9);
  const double L = std::exp(2.0);
  CHECK(tail_probability_log(d, L) == doctest::Approx(1.0 / (L * 4.0)));
  CHECK(tail_probability_log(d, 0.9) == 1.0);
}

TEST_CASE("log-Pareto component: heavy part dominates far in the tail") {
  const auto d = DistSpec::gaussian_plus_log_pareto(1.0);
  // log|H| = U^{-1/2} exactly; far out the Gaussian part is negligible.
  for (double L : {5.0, 20.0}) {
    const auto e = empirical_log_tail(d, L, 200000, 11);
    const double heavy = std::pow(L, -2.0);
    CHECK(std::abs(e.value - heavy) <= 4.0 * binomial_se(heavy, 200000));
    CHECK(e.value <= tail_probability_log(d, L) + 4.0 * binomial_se(heavy, 200000));
  }
  // The sampler stays in log form for magnitudes no double can hold.
  const CoefficientStream s(d, 1);
  for (std::uint64_t i = 0; i < 100000; ++i) REQUIRE(std::isfinite(s.sample(i).log_abs));
}

TEST_CASE("tail probabilities are monotone and lie in [0, 1]") {
  for (const auto& d : {DistSpec::complex_gaussian(), DistSpec::gaussian_plus_log_pareto(0.5),
                        DistSpec::divergent_log_tail(), DistSpec::borderline_tail(1.0)}) {
    double prev = 1.0;
    for (double L = -3.0; L < 50.0; L += 0.25) {
      const double t = tail_probability_log(d, L);
      CHECK(t >= 0.0);
      CHECK(t <= prev);
      prev = t;
    }
  }
}

TEST_CASE("decay conditions over log-spaced radii") {
  const auto radii = log_spaced_radii(2.0, 200.0, 40);
  CHECK(radii.size() == 40);
  CHECK(std::log(radii.front()) == doctest::Approx(2.0));
  CHECK(check_decay_condition(DistSpec::gaussian_plus_log_pareto(1.0), DecayCondition::hypercyclic(1.0), radii).bounded);
  CHECK(check_decay_condition(DistSpec::complex_gaussian(), DecayCondition::hypercyclic(2.0), radii).bounded);
  CHECK_FALSE(check_decay_condition(DistSpec::divergent_log_tail(), DecayCondition::hypercyclic(1.0), radii).bounded);
  CHECK(check_decay_condition(DistSpec::divergent_log_tail(), DecayCondition::divergent(), radii).bounded);
  CHECK(check_decay_condition(DistSpec::borderline_tail(2.0), DecayCondition::borderline(2.0), radii).bounded);
  CHECK_THROWS_AS(check_decay_condition(DistSpec::complex_gaussian(), DecayCondition::divergent(), std::vector<double>{}),
                  ConfigError);
}

TEST_CASE("Gaussian |X| moment generating function against quadrature") {
  using boost::math::quadrature::gauss_kronrod;
  for (double t : {0.5, 2.0, 5.0}) {
    // |X| has density 2s·exp(−s²).
    auto f = [t](double s) { return 2.0 * s * std::exp(t * s - s * s); };
    const double oracle = gauss_kronrod<double, 61>::integrate(f, 0.0, 20.0 + t, 10, 1e-14);
    CHECK(abs_mgf(DistSpec::complex_gaussian(), t) == doctest::Approx(oracle).epsilon(1e-10));
  }
  CHECK(abs_mgf(DistSpec::complex_gaussian(), 0.0) == 1.0);
  CHECK(std::isinf(abs_mgf(DistSpec::divergent_log_tail(), 0.1)));
  CHECK_THROWS_AS(abs_mgf(DistSpec::complex_gaussian(), -1.0), ConfigError);
  CHECK(is_subgaussian(DistSpec::complex_gaussian()));
  CHECK_FALSE(is_subgaussian(DistSpec::gaussian_plus_log_pareto(3.0)));
}

TEST_CASE("streams: shift identity and determinism") {
  const CoefficientStream s(DistSpec::borderline_tail(2.0), 99);
  for (std::uint64_t k : {0, 1, 17, 1000})
    for (std::uint64_t n = 0; n < 20; ++n) {
      const auto a = s.shift(k).sample(n), b = s.sample(n + k);
      CHECK(std::memcmp(&a.log_abs, &b.log_abs, sizeof(double)) == 0);
      CHECK(a.unit == b.unit);
    }
  CHECK(sample(DistSpec::complex_gaussian(), 5, 3).log_abs == sample(DistSpec::complex_gaussian(), 5, 3).log_abs);
}

TEST_CASE("DistConfig JSON round trip and validation") {
  const DistConfig c{DistSpec::gaussian_plus_log_pareto(0.75), 12345};
  const nlohmann::json j = c;
  CHECK(j.at("family") == "gaussian_plus_log_pareto");
  CHECK(j.get<DistConfig>() == c);
  CHECK_THROWS_AS((nlohmann::json{{"family", "gaussian_plus_log_pareto"}, {"beta", -1.0}}.get<DistConfig>()),
                  ConfigError);
  CHECK_THROWS_AS((nlohmann::json{{"family", "nope"}}.get<DistConfig>()), ConfigError);
}
