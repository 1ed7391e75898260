#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rentire/error.hpp"
#include "rentire/stats.hpp"

using namespace rentire;

TEST_CASE("basic sample statistics") {
  const std::vector<double> xs{1, 2, 3, 4};
  CHECK(mean(xs) == doctest::Approx(2.5));
  CHECK(sample_variance(xs) == doctest::Approx(5.0 / 3.0));
  CHECK(median(xs) == doctest::Approx(2.5));
  CHECK(median(std::vector<double>{3, 1, 2}) == 2.0);
  CHECK_THROWS_AS(mean(std::vector<double>{}), ConfigError);
  CHECK_THROWS_AS(sample_variance(std::vector<double>{1.0}), ConfigError);
}

TEST_CASE("bootstrap SE approximates sigma/sqrt(n)") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0.0, 2.0);
  std::vector<double> xs(2000);
  for (auto& x : xs) x = nd(rng);
  const double se = bootstrap_se(xs, 500, 9);
  const double analytic = std::sqrt(sample_variance(xs) / xs.size());
  CHECK(se == doctest::Approx(analytic).epsilon(0.1));
  CHECK(bootstrap_se(xs, 500, 9) == se);
}

TEST_CASE("binomial estimates and Clopper-Pearson bounds") {
  const auto e = binomial_estimate(30, 100);
  CHECK(e.value == doctest::Approx(0.3));
  CHECK(e.se == doctest::Approx(std::sqrt(0.21 / 100)));
  // Zero hits: the one-sided bound is 1 − α^{1/n}.
  CHECK(binomial_upper_bound(0, 10000, 0.95) == doctest::Approx(1.0 - std::pow(0.05, 1e-4)));
  CHECK(binomial_lower_bound(0, 100, 0.95) == 0.0);
  CHECK(binomial_lower_bound(30, 100) < 0.3);
  CHECK(binomial_upper_bound(30, 100) > 0.3);
  CHECK_THROWS_AS(binomial_estimate(0, 0), ConfigError);
}

TEST_CASE("fit_line recovers an exact line and brackets a noisy slope") {
  const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 3, 5, 7, 9};
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_se == doctest::Approx(0.0).epsilon(1e-12));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0.0, 0.1);
  std::vector<double> xs, ys;
  for (int i = 0; i < 50; ++i) {
    xs.push_back(i * 0.1);
    ys.push_back(0.5 * i * 0.1 + nd(rng));
  }
  const auto g = fit_line(xs, ys);
  CHECK(g.ci_low < 0.5);
  CHECK(g.ci_high > 0.5);
  CHECK_THROWS_AS(fit_line(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), ConfigError);
}

TEST_CASE("Estimate::within honours the SE floor") {
  const Estimate e{0.0, 0.0};
  CHECK_FALSE(e.within(1e-3, 3.0));
  CHECK(e.within(1e-3, 3.0, 1e-3));
}
