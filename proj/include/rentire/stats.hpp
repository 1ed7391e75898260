#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace rentire {

/// A Monte Carlo estimate and its standard error.
struct Estimate {
  double value = 0.0;
  double se = 0.0;

  /// |value − target| ≤ k·se, with se floored at `se_floor`.
  bool within(double target, double k, double se_floor = 0.0) const;
};

double mean(std::span<const double> xs);
/// Unbiased (n − 1) sample variance.
double sample_variance(std::span<const double> xs);
double median(std::span<const double> xs);

/// Standard error of the mean by nonparametric bootstrap. Deterministic in
/// `seed`; resampling is done serially so the result is thread-count free.
double bootstrap_se(std::span<const double> xs, std::size_t resamples,
                    std::uint64_t seed);

/// Binomial proportion estimate with SE sqrt(p̂(1 − p̂)/n).
Estimate binomial_estimate(std::size_t hits, std::size_t trials);

/// Standard error of a proportion under a hypothesized probability p.
double binomial_se(double p, std::size_t trials);

/// One-sided Clopper–Pearson upper bound at the given confidence. For zero
/// hits this is 1 − (1 − conf)^{1/n} ≈ 3/n at 95% (the rule of three).
double binomial_upper_bound(std::size_t hits, std::size_t trials,
                            double confidence = 0.95);
double binomial_lower_bound(std::size_t hits, std::size_t trials,
                            double confidence = 0.95);

/// Ordinary least squares y ≈ intercept + slope·x with a two-sided
/// Student-t confidence interval on the slope.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   double confidence = 0.95);

}  // namespace rentire
