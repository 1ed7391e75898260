#include "rentire/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "rentire/error.hpp"

namespace rentire {

bool Estimate::within(double target, double k, double se_floor) const {
  return std::abs(value - target) <= k * std::max(se, se_floor);
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw ConfigError("mean of an empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw ConfigError("variance needs at least two samples");
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double median(std::span<const double> xs) {
  if (xs.empty()) throw ConfigError("median of an empty sample");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double bootstrap_se(std::span<const double> xs, std::size_t resamples,
                    std::uint64_t seed) {
  if (xs.size() < 2 || resamples < 2) throw ConfigError("bootstrap needs >= 2 samples and resamples");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
  std::vector<double> means(resamples);
  for (auto& m : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += xs[pick(rng)];
    m = s / static_cast<double>(xs.size());
  }
  return std::sqrt(sample_variance(means));
}

Estimate binomial_estimate(std::size_t hits, std::size_t trials) {
  if (trials == 0) throw ConfigError("binomial estimate with zero trials");
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return {p, binomial_se(p, trials)};
}

double binomial_se(double p, std::size_t trials) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

double binomial_upper_bound(std::size_t hits, std::size_t trials, double confidence) {
  using boost::math::binomial_distribution;
  return binomial_distribution<>::find_upper_bound_on_p(
      static_cast<double>(trials), static_cast<double>(hits), 1.0 - confidence);
}

double binomial_lower_bound(std::size_t hits, std::size_t trials, double confidence) {
  using boost::math::binomial_distribution;
  return binomial_distribution<>::find_lower_bound_on_p(
      static_cast<double>(trials), static_cast<double>(hits), 1.0 - confidence);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y, double confidence) {
  if (x.size() != y.size() || x.size() < 3) throw ConfigError("fit_line needs >= 3 paired points");
  const double n = static_cast<double>(x.size());
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ConfigError("fit_line: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - fit.intercept - fit.slope * x[i];
    rss += e * e;
  }
  fit.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  const boost::math::students_t t(n - 2.0);
  const double q = boost::math::quantile(t, 0.5 + 0.5 * confidence);
  fit.ci_low = fit.slope - q * fit.slope_se;
  fit.ci_high = fit.slope + q * fit.slope_se;
  return fit;
}

}  // namespace rentire
