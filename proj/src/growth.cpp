#include "rentire/growth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <string>

#include "rentire/error.hpp"
#include "rentire/random.hpp"

namespace rentire {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_p(double p) {
  if (p != 1.0 && p != 2.0 && p != 4.0 && p != kSupNorm)
    throw ConfigError("p must be one of 1, 2, 4 or inf");
}

}  // namespace

double log_bessel_I(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("log_bessel_I needs finite r >= 0");
  if (r == 0.0) return 0.0;
  const double lr = std::log(r);
  auto lt = [&](double n) { return 2.0 * n * lr - 2.0 * std::lgamma(n + 1.0) - 2.0 * r; };
  const double n0 = std::floor(r);
  const double peak = lt(n0);
  const double stop = peak - 50.0;
  double s = 0.0;
  for (double n = n0; n >= 0.0; n -= 1.0) {
    const double t = lt(n);
    s += std::exp(t - peak);
    if (t < stop) break;
  }
  for (double n = n0 + 1.0;; n += 1.0) {
    const double t = lt(n);
    s += std::exp(t - peak);
    if (t < stop) break;
  }
  return peak + std::log(s) + 2.0 * r;
}

double log_circle_mean(SeriesHandle& handle, double r, double p, std::size_t m, double tol,
                       std::size_t k) {
  check_p(p);
  if (p == kSupNorm) return log_sup_norm(handle, r, m, tol, k);
  const CircleSamples cs = handle.circle_samples(k, r, m, tol);
  double vmax = 0.0;
  for (const auto& v : cs.values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) return kNegInf;
  double s = 0.0;
  for (const auto& v : cs.values) s += std::pow(std::abs(v) / vmax, p);
  return std::log(vmax) + std::log(s / static_cast<double>(cs.values.size())) / p + r;
}

double log_sup_norm(SeriesHandle& handle, double r, std::size_t m, double tol, std::size_t k) {
  const CircleSamples cs = handle.circle_samples(k, r, m, tol);
  double vmax = 0.0;
  for (const auto& v : cs.values) vmax = std::max(vmax, std::abs(v));
  return std::log(vmax + cs.tail_bound) + r;
}

double BoundTable::log_rate(BoundKind kind, double r, double p) const {
  if (!(r >= 2.0) || !std::isfinite(r)) throw ConfigError("reference bounds are defined for r >= 2");
  const double lr = std::log(r);
  switch (kind) {
    case BoundKind::sup_norm:
      return std::log(C) + 0.5 * std::log(lr) + r - 0.25 * lr;
    case BoundKind::mean_rate:
      check_p(p);
      if (p == 1.0) {
        const double ph = phi ? phi(r) : std::max(1.0, std::log(lr));
        return std::log(ph) - 0.5 * lr + r;
      }
      if (p <= 2.0) return std::log(c) - lr / (2.0 * p) + r;
      return std::log(c) - 0.25 * lr + r;
    case BoundKind::exponential:
      return r;
  }
  return r;
}

void summarize_curve(GrowthCurve& curve) {
  if (curve.radii.empty()) throw ConfigError("growth curve is empty");
  const double r_max = curve.radii.back();
  curve.max_log_ratio = kNegInf;
  curve.top_decade_max = kNegInf;
  curve.top_decade_min = -kNegInf;
  curve.second_decade_max = kNegInf;
  for (std::size_t i = 0; i < curve.radii.size(); ++i) {
    const double r = curve.radii[i];
    const double lr = curve.log_ratios[i];
    curve.max_log_ratio = std::max(curve.max_log_ratio, lr);
    if (r >= r_max / 10.0) {
      curve.top_decade_max = std::max(curve.top_decade_max, lr);
      curve.top_decade_min = std::min(curve.top_decade_min, lr);
    } else if (r >= r_max / 100.0) {
      curve.second_decade_max = std::max(curve.second_decade_max, lr);
    }
  }
  curve.bounded_above = std::isfinite(curve.max_log_ratio);
  curve.bounded_below = std::isfinite(curve.top_decade_min);
}

GrowthCurve growth_ratio_curve(SeriesHandle& handle, std::span<const double> r_grid, double p,
                               BoundKind bound, const BoundTable& table, std::size_t m,
                               double tol) {
  check_p(p);
  if (r_grid.empty()) throw ConfigError("growth curve needs a radius grid");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] >= 2.0 && r_grid[i] <= 300.0)) throw ConfigError("growth radii must lie in [2, 300]");
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) throw ConfigError("growth radii must increase");
  }
  GrowthCurve curve;
  curve.p = p;
  curve.normalization = bound;
  for (double r : r_grid) {
    const double v = log_circle_mean(handle, r, p, m, tol);
    const double b = table.log_rate(bound, r, p);
    curve.radii.push_back(r);
    curve.log_values.push_back(v);
    curve.log_bounds.push_back(b);
    curve.log_ratios.push_back(v - b);
  }
  summarize_curve(curve);
  return curve;
}

MomentCheck gaussian_moment_check(double r, double p, std::size_t replicates, std::uint64_t seed,
                                  const DistSpec& dist, const ParallelOptions& par) {
  if (dist.family != Family::complex_gaussian)
    throw ConfigError("gaussian_moment_check applies to complex_gaussian only");
  if (p != 1.0 && p != 2.0 && p != 4.0) throw ConfigError("moment order must be 1, 2 or 4");
  if (!(r >= 0.0)) throw ConfigError("radius must be >= 0");
  if (replicates < 10'000) throw ConfigError("gaussian_moment_check needs >= 10^4 replicates");

  MomentCheck out;
  out.r = r;
  out.p = p;
  out.log_target = std::lgamma(0.5 * p + 1.0) + 0.5 * p * log_bessel_I(r);
  const auto xs = replicate_map(
      replicates,
      [&](std::size_t j) {
        SeriesHandle h(CoefficientSource::random(dist, mix_seed(seed, j)));
        const auto e = h.evaluate_scaled(0, {r, 0.0});
        return std::exp(p * (std::log(std::abs(e.scaled_value)) + r) - out.log_target);
      },
      par);
  out.relative_error = mean(xs) - 1.0;
  out.se = bootstrap_se(xs, 200, splitmix64(seed ^ 0x6d6f6d656e74ULL));
  out.pass = std::abs(out.relative_error) < 3.0 * out.se;
  return out;
}

std::vector<double> kahane_statistics(const DistSpec& dist, double r, std::size_t degree,
                                      std::size_t replicates, std::uint64_t seed,
                                      const ParallelOptions& par) {
  if (!is_subgaussian(dist)) throw ConfigError("Kahane's estimate needs a sub-Gaussian law");
  if (degree < 2) throw ConfigError("Kahane degree must be >= 2");
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("Kahane radius must be positive");
  if (replicates == 0) throw ConfigError("Kahane probe needs replicates");

  const std::size_t len = degree + 1;
  std::vector<double> a(len);
  double amax = kNegInf;
  for (std::size_t n = 0; n < len; ++n) {
    const double dn = static_cast<double>(n);
    a[n] = dn * std::log(r) - std::lgamma(dn + 1.0);
    amax = std::max(amax, a[n]);
  }
  double l2 = 0.0;
  for (auto& v : a) {
    v = std::exp(v - amax);
    l2 += v * v;
  }
  const double denom = std::sqrt(std::log(static_cast<double>(degree)) * l2);
  const std::size_t m = std::bit_ceil(std::max<std::size_t>(16, 4 * len));

  return replicate_map(
      replicates,
      [&](std::size_t j) {
        const CoefficientStream s(dist, mix_seed(seed, j));
        std::vector<std::complex<double>> c(len);
        for (std::size_t n = 0; n < len; ++n) c[n] = a[n] * s.sample(n).value().real();
        double sup = 0.0;
        for (const auto& v : circle_values_fft(c, m)) sup = std::max(sup, std::abs(v));
        return sup / denom;
      },
      par);
}

KahaneResult kahane_from_statistics(std::span<const double> stats, std::size_t degree, double c) {
  if (stats.empty()) throw ConfigError("no Kahane statistics");
  KahaneResult res;
  res.degree = degree;
  res.c = c;
  res.replicates = stats.size();
  res.exceedances = static_cast<std::size_t>(
      std::count_if(stats.begin(), stats.end(), [c](double t) { return t > c; }));
  res.frequency = binomial_estimate(res.exceedances, res.replicates);
  const double dn = static_cast<double>(degree);
  res.target = 1.0 / (dn * dn);
  res.upper_bound = binomial_upper_bound(res.exceedances, res.replicates, 0.95);
  res.resolvable = binomial_upper_bound(0, res.replicates, 0.95) <= res.target;
  res.consistent = binomial_lower_bound(res.exceedances, res.replicates, 0.95) <= res.target;
  return res;
}

KahaneResult kahane_exceedance(const DistSpec& dist, double r, std::size_t degree, double c,
                               std::size_t replicates, std::uint64_t seed,
                               const ParallelOptions& par) {
  if (replicates < 10'000) throw ConfigError("kahane_exceedance needs >= 10^4 replicates");
  const auto stats = kahane_statistics(dist, r, degree, replicates, seed, par);
  return kahane_from_statistics(stats, degree, c);
}

double kahane_search(std::span<const double> stats, std::size_t degree) {
  if (stats.empty()) throw ConfigError("no Kahane statistics");
  std::vector<double> sorted(stats.begin(), stats.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t R = sorted.size();
  const std::size_t n2 = degree * degree;
  for (std::size_t i = 0;; ++i) {
    const double c = 0.1 * static_cast<double>(i);
    const auto above = static_cast<std::size_t>(
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), c));
    if (above * n2 <= R) return c;
  }
}

}  // namespace rentire
