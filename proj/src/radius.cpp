#include "rentire/radius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rentire/error.hpp"

namespace rentire {

double RootTestProfile::t(std::size_t n) const {
  return std::exp(std::min(700.0, log_t.at(n - 1)));
}

RootTestProfile root_test_profile(const CoefficientSource& source, std::size_t n_max) {
  if (n_max < 100) throw ConfigError("root test profile needs n_max >= 100");
  RootTestProfile p;
  p.log_abs.reserve(n_max);
  p.log_t.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double dn = static_cast<double>(n);
    const double la = source.sample(n).log_abs;
    p.log_abs.push_back(la);
    p.log_t.push_back((la - std::lgamma(dn + 1.0)) / dn);
  }
  return p;
}

RadiusEstimate radius_estimate(const RootTestProfile& profile, std::size_t window) {
  const std::size_t n_max = profile.n_max();
  if (window < 1 || window > n_max / 2) throw ConfigError("radius window must lie in [1, n_max/2]");
  RadiusEstimate e;
  e.window = window;
  double trailing = -std::numeric_limits<double>::infinity();
  double global = trailing;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double lt = profile.log_t[n - 1];
    if (lt > global) {
      global = lt;
      e.global_argmax = n;
    }
    if (n > n_max - window) trailing = std::max(trailing, lt);
  }
  e.trailing_max = std::exp(std::min(700.0, trailing));
  e.global_max = std::exp(std::min(700.0, global));
  return e;
}

BorelCantelliCount borel_cantelli_counter(const CoefficientSource& source, double M,
                                          std::size_t n_max) {
  if (!(M > 0.0) || !std::isfinite(M)) throw ConfigError("Borel-Cantelli level M must be positive");
  BorelCantelliCount out;
  const DistSpec* dist = source.dist();
  out.expected = dist ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  for (std::size_t n = 2; n <= n_max; ++n) {
    const double dn = static_cast<double>(n);
    const double log_level = dn * std::log(M * dn);
    if (source.sample(n).log_abs >= log_level) ++out.count;
    if (dist) out.expected += std::min(1.0, tail_probability_log(*dist, log_level));
  }
  return out;
}

double borel_cantelli_hit_probability(const DistSpec& dist, double M, std::size_t n_from,
                                      std::size_t n_to) {
  if (!(M > 0.0)) throw ConfigError("Borel-Cantelli level M must be positive");
  double log_miss = 0.0;
  for (std::size_t n = n_from; n <= n_to; ++n) {
    const double dn = static_cast<double>(n);
    const double t = tail_probability_log(dist, dn * std::log(M * dn));
    if (t >= 1.0) return 1.0;
    log_miss += std::log1p(-t);
  }
  return -std::expm1(log_miss);
}

double root_test_crossing_probability(const DistSpec& dist, double level, std::size_t n_from,
                                      std::size_t n_to) {
  if (!(level > 0.0)) throw ConfigError("crossing level must be positive");
  if (n_from < 1) throw ConfigError("root test indices start at 1");
  double log_miss = 0.0;
  for (std::size_t n = n_from; n <= n_to; ++n) {
    const double dn = static_cast<double>(n);
    const double t = tail_probability_log(dist, dn * std::log(level) + std::lgamma(dn + 1.0));
    if (t >= 1.0) return 1.0;
    log_miss += std::log1p(-t);
  }
  return -std::expm1(log_miss);
}

}  // namespace rentire
