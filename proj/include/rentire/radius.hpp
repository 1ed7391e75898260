#pragma once

#include <cstddef>
#include <vector>

#include "rentire/dist.hpp"
#include "rentire/series.hpp"

namespace rentire {

/// Root-test sequence t_n = (|X_n|/n!)^{1/n}, n = 1..n_max, kept as
/// log t_n so that |X_n| up to exp(10⁶) is representable.
struct RootTestProfile {
  std::vector<double> log_abs;  ///< log|X_n|, index n-1
  std::vector<double> log_t;    ///< (log|X_n| − log n!)/n, index n-1

  std::size_t n_max() const noexcept { return log_t.size(); }
  /// t_n, saturated at e^700.
  double t(std::size_t n) const;
};

/// Needs n_max ≥ 100.
RootTestProfile root_test_profile(const CoefficientSource& source, std::size_t n_max);

struct RadiusEstimate {
  std::size_t window = 0;
  double trailing_max = 0.0;  ///< max t_n over the last `window` indices (1/R proxy)
  double global_max = 0.0;    ///< max t_n over 1..n_max
  std::size_t global_argmax = 0;
};

/// window must lie in [1, n_max/2].
RadiusEstimate radius_estimate(const RootTestProfile& profile, std::size_t window);

struct BorelCantelliCount {
  std::size_t count = 0;
  /// Σ_{2≤n≤n_max} min(1, P(|X| ≥ (Mn)^n)); NaN for deterministic sources.
  double expected = 0.0;
};

/// Counts 2 ≤ n ≤ n_max with log|X_n| ≥ n·log(Mn). The range starts at 2
/// because (M·1)^1 ≤ 1 puts n = 1 in the bulk of every law when M ≤ 1.
BorelCantelliCount borel_cantelli_counter(const CoefficientSource& source, double M,
                                          std::size_t n_max);

/// P(at least one n in [n_from, n_to] has |X_n| ≥ (Mn)^n), exact under
/// independence: 1 − Π(1 − P(|X| ≥ (Mn)^n)).
double borel_cantelli_hit_probability(const DistSpec& dist, double M, std::size_t n_from,
                                      std::size_t n_to);

/// P(max_{n_from ≤ n ≤ n_to} t_n ≥ level) = 1 − Π(1 − P(log|X| ≥ n·log level + log n!)).
double root_test_crossing_probability(const DistSpec& dist, double level, std::size_t n_from,
                                      std::size_t n_to);

}  // namespace rentire
