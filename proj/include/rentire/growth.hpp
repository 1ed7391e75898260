#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "rentire/dist.hpp"
#include "rentire/parallel.hpp"
#include "rentire/series.hpp"
#include "rentire/stats.hpp"

namespace rentire {

inline constexpr double kSupNorm = std::numeric_limits<double>::infinity();

/// log I(r) with I(r) = Σ r^{2n}/(n!)² = I₀(2r), summed as e^{-2r}-scaled
/// terms around the peak n ≈ r. Throws ConfigError for r < 0.
double log_bessel_I(double r);

/// log M_{f^{(k)},p}(r), p ∈ {1, 2, 4}, as the rectangle rule over the
/// circle grid (exact for trigonometric polynomials of degree < m). p = ∞
/// forwards to log_sup_norm.
double log_circle_mean(SeriesHandle& handle, double r, double p, std::size_t m = 0,
                       double tol = 1e-12, std::size_t k = 0);

/// log M_{f^{(k)},∞}(r): grid max of the circle samples plus the tail bound.
double log_sup_norm(SeriesHandle& handle, double r, std::size_t m = 0,
                    double tol = 1e-12, std::size_t k = 0);

enum class BoundKind { sup_norm, mean_rate, exponential };

/// Reference growth rates, all as log-rate functions of r ≥ 2.
///   sup_norm:    C·√(log r)·e^r·r^{-1/4}
///   mean_rate:   φ(r)·r^{-1/2}·e^r (p = 1), c·r^{-1/(2p)}·e^r (1 < p ≤ 2),
///                c·r^{-1/4}·e^r (p ≥ 2, including ∞)
///   exponential: e^r
struct BoundTable {
  double C = 1.0;
  double c = 1.0;
  /// Defaults to max(1, log log r): log log r itself is negative below e^e.
  std::function<double(double)> phi;

  double log_rate(BoundKind kind, double r, double p = kSupNorm) const;
};

struct GrowthCurve {
  std::vector<double> radii;
  std::vector<double> log_values;
  std::vector<double> log_bounds;
  std::vector<double> log_ratios;
  double p = kSupNorm;
  BoundKind normalization = BoundKind::sup_norm;

  double max_log_ratio = 0.0;     ///< log of the fitted constant
  double top_decade_max = 0.0;    ///< r ∈ [r_max/10, r_max]
  double top_decade_min = 0.0;
  double second_decade_max = 0.0; ///< r ∈ [r_max/100, r_max/10); -inf if empty
  bool bounded_above = false;
  bool bounded_below = false;     ///< top-decade minimum is finite
};

/// Evaluates log M/bound over r_grid ⊂ [2, 300] for one series.
GrowthCurve growth_ratio_curve(SeriesHandle& handle, std::span<const double> r_grid,
                               double p, BoundKind bound, const BoundTable& table = {},
                               std::size_t m = 0, double tol = 1e-12);

/// Recomputes the decade summaries from the per-radius arrays (used after
/// pooling several curves by pointwise max).
void summarize_curve(GrowthCurve& curve);

struct MomentCheck {
  double r = 0.0;
  double p = 2.0;
  double log_target = 0.0;     ///< log Γ(p/2+1) + (p/2)·log I(r)
  double relative_error = 0.0; ///< mean|f(r)|^p / target − 1
  double se = 0.0;             ///< bootstrap SE of the relative error
  bool pass = false;           ///< |relative_error| < 3·se
};

/// E|f(r)|^p = Γ(p/2+1)·I(r)^{p/2} for the complex_gaussian law, over
/// replicate streams mix_seed(seed, j). Needs ≥ 10⁴ replicates.
MomentCheck gaussian_moment_check(double r, double p, std::size_t replicates,
                                  std::uint64_t seed,
                                  const DistSpec& dist = DistSpec::complex_gaussian(),
                                  const ParallelOptions& par = {});

/// Per replicate, sup_θ |Σ_{n≤N} a_n ξ_n e^{inθ}| / (√(log N)·‖a‖₂) with
/// a_n = r^n/n! and ξ_n = Re X_n; the sup is a grid max over ≥ 4(N+1)
/// angles. Rejects non-sub-Gaussian laws.
std::vector<double> kahane_statistics(const DistSpec& dist, double r, std::size_t degree,
                                      std::size_t replicates, std::uint64_t seed,
                                      const ParallelOptions& par = {});

struct KahaneResult {
  std::size_t degree = 0;
  double c = 0.0;
  std::size_t replicates = 0;
  std::size_t exceedances = 0;
  Estimate frequency;
  double target = 0.0;       ///< 1/N²
  double upper_bound = 0.0;  ///< one-sided 95% Clopper–Pearson
  bool resolvable = false;   ///< zero hits would certify frequency ≤ 1/N²
  bool consistent = false;   ///< the data do not reject frequency ≤ 1/N²
};

KahaneResult kahane_exceedance(const DistSpec& dist, double r, std::size_t degree, double c,
                               std::size_t replicates, std::uint64_t seed,
                               const ParallelOptions& par = {});

/// Same verdict computed from precomputed statistics.
KahaneResult kahane_from_statistics(std::span<const double> stats, std::size_t degree,
                                    double c);

/// Smallest c on the 0.1 grid whose empirical exceedance is ≤ 1/N².
double kahane_search(std::span<const double> stats, std::size_t degree);

}  // namespace rentire
