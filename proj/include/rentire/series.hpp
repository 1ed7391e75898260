#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "rentire/dist.hpp"

namespace rentire {

/// Where the Taylor coefficients X_0, X_1, ... of f(z) = Σ X_n z^n/n! come
/// from: a random stream, or a deterministic prefix followed by a constant
/// fill (Xₙ ≡ 1, exact-match fixtures and the like).
class CoefficientSource {
 public:
  CoefficientSource(CoefficientStream stream);  // NOLINT: implicit on purpose

  static CoefficientSource random(DistSpec dist, std::uint64_t seed) {
    return CoefficientStream(dist, seed);
  }
  static CoefficientSource fixed(std::vector<std::complex<double>> prefix,
                                 std::complex<double> fill = 0.0);
  static CoefficientSource constant(std::complex<double> value) {
    return fixed({}, value);
  }

  Coefficient sample(std::uint64_t n) const;
  CoefficientSource shift(std::uint64_t k) const;

  /// The coefficient law, or nullptr for deterministic sources.
  const DistSpec* dist() const noexcept;

 private:
  struct Fixed {
    std::shared_ptr<const std::vector<Coefficient>> prefix;
    Coefficient fill;
    std::uint64_t offset = 0;
  };
  explicit CoefficientSource(Fixed f) : impl_(std::move(f)) {}

  std::variant<CoefficientStream, Fixed> impl_;
};

/// Truncation always stops after 20 consecutive terms below tolerance
/// beyond max(16, ceil(3r)). With verify_horizon > 0 the scan is carried on
/// to that index, and any term there whose unscaled magnitude reaches 1 is
/// reported as divergence.
struct TruncationLimits {
  std::size_t hard_cap = 1'000'000;
  std::size_t verify_horizon = 0;
};

/// Defaults per source: divergent_log_tail (radius of convergence a.s. 0)
/// verifies up to the hard cap, everything else uses the 20-term rule only.
TruncationLimits default_limits(const CoefficientSource& source);

inline constexpr std::size_t kSmallTermRun = 20;
inline constexpr std::size_t kTruncationFloor = 16;

/// log pₙ(r) = n·log r − log n! − r, the Poisson(r) log-pmf. pₙ(0) = [n == 0].
double log_poisson_weight(std::size_t n, double r);

/// N_trunc for the stream at radius r. Throws TruncationError when the cap
/// is exceeded or divergence is detected.
std::size_t truncation_index(const CoefficientSource& source, double r,
                             double tol, const TruncationLimits& limits = {});

struct EvalResult {
  std::complex<double> scaled_value;  ///< e^{-r}·f^{(k)}(z)
  double log_scale = 0.0;             ///< r = |z|
  std::size_t truncation_index = 0;
  double tail_bound = 0.0;  ///< bound on the omitted tail, scaled units

  /// scaled_value·e^{log_scale}; overflows to inf for large radii.
  std::complex<double> raw() const;
};

struct CircleSamples {
  std::vector<std::complex<double>> values;  ///< at θ_j = 2πj/m, scaled
  double log_scale = 0.0;
  std::size_t truncation_index = 0;
  double tail_bound = 0.0;
};

/// Smallest power of two ≥ max(16, 4·n_trunc).
std::size_t grid_size_for(std::size_t n_trunc);

/// Σ_n c_n·exp(2πi·jn/m) for j < m via one FFT (coefficients folded mod m).
std::vector<std::complex<double>> circle_values_fft(
    std::span<const std::complex<double>> coeffs, std::size_t m);

/// Reference kernel: Horner evaluation at each of the m angles. O(N·m).
std::vector<std::complex<double>> circle_values_direct(
    std::span<const std::complex<double>> coeffs, std::size_t m);

/// The random entire function f and its derivatives, evaluated in
/// e^{-r}-scaled arithmetic so that nothing overflows for r ≤ 300.
///
/// The coefficient cache grows on demand and is not synchronized: a handle
/// belongs to one thread at a time. Parallel work uses one handle per
/// replicate, or calls extend() before fanning out read-only queries.
class SeriesHandle {
 public:
  explicit SeriesHandle(CoefficientSource source);
  SeriesHandle(CoefficientSource source, TruncationLimits limits);

  const Coefficient& coefficient(std::size_t n);
  void extend(std::size_t count);
  std::size_t cached() const noexcept { return cache_.size(); }

  std::size_t truncation_index(std::size_t k, double r, double tol);

  EvalResult evaluate_scaled(std::size_t k, std::complex<double> z,
                             double tol = 1e-12);

  /// m == 0 picks grid_size_for(N_trunc); otherwise m must be a power of
  /// two ≥ 16.
  CircleSamples circle_samples(std::size_t k, double r, std::size_t m = 0,
                               double tol = 1e-12);

  /// Scaled Poisson-weighted terms c_n = X_{k+n}·pₙ(r) for n ≤ N_trunc,
  /// plus the tail bound. Shared by every circle computation.
  struct Terms {
    std::vector<std::complex<double>> coeffs;
    double tail_bound = 0.0;
  };
  Terms scaled_terms(std::size_t k, double r, double tol);

  /// sup_{|z|=R} |g_{R,j}| in e^{-R} units for j = 0..j_max, where block 0
  /// holds n ≤ 3R and block j holds 3^j·R < n ≤ 3^{j+1}·R.
  std::vector<double> block_decompose(std::size_t R, std::size_t j_max);

  /// Fresh handle over the source shifted by k.
  SeriesHandle shifted(std::size_t k) const;

  const CoefficientSource& source() const noexcept { return source_; }
  const TruncationLimits& limits() const noexcept { return limits_; }

 private:
  CoefficientSource source_;
  TruncationLimits limits_;
  std::vector<Coefficient> cache_;
};

}  // namespace rentire
