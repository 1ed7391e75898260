#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rentire/dist.hpp"
#include "rentire/parallel.hpp"
#include "rentire/series.hpp"
#include "rentire/stats.hpp"

namespace rentire {

/// Target polynomial g(z) = Σ_{k≤N} a_k z^k/k! (note the z^k/k! basis), the
/// disk radius r and the tolerance ε of the hit events.
struct TargetSpec {
  std::vector<std::complex<double>> coefficients{0.0};
  double radius = 1.0;
  double epsilon = 0.5;

  std::size_t degree() const noexcept { return coefficients.size() - 1; }
  /// Throws ConfigError unless N ≥ 0, r > 0 and ε > 0.
  void validate() const;
  std::complex<double> operator()(std::complex<double> z) const;
};

/// ρ_n = a·e^n for n > N. The scale is kept as log a since a underflows
/// for large radii.
struct RhoSequence {
  double log_a = 0.0;
  std::size_t start = 0;  ///< N; the sequence is used for n > N.

  double a_scale() const;
  double log_value(std::size_t n) const;
  double value(std::size_t n) const;
};

/// a = (ε/2) / (1.01·Σ_{n>N} (e·r)^n/n!), so that Σ_{n>N} ρ_n r^n/n! < ε/2.
RhoSequence build_rho_sequence(const TargetSpec& target);

/// Σ_{n>N} ρ_n r^n/n! by direct summation (the construction check).
double rho_weighted_sum(const TargetSpec& target, const RhoSequence& rho);

/// Σ_{k≥d} P(|X| ≥ ρ_k). Throws NotSummableError when the series diverges
/// (divergent_log_tail, borderline_tail with α ≤ 1).
double tail_sum(const DistSpec& dist, const RhoSequence& rho, std::size_t d,
                double tail_cut = 1e-15);

struct EventAResult {
  bool hit = false;
  bool ambiguous = false;    ///< grid max within the tail bound of ε
  double grid_max = 0.0;     ///< max_θ |f^{(k)} − g| on the circle, unscaled
  double tail_bound = 0.0;   ///< unscaled
};

/// A_k = {sup_{|z|≤r} |f^{(k)}(z) − g(z)| < ε}. The sup is taken over the
/// m-point grid on |z| = r (m ≥ 4·N_trunc by default). Ambiguous outcomes
/// count as misses.
EventAResult event_A(SeriesHandle& handle, std::size_t k,
                     const TargetSpec& target, std::size_t m = 0,
                     double tol = 1e-12);

/// Smallest n_check ≥ N+1 whose union-bound failure probability
/// Σ_{n>n_check} P(|X| ≥ ρ_n) is below `bound`, capped at 10^6 (heavy
/// tails with small β cannot reach the bound; the checker then reports
/// the larger failure bound). Deterministic sources get N + 1 + 20.
std::size_t default_n_check(const CoefficientSource& source,
                            const RhoSequence& rho, double bound = 1e-6);

/// B_k = {Σ_{n≤N} |X_{k+n} − a_n| r^n/n! < ε/2 and |X_{k+n}| < ρ_n, n > N},
/// with the tail conjunction checked up to n_check. Built once per
/// (source, target) so the failure bound is computed a single time.
class EventBChecker {
 public:
  EventBChecker(const CoefficientSource& source, TargetSpec target,
                RhoSequence rho, std::size_t n_check);
  EventBChecker(const CoefficientSource& source, TargetSpec target);

  bool operator()(SeriesHandle& handle, std::size_t k) const;

  /// Probability that the unchecked part n > n_check fails.
  double failure_bound() const noexcept { return failure_bound_; }
  std::size_t n_check() const noexcept { return n_check_; }
  const RhoSequence& rho() const noexcept { return rho_; }

 private:
  TargetSpec target_;
  RhoSequence rho_;
  std::size_t n_check_;
  double failure_bound_ = 0.0;
  std::vector<double> head_weights_;  // r^n/n!
};

struct EventBResult {
  bool hit = false;
  double failure_bound = 0.0;
};
EventBResult event_B(SeriesHandle& handle, std::size_t k,
                     const TargetSpec& target, const RhoSequence& rho,
                     std::size_t n_check);

enum class EventKind { A_events, B_events };

/// counts[n-1] = S_n = #{k < n : event at shift k}.
struct DensityTrace {
  EventKind kind = EventKind::B_events;
  std::vector<std::uint32_t> counts;
  std::size_t ambiguous = 0;     ///< A events resolved pessimistically
  double failure_bound = 0.0;    ///< per-event B truncation bound

  std::size_t n_max() const noexcept { return counts.size(); }
  std::uint32_t count(std::size_t n) const { return counts.at(n - 1); }
  double density(std::size_t n) const;
  /// min of S_n/n over n ∈ [n_from, n_to].
  double min_density(std::size_t n_from, std::size_t n_to) const;

  static DensityTrace from_events(EventKind kind,
                                  std::span<const std::uint8_t> events);
};

/// One sweep over k = 0..n_max-1 sharing the coefficient cache.
DensityTrace density_trace(const CoefficientSource& source,
                           const TargetSpec& target, EventKind kind,
                           std::size_t n_max, std::size_t m = 0,
                           double tol = 1e-12);

/// p = P(Σ_{k≤N} |X_k − a_k| r^k/k! < ε/2) by Monte Carlo over fresh
/// (N+1)-tuples of the counter stream keyed by `seed`.
Estimate theoretical_p(const DistSpec& dist, const TargetSpec& target,
                       std::size_t mc_samples, std::uint64_t seed);

/// P(|X − a| < radius) for the complex_gaussian law, by radial quadrature
/// of the noncentral density 2s·exp(−s² − |a|²)·I₀(2|a|s).
double gaussian_disk_probability(std::complex<double> center, double radius);

/// Q_d = Π_{k≥d} P(|X| < ρ_k), summed in the log domain with log1p and
/// truncated once the remaining tail mass drops below tail_cut.
double theoretical_Q(const DistSpec& dist, const RhoSequence& rho,
                     std::size_t d, double tail_cut = 1e-12);
double log_theoretical_Q(const DistSpec& dist, const RhoSequence& rho,
                         std::size_t d, double tail_cut = 1e-12);

using QFunction = std::function<double(std::size_t)>;

/// Q_d tabulated for d in [d_min, d_max] with one backward pass; queries
/// outside the range fall back to theoretical_Q.
class QTable {
 public:
  QTable(const DistSpec& dist, const RhoSequence& rho, std::size_t d_min,
         std::size_t d_max, double tail_cut = 1e-12);

  double operator()(std::size_t d) const;
  double log_q(std::size_t d) const;
  QFunction as_function() const;

 private:
  DistSpec dist_;
  RhoSequence rho_;
  std::size_t d_min_;
  double tail_cut_;
  std::vector<double> log_q_;
};

/// |a_k| + (ε/2)·k!/r^k ≤ ρ_{k+d} for all k ≤ N.
bool d_condition_holds(const TargetSpec& target, const RhoSequence& rho,
                       std::size_t d);

/// Smallest M > N with d_condition_holds(M) and Σ_{k≥M} P(|X| ≥ ρ_k) ≤ 1/2.
std::size_t threshold_M(const DistSpec& dist, const TargetSpec& target,
                        const RhoSequence& rho);

/// p²·Q_{N+1}²/Q_d for d ≥ M; nullopt below M (Monte Carlo required).
/// Throws ConfigError for d == 0.
std::optional<double> joint_probability_closed_form(double p, const QFunction& Q,
                                                    std::size_t N, std::size_t d,
                                                    std::size_t M);

/// Var(S_n) = n(pQ − p²Q²) + 2Σ_{d<M}(n−d)(P(B₀∩B_d) − p²Q²)
///          + 2Σ_{M≤d<n}(n−d)(p²Q²/Q_d − p²Q²),   Q = Q_{N+1}.
/// small_d_joints[d-1] holds P(B₀∩B_d) for d = 1..M-1.
double variance_prediction(double p, const QFunction& Q, std::size_t N,
                           std::size_t M, std::size_t n,
                           std::span<const double> small_d_joints);

struct VarianceScaling {
  std::vector<double> n_values;
  std::vector<double> variances;
  LinearFit fit;  ///< log Var against log n
  bool pass = false;  ///< upper CI of the slope < 2
};

/// Needs ≥ 100 traces and a geometric n_grid of ≥ 5 points spanning at
/// least 1.5 decades.
VarianceScaling variance_scaling(std::span<const DensityTrace> traces,
                                 std::span<const std::size_t> n_grid);

/// Monte Carlo frequency of B_k over replicate streams mix_seed(seed, j).
Estimate mc_event_B_probability(const DistSpec& dist, const TargetSpec& target,
                                const RhoSequence& rho, std::size_t k,
                                std::size_t replicates, std::uint64_t seed,
                                const ParallelOptions& par = {});

/// Monte Carlo frequency of B₀ ∩ B_d over replicate streams.
Estimate mc_joint_probability(const DistSpec& dist, const TargetSpec& target,
                              const RhoSequence& rho, std::size_t d,
                              std::size_t replicates, std::uint64_t seed,
                              const ParallelOptions& par = {});

}  // namespace rentire
