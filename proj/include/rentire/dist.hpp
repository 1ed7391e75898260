#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace rentire {

enum class Family {
  complex_gaussian,          ///< Re X, Im X ~ N(0, 1/2) independent; E|X|² = 1.
  gaussian_plus_log_pareto,  ///< G + H, |H| = exp(U^{-1/(1+β)}), uniform phase.
  divergent_log_tail,        ///< |X| = exp(1/U); P(|X| ≥ r) = 1/log r for r ≥ e.
  borderline_tail,           ///< P(|X| ≥ r) = 1/((log r)(log log r)^α), saturated.
};

std::string_view family_name(Family f) noexcept;
Family family_from_name(std::string_view name);

/// A coefficient law. `beta` is read only by gaussian_plus_log_pareto and
/// `alpha` only by borderline_tail.
struct DistSpec {
  Family family = Family::complex_gaussian;
  double beta = 1.0;
  double alpha = 2.0;

  static DistSpec complex_gaussian() { return {}; }
  static DistSpec gaussian_plus_log_pareto(double beta) {
    return {Family::gaussian_plus_log_pareto, beta, 2.0};
  }
  static DistSpec divergent_log_tail() {
    return {Family::divergent_log_tail, 1.0, 2.0};
  }
  static DistSpec borderline_tail(double alpha) {
    return {Family::borderline_tail, 1.0, alpha};
  }

  /// Throws ConfigError on non-positive beta/alpha.
  void validate() const;
  bool operator==(const DistSpec&) const = default;
};

/// A complex value stored as (log|x|, x/|x|). Heavy-tailed samplers can emit
/// magnitudes like exp(10^15) that have no double representation; the log
/// form keeps them usable in log-domain arithmetic.
struct Coefficient {
  double log_abs = -std::numeric_limits<double>::infinity();
  std::complex<double> unit{1.0, 0.0};

  static Coefficient from_value(std::complex<double> v);
  /// exp(log_abs)·unit; may be infinite for astronomically large draws.
  std::complex<double> value() const;
  double abs() const;
};

/// Draw number `index` of `dist` under `seed`. Pure function of its inputs.
Coefficient sample(const DistSpec& dist, std::uint64_t seed,
                   std::uint64_t index);

/// Index-addressable i.i.d. coefficient source. `shift(k)` realizes the
/// k-th derivative: shift(k).sample(n) == sample(n + k).
class CoefficientStream {
 public:
  CoefficientStream(DistSpec dist, std::uint64_t seed,
                    std::uint64_t offset = 0)
      : dist_(dist), seed_(seed), offset_(offset) {}

  Coefficient sample(std::uint64_t n) const {
    return rentire::sample(dist_, seed_, offset_ + n);
  }
  CoefficientStream shift(std::uint64_t k) const {
    return {dist_, seed_, offset_ + k};
  }

  const DistSpec& dist() const noexcept { return dist_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  DistSpec dist_;
  std::uint64_t seed_;
  std::uint64_t offset_;
};

/// P(|X| ≥ r). Exact for complex_gaussian, divergent_log_tail and
/// borderline_tail. For gaussian_plus_log_pareto this is the surrogate
/// (log r)^{-(1+β)}·[r ≥ e] + exp(-r²), clamped to 1: the heavy component's
/// tail plus the Gaussian tail, used as an upper-bound proxy.
double tail_probability(const DistSpec& dist, double r);

/// Same as tail_probability, parameterized by log r so that radii such as
/// (Mn)^n can be passed without overflow.
double tail_probability_log(const DistSpec& dist, double log_r);

/// Condition whose finite-grid limsup is probed by check_decay_condition.
struct DecayCondition {
  enum class Kind { hypercyclic, divergent, borderline };
  Kind kind;
  double parameter = 0.0;  ///< β for hypercyclic, α for borderline.

  static DecayCondition hypercyclic(double beta) {
    return {Kind::hypercyclic, beta};
  }
  static DecayCondition divergent() { return {Kind::divergent, 0.0}; }
  static DecayCondition borderline(double alpha) {
    return {Kind::borderline, alpha};
  }
};

struct DecayReport {
  std::vector<double> radii;
  std::vector<double> products;
  /// max over the top half of the grid ≤ 2·median of all products.
  bool bounded = false;
};

/// (log r)^{1+β}·P, (log r)·P or (log r)(log log r)^α·P over `r_grid`.
/// The bounded flag is meaningful on grids that are geometric in log r.
DecayReport check_decay_condition(const DistSpec& dist, DecayCondition cond,
                                  std::span<const double> r_grid);

/// Radii exp(t) with t geometric between t_min and t_max (count ≥ 2).
std::vector<double> log_spaced_radii(double t_min, double t_max,
                                     std::size_t count);

/// E exp(t|X|). Closed form for complex_gaussian, +inf for the heavy-tailed
/// families (their MGF diverges for every t > 0).
double abs_mgf(const DistSpec& dist, double t);

/// Whether the law satisfies E e^{t|X|} = O(e^{Ct²}). Only complex_gaussian
/// among the implemented families does.
bool is_subgaussian(const DistSpec& dist) noexcept;

/// Config fragment with keys family, beta, alpha, seed.
struct DistConfig {
  DistSpec dist;
  std::uint64_t seed = 0;
  bool operator==(const DistConfig&) const = default;
};

void to_json(nlohmann::json& j, const DistConfig& c);
void from_json(const nlohmann::json& j, DistConfig& c);

}  // namespace rentire
