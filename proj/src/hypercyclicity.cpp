#include "rentire/hypercyclicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rentire/error.hpp"
#include "rentire/growth.hpp"
#include "rentire/random.hpp"

namespace rentire {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxFactors = 1'000'000;
constexpr std::size_t kMaxNCheck = 1'000'000;
constexpr std::size_t kMaxThreshold = 10'000'000;

void require_summable(const DistSpec& dist) {
  if (dist.family == Family::divergent_log_tail)
    throw NotSummableError("divergent_log_tail: Σ P(|X| ≥ ρ_k) diverges");
  if (dist.family == Family::borderline_tail && dist.alpha <= 1.0)
    throw NotSummableError("borderline_tail with alpha <= 1: Σ P(|X| ≥ ρ_k) diverges");
}

// Σ_{j>K} exp(−a²e^{2j}); successive exponents grow by at least
// x_{K+1}(e² − 1), so a geometric series dominates.
double gaussian_remainder(const RhoSequence& rho, std::size_t K) {
  const double log_x = 2.0 * rho.log_value(K + 1);
  if (log_x > 6.6) return 0.0;  // exp(−e^{6.6}) < 1e-320
  const double x = std::exp(log_x);
  const double s = x * (std::exp(2.0) - 1.0);
  return std::exp(-x) / -std::expm1(-s);
}

// Rigorous bound on Σ_{j>K} P(|X| ≥ ρ_j), or +inf if K is not yet in the
// regime where the bound applies.
double remainder_bound(const DistSpec& dist, const RhoSequence& rho, std::size_t K) {
  const double u = rho.log_value(K);
  switch (dist.family) {
    case Family::complex_gaussian:
      return gaussian_remainder(rho, K);
    case Family::gaussian_plus_log_pareto:
      if (rho.log_value(K + 1) < 1.0 || u <= 0.0) return kInf;
      return std::pow(u, -dist.beta) / dist.beta + gaussian_remainder(rho, K);
    case Family::borderline_tail:
      if (u <= 1.0) return kInf;
      return std::pow(std::log(u), 1.0 - dist.alpha) / (dist.alpha - 1.0);
    case Family::divergent_log_tail:
      break;
  }
  return kInf;
}

// Midpoint-integral estimate of the same remainder, used once the factor
// budget is exhausted.
double remainder_estimate(const DistSpec& dist, const RhoSequence& rho, std::size_t K) {
  const double u = rho.log_value(K) + 0.5;
  switch (dist.family) {
    case Family::gaussian_plus_log_pareto:
      return std::pow(u, -dist.beta) / dist.beta + gaussian_remainder(rho, K);
    case Family::borderline_tail:
      return std::pow(std::log(u), 1.0 - dist.alpha) / (dist.alpha - 1.0);
    default:
      return remainder_bound(dist, rho, K);
  }
}

struct TailAccumulation {
  double sum = 0.0;      // Σ t_k
  double log_prod = 0.0; // Σ log1p(−t_k)
};

TailAccumulation accumulate_tail(const DistSpec& dist, const RhoSequence& rho,
                                 std::size_t d, double cut) {
  require_summable(dist);
  if (!(cut > 0.0)) throw ConfigError("tail cut must be positive");
  TailAccumulation acc;
  for (std::size_t k = d;; ++k) {
    const double t = tail_probability_log(dist, rho.log_value(k));
    acc.sum += t;
    acc.log_prod += t >= 1.0 ? -kInf : std::log1p(-t);
    if (remainder_bound(dist, rho, k) < cut) return acc;
    if (k - d + 1 >= kMaxFactors) {
      const double rem = remainder_estimate(dist, rho, k);
      acc.sum += rem;
      acc.log_prod -= rem;
      return acc;
    }
  }
}

double log_sum_exp_series_tail(double log_x, std::size_t from) {
  // log Σ_{n≥from} x^n/n!, summed around the largest term.
  double peak = -kInf;
  std::vector<double> lts;
  for (std::size_t n = from;; ++n) {
    const double dn = static_cast<double>(n);
    const double lt = dn * log_x - std::lgamma(dn + 1.0);
    lts.push_back(lt);
    peak = std::max(peak, lt);
    if (dn > std::exp(log_x) && lt < peak - 60.0) break;
  }
  double s = 0.0;
  for (double lt : lts) s += std::exp(lt - peak);
  return peak + std::log(s);
}

}  // namespace

void TargetSpec::validate() const {
  if (coefficients.empty()) throw ConfigError("target polynomial needs at least one coefficient");
  for (const auto& c : coefficients)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw ConfigError("target coefficients must be finite");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("target radius must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
}

std::complex<double> TargetSpec::operator()(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 0;)
    acc = acc * z / static_cast<double>(k + 1) + coefficients[k];
  return acc;
}

double RhoSequence::a_scale() const { return std::exp(log_a); }
double RhoSequence::log_value(std::size_t n) const { return log_a + static_cast<double>(n); }
double RhoSequence::value(std::size_t n) const { return std::exp(log_value(n)); }

RhoSequence build_rho_sequence(const TargetSpec& target) {
  target.validate();
  const std::size_t N = target.degree();
  const double log_s = log_sum_exp_series_tail(1.0 + std::log(target.radius), N + 1);
  RhoSequence rho{std::log(0.5 * target.epsilon) - std::log(1.01) - log_s, N};
  if (!(rho_weighted_sum(target, rho) < 0.5 * target.epsilon))
    throw NumericalError("ρ construction failed its weighted-sum check");
  return rho;
}

double rho_weighted_sum(const TargetSpec& target, const RhoSequence& rho) {
  const double log_r = std::log(target.radius);
  double s = 0.0;
  double peak = -kInf;
  for (std::size_t n = rho.start + 1;; ++n) {
    const double dn = static_cast<double>(n);
    const double lt = rho.log_value(n) + dn * log_r - std::lgamma(dn + 1.0);
    s += std::exp(lt);
    peak = std::max(peak, lt);
    if (dn > std::exp(1.0) * target.radius && lt < peak + std::log(1e-12) - 10.0) break;
  }
  return s;
}

double tail_sum(const DistSpec& dist, const RhoSequence& rho, std::size_t d, double tail_cut) {
  return accumulate_tail(dist, rho, d, tail_cut).sum;
}

EventAResult event_A(SeriesHandle& handle, std::size_t k, const TargetSpec& target,
                     std::size_t m, double tol) {
  target.validate();
  const double r = target.radius;
  auto terms = handle.scaled_terms(k, r, tol);
  if (terms.coeffs.size() < target.coefficients.size())
    terms.coeffs.resize(target.coefficients.size(), 0.0);
  for (std::size_t n = 0; n < target.coefficients.size(); ++n)
    terms.coeffs[n] -= target.coefficients[n] * std::exp(log_poisson_weight(n, r));
  if (m == 0) m = grid_size_for(terms.coeffs.size() - 1);
  const auto values = circle_values_fft(terms.coeffs, m);
  double sup = 0.0;
  for (const auto& v : values) sup = std::max(sup, std::abs(v));

  EventAResult res;
  const double scale = std::exp(r);
  res.grid_max = sup * scale;
  res.tail_bound = terms.tail_bound * scale;
  res.hit = res.grid_max + res.tail_bound < target.epsilon;
  res.ambiguous = std::abs(res.grid_max - target.epsilon) <= res.tail_bound;
  return res;
}

std::size_t default_n_check(const CoefficientSource& source, const RhoSequence& rho,
                            double bound) {
  const std::size_t lo_n = rho.start + 1;
  const DistSpec* dist = source.dist();
  if (!dist) return lo_n + kSmallTermRun;
  const double cut = bound * 1e-3;
  auto ok = [&](std::size_t n) { return tail_sum(*dist, rho, n + 1, cut) < bound; };
  if (ok(lo_n)) return lo_n;
  std::size_t lo = lo_n, hi = lo_n + 1;
  while (!ok(hi)) {
    lo = hi;
    if (hi >= kMaxNCheck) return kMaxNCheck;
    hi = std::min(kMaxNCheck, 2 * hi);
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

EventBChecker::EventBChecker(const CoefficientSource& source, TargetSpec target,
                             RhoSequence rho, std::size_t n_check)
    : target_(std::move(target)), rho_(rho), n_check_(n_check) {
  target_.validate();
  if (rho_.start != target_.degree()) throw ConfigError("ρ sequence does not match the target degree");
  if (n_check_ <= target_.degree()) throw ConfigError("n_check must exceed the target degree");
  if (const DistSpec* d = source.dist()) failure_bound_ = tail_sum(*d, rho_, n_check_ + 1);
  const double log_r = std::log(target_.radius);
  for (std::size_t n = 0; n <= target_.degree(); ++n) {
    const double dn = static_cast<double>(n);
    head_weights_.push_back(std::exp(dn * log_r - std::lgamma(dn + 1.0)));
  }
}

EventBChecker::EventBChecker(const CoefficientSource& source, TargetSpec target)
    : EventBChecker(source, target, build_rho_sequence(target),
                    default_n_check(source, build_rho_sequence(target))) {}

bool EventBChecker::operator()(SeriesHandle& handle, std::size_t k) const {
  const std::size_t N = target_.degree();
  double head = 0.0;
  for (std::size_t n = 0; n <= N; ++n) {
    const Coefficient& c = handle.coefficient(k + n);
    if (c.log_abs > 700.0) return false;
    head += std::abs(c.value() - target_.coefficients[n]) * head_weights_[n];
  }
  if (!(head < 0.5 * target_.epsilon)) return false;
  for (std::size_t n = N + 1; n <= n_check_; ++n)
    if (handle.coefficient(k + n).log_abs >= rho_.log_value(n)) return false;
  return true;
}

EventBResult event_B(SeriesHandle& handle, std::size_t k, const TargetSpec& target,
                     const RhoSequence& rho, std::size_t n_check) {
  const EventBChecker check(handle.source(), target, rho, n_check);
  return {check(handle, k), check.failure_bound()};
}

double DensityTrace::density(std::size_t n) const {
  return static_cast<double>(count(n)) / static_cast<double>(n);
}

double DensityTrace::min_density(std::size_t n_from, std::size_t n_to) const {
  if (n_from < 1 || n_from > n_to || n_to > n_max())
    throw ConfigError("min_density: range outside [1, n_max]");
  double best = kInf;
  for (std::size_t n = n_from; n <= n_to; ++n) best = std::min(best, density(n));
  return best;
}

DensityTrace DensityTrace::from_events(EventKind kind, std::span<const std::uint8_t> events) {
  DensityTrace t;
  t.kind = kind;
  t.counts.reserve(events.size());
  std::uint32_t s = 0;
  for (auto e : events) t.counts.push_back(s += e ? 1u : 0u);
  return t;
}

DensityTrace density_trace(const CoefficientSource& source, const TargetSpec& target,
                           EventKind kind, std::size_t n_max, std::size_t m, double tol) {
  target.validate();
  if (n_max == 0) throw ConfigError("n_max must be positive");
  SeriesHandle handle(source);
  std::vector<std::uint8_t> ev(n_max);
  std::size_t ambiguous = 0;
  double failure_bound = 0.0;
  if (kind == EventKind::A_events) {
    for (std::size_t k = 0; k < n_max; ++k) {
      const auto a = event_A(handle, k, target, m, tol);
      ev[k] = a.hit;
      ambiguous += a.ambiguous ? 1 : 0;
    }
  } else {
    const EventBChecker check(source, target);
    failure_bound = check.failure_bound();
    for (std::size_t k = 0; k < n_max; ++k) ev[k] = check(handle, k);
  }
  DensityTrace t = DensityTrace::from_events(kind, ev);
  t.ambiguous = ambiguous;
  t.failure_bound = failure_bound;
  return t;
}

Estimate theoretical_p(const DistSpec& dist, const TargetSpec& target,
                       std::size_t mc_samples, std::uint64_t seed) {
  target.validate();
  if (mc_samples == 0) throw ConfigError("theoretical_p needs at least one sample");
  const CoefficientStream stream(dist, seed);
  const std::size_t width = target.coefficients.size();
  const double log_r = std::log(target.radius);
  std::vector<double> w(width);
  for (std::size_t n = 0; n < width; ++n)
    w[n] = std::exp(static_cast<double>(n) * log_r - std::lgamma(static_cast<double>(n) + 1.0));
  std::size_t hits = 0;
  for (std::size_t j = 0; j < mc_samples; ++j) {
    double s = 0.0;
    for (std::size_t n = 0; n < width && s < kInf; ++n) {
      const Coefficient c = stream.sample(j * width + n);
      s += c.log_abs > 700.0 ? kInf : std::abs(c.value() - target.coefficients[n]) * w[n];
    }
    hits += s < 0.5 * target.epsilon ? 1 : 0;
  }
  return binomial_estimate(hits, mc_samples);
}

double gaussian_disk_probability(std::complex<double> center, double radius) {
  if (!(radius >= 0.0)) throw ConfigError("disk radius must be >= 0");
  const double a = std::abs(center);
  if (a == 0.0) return -std::expm1(-radius * radius);
  auto density = [a](double s) {
    if (s <= 0.0) return 0.0;
    return 2.0 * s * std::exp(-(s - a) * (s - a) + log_bessel_I(a * s) - 2.0 * a * s);
  };
  using boost::math::quadrature::gauss_kronrod;
  // Split at the mode so the peak is resolved for large |a|.
  const double mid = std::clamp(a, 0.0, radius);
  double p = 0.0;
  if (mid > 0.0) p += gauss_kronrod<double, 61>::integrate(density, 0.0, mid, 15, 1e-13);
  if (radius > mid) p += gauss_kronrod<double, 61>::integrate(density, mid, radius, 15, 1e-13);
  return std::clamp(p, 0.0, 1.0);
}

double log_theoretical_Q(const DistSpec& dist, const RhoSequence& rho, std::size_t d,
                         double tail_cut) {
  if (d <= rho.start) throw ConfigError("Q_d is defined for d > N");
  return accumulate_tail(dist, rho, d, tail_cut).log_prod;
}

double theoretical_Q(const DistSpec& dist, const RhoSequence& rho, std::size_t d,
                     double tail_cut) {
  return std::exp(log_theoretical_Q(dist, rho, d, tail_cut));
}

QTable::QTable(const DistSpec& dist, const RhoSequence& rho, std::size_t d_min,
               std::size_t d_max, double tail_cut)
    : dist_(dist), rho_(rho), d_min_(d_min), tail_cut_(tail_cut) {
  if (d_min > d_max) throw ConfigError("QTable: empty range");
  log_q_.resize(d_max - d_min + 1);
  log_q_.back() = log_theoretical_Q(dist, rho, d_max, tail_cut);
  for (std::size_t d = d_max; d-- > d_min;) {
    const double t = tail_probability_log(dist, rho.log_value(d));
    log_q_[d - d_min] = log_q_[d + 1 - d_min] + (t >= 1.0 ? -kInf : std::log1p(-t));
  }
}

double QTable::log_q(std::size_t d) const {
  if (d >= d_min_ && d - d_min_ < log_q_.size()) return log_q_[d - d_min_];
  return log_theoretical_Q(dist_, rho_, d, tail_cut_);
}

double QTable::operator()(std::size_t d) const { return std::exp(log_q(d)); }

QFunction QTable::as_function() const {
  return [table = *this](std::size_t d) { return table(d); };
}

bool d_condition_holds(const TargetSpec& target, const RhoSequence& rho, std::size_t d) {
  const double log_r = std::log(target.radius);
  const double log_half_eps = std::log(0.5 * target.epsilon);
  for (std::size_t k = 0; k <= target.degree(); ++k) {
    const double dk = static_cast<double>(k);
    const double lhs = std::abs(target.coefficients[k]) +
                       std::exp(log_half_eps + std::lgamma(dk + 1.0) - dk * log_r);
    if (!(std::log(lhs) <= rho.log_value(k + d))) return false;
  }
  return true;
}

std::size_t threshold_M(const DistSpec& dist, const TargetSpec& target, const RhoSequence& rho) {
  target.validate();
  require_summable(dist);
  const std::size_t N = target.degree();
  // The d-condition is monotone in d; jump close to its first solution.
  const double log_r = std::log(target.radius);
  double need = 0.0;
  for (std::size_t k = 0; k <= N; ++k) {
    const double dk = static_cast<double>(k);
    const double lhs = std::abs(target.coefficients[k]) +
                       std::exp(std::log(0.5 * target.epsilon) + std::lgamma(dk + 1.0) - dk * log_r);
    need = std::max(need, std::log(lhs) - rho.log_a - dk);
  }
  std::size_t M = std::max<std::size_t>(N + 1, need > 1.0 ? static_cast<std::size_t>(need) - 1 : 0);
  while (!d_condition_holds(target, rho, M)) ++M;
  while (tail_sum(dist, rho, M) > 0.5) {
    if (++M > kMaxThreshold) throw NumericalError("threshold_M: no M below 10^7");
  }
  return M;
}

std::optional<double> joint_probability_closed_form(double p, const QFunction& Q, std::size_t N,
                                                    std::size_t d, std::size_t M) {
  if (d == 0) throw ConfigError("joint probability needs d >= 1");
  if (d < M) return std::nullopt;
  const double q = Q(N + 1);
  return p * p * q * q / Q(d);
}

double variance_prediction(double p, const QFunction& Q, std::size_t N, std::size_t M,
                           std::size_t n, std::span<const double> small_d_joints) {
  if (n == 0) throw ConfigError("variance_prediction needs n >= 1");
  if (M < 1) throw ConfigError("threshold M must be >= 1");
  const std::size_t needed = std::min(M - 1, n - 1);
  if (small_d_joints.size() < needed)
    throw ConfigError("variance_prediction: P(B0 ∩ B_d) missing for d < M (" +
                      std::to_string(small_d_joints.size()) + " of " + std::to_string(needed) +
                      " given)");
  const double pq = p * Q(N + 1);
  const double pq2 = pq * pq;
  const double dn = static_cast<double>(n);
  double var = dn * (pq - pq2);
  for (std::size_t d = 1; d < n; ++d) {
    const double joint = d < M ? small_d_joints[d - 1] : pq2 / Q(d);
    var += 2.0 * (dn - static_cast<double>(d)) * (joint - pq2);
  }
  return var;
}

VarianceScaling variance_scaling(std::span<const DensityTrace> traces,
                                 std::span<const std::size_t> n_grid) {
  if (traces.size() < 100) throw ConfigError("variance scaling needs at least 100 replicates");
  if (n_grid.size() < 5) throw ConfigError("variance scaling needs at least 5 grid points");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw ConfigError("n grid must be strictly increasing");
  if (n_grid.front() < 1 ||
      static_cast<double>(n_grid.back()) < std::pow(10.0, 1.5) * static_cast<double>(n_grid.front()))
    throw ConfigError("n grid must span at least 1.5 decades");
  for (const auto& t : traces)
    if (t.n_max() < n_grid.back()) throw ConfigError("trace shorter than the n grid");

  VarianceScaling out;
  std::vector<double> xs, ys;
  for (std::size_t n : n_grid) {
    std::vector<double> s;
    s.reserve(traces.size());
    for (const auto& t : traces) s.push_back(static_cast<double>(t.count(n)));
    const double v = sample_variance(s);
    if (!(v > 0.0)) throw NumericalError("S_n has zero variance at n = " + std::to_string(n));
    out.n_values.push_back(static_cast<double>(n));
    out.variances.push_back(v);
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(v));
  }
  out.fit = fit_line(xs, ys, 0.95);
  out.pass = out.fit.ci_high < 2.0;
  return out;
}

namespace {

Estimate mc_events(const DistSpec& dist, const TargetSpec& target, const RhoSequence& rho,
                   std::size_t replicates, std::uint64_t seed, const ParallelOptions& par,
                   std::size_t k0, std::optional<std::size_t> k1) {
  if (replicates == 0) throw ConfigError("Monte Carlo needs at least one replicate");
  const CoefficientSource proto = CoefficientSource::random(dist, seed);
  const EventBChecker check(proto, target, rho, default_n_check(proto, rho));
  const auto hits = replicate_map(
      replicates,
      [&](std::size_t j) -> char {
        SeriesHandle h(CoefficientSource::random(dist, mix_seed(seed, j)));
        if (!check(h, k0)) return 0;
        return !k1 || check(h, *k1) ? 1 : 0;
      },
      par);
  std::size_t count = 0;
  for (char c : hits) count += static_cast<std::size_t>(c);
  return binomial_estimate(count, replicates);
}

}  // namespace

Estimate mc_event_B_probability(const DistSpec& dist, const TargetSpec& target,
                                const RhoSequence& rho, std::size_t k, std::size_t replicates,
                                std::uint64_t seed, const ParallelOptions& par) {
  return mc_events(dist, target, rho, replicates, seed, par, k, std::nullopt);
}

Estimate mc_joint_probability(const DistSpec& dist, const TargetSpec& target,
                              const RhoSequence& rho, std::size_t d, std::size_t replicates,
                              std::uint64_t seed, const ParallelOptions& par) {
  if (d == 0) throw ConfigError("joint probability needs d >= 1");
  return mc_events(dist, target, rho, replicates, seed, par, 0, d);
}

}  // namespace rentire
