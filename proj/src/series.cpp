#include "rentire/series.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "rentire/error.hpp"

namespace rentire {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Scan {
  std::size_t n_trunc = 0;
  double tail_bound = 0.0;
};

void check_eval_args(double r, double tol) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("radius must be finite and >= 0");
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("tolerance must lie in (0, 1)");
}

std::size_t floor_index(double r) {
  return std::max<std::size_t>(kTruncationFloor, static_cast<std::size_t>(std::ceil(3.0 * r)));
}

// `coef(n)` returns the n-th coefficient of the (already shifted) series.
template <class CoefAt>
Scan scan_truncation(CoefAt&& coef, double r, double tol, const TruncationLimits& limits) {
  check_eval_args(r, tol);
  const std::size_t floor = floor_index(r);
  if (r == 0.0) return {floor, 0.0};

  const double log_r = std::log(r);
  const double log_tol = std::log(tol);
  const bool verify = limits.verify_horizon > 0;
  auto log_term = [&](std::size_t n) {
    const double dn = static_cast<double>(n);
    return coef(n).log_abs + dn * log_r - std::lgamma(dn + 1.0) - r;
  };

  std::size_t n_trunc = floor;
  std::size_t run = 0;
  for (std::size_t n = floor + 1;; ++n) {
    if (n > limits.hard_cap + kSmallTermRun)
      throw TruncationError("series truncation exceeded the hard cap of " +
                                std::to_string(limits.hard_cap) + " terms",
                            n);
    const double lt = log_term(n);
    if (verify && lt + r >= 0.0)
      throw TruncationError("coefficient " + std::to_string(n) +
                                " rules out convergence at radius " + std::to_string(r),
                            n);
    if (lt >= log_tol) {
      n_trunc = n;
      run = 0;
    } else {
      ++run;
    }
    if (run >= kSmallTermRun && n >= limits.verify_horizon) break;
  }
  if (n_trunc > limits.hard_cap)
    throw TruncationError("series truncation exceeded the hard cap", n_trunc);

  double tail = 0.0;
  double log_max_abs = kNegInf;
  for (std::size_t n = n_trunc + 1; n <= n_trunc + kSmallTermRun; ++n) {
    tail += std::exp(log_term(n));
    log_max_abs = std::max(log_max_abs, coef(n).log_abs);
  }
  // Geometric continuation, assuming later |X_n| stay below the window max.
  const std::size_t next = n_trunc + kSmallTermRun + 1;
  const double ratio = r / static_cast<double>(next + 1);
  tail += std::exp(log_max_abs + log_poisson_weight(next, r)) / (1.0 - ratio);
  return {n_trunc, tail};
}

bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

}  // namespace

CoefficientSource::CoefficientSource(CoefficientStream stream) : impl_(stream) {}

CoefficientSource CoefficientSource::fixed(std::vector<std::complex<double>> prefix,
                                           std::complex<double> fill) {
  auto coefs = std::make_shared<std::vector<Coefficient>>();
  coefs->reserve(prefix.size());
  for (auto v : prefix) coefs->push_back(Coefficient::from_value(v));
  return CoefficientSource(Fixed{std::move(coefs), Coefficient::from_value(fill), 0});
}

Coefficient CoefficientSource::sample(std::uint64_t n) const {
  if (const auto* s = std::get_if<CoefficientStream>(&impl_)) return s->sample(n);
  const auto& f = std::get<Fixed>(impl_);
  const std::uint64_t idx = f.offset + n;
  return idx < f.prefix->size() ? (*f.prefix)[idx] : f.fill;
}

CoefficientSource CoefficientSource::shift(std::uint64_t k) const {
  if (const auto* s = std::get_if<CoefficientStream>(&impl_)) return s->shift(k);
  Fixed f = std::get<Fixed>(impl_);
  f.offset += k;
  return CoefficientSource(std::move(f));
}

const DistSpec* CoefficientSource::dist() const noexcept {
  if (const auto* s = std::get_if<CoefficientStream>(&impl_)) return &s->dist();
  return nullptr;
}

TruncationLimits default_limits(const CoefficientSource& source) {
  TruncationLimits limits;
  if (const DistSpec* d = source.dist(); d && d->family == Family::divergent_log_tail)
    limits.verify_horizon = limits.hard_cap;
  return limits;
}

double log_poisson_weight(std::size_t n, double r) {
  if (r == 0.0) return n == 0 ? 0.0 : kNegInf;
  const double dn = static_cast<double>(n);
  return dn * std::log(r) - std::lgamma(dn + 1.0) - r;
}

std::size_t truncation_index(const CoefficientSource& source, double r, double tol,
                             const TruncationLimits& limits) {
  return scan_truncation([&](std::size_t n) { return source.sample(n); }, r, tol, limits)
      .n_trunc;
}

std::complex<double> EvalResult::raw() const {
  return scaled_value * std::exp(log_scale);
}

std::size_t grid_size_for(std::size_t n_trunc) {
  return std::bit_ceil(std::max<std::size_t>(16, 4 * n_trunc));
}

std::vector<std::complex<double>> circle_values_fft(
    std::span<const std::complex<double>> coeffs, std::size_t m) {
  if (m == 0) throw ConfigError("grid size must be positive");
  std::vector<std::complex<double>> folded(m, 0.0), out(m);
  for (std::size_t n = 0; n < coeffs.size(); ++n) folded[n % m] += coeffs[n];
  detail::backward_dft(folded, out);
  return out;
}

std::vector<std::complex<double>> circle_values_direct(
    std::span<const std::complex<double>> coeffs, std::size_t m) {
  if (m == 0) throw ConfigError("grid size must be positive");
  std::vector<std::complex<double>> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    const std::complex<double> w{std::cos(theta), std::sin(theta)};
    std::complex<double> acc = 0.0;
    for (std::size_t n = coeffs.size(); n-- > 0;) acc = acc * w + coeffs[n];
    out[j] = acc;
  }
  return out;
}

SeriesHandle::SeriesHandle(CoefficientSource source)
    : SeriesHandle(source, default_limits(source)) {}

SeriesHandle::SeriesHandle(CoefficientSource source, TruncationLimits limits)
    : source_(std::move(source)), limits_(limits) {}

const Coefficient& SeriesHandle::coefficient(std::size_t n) {
  if (n >= cache_.size()) extend(n + 1);
  return cache_[n];
}

void SeriesHandle::extend(std::size_t count) {
  if (count <= cache_.size()) return;
  if (count > cache_.capacity()) cache_.reserve(std::max(count, 2 * cache_.capacity()));
  for (std::size_t n = cache_.size(); n < count; ++n) cache_.push_back(source_.sample(n));
}

std::size_t SeriesHandle::truncation_index(std::size_t k, double r, double tol) {
  return scan_truncation([&](std::size_t n) { return coefficient(k + n); }, r, tol, limits_)
      .n_trunc;
}

SeriesHandle::Terms SeriesHandle::scaled_terms(std::size_t k, double r, double tol) {
  const Scan scan =
      scan_truncation([&](std::size_t n) { return coefficient(k + n); }, r, tol, limits_);
  Terms terms;
  terms.tail_bound = scan.tail_bound;
  terms.coeffs.resize(scan.n_trunc + 1);
  for (std::size_t n = 0; n <= scan.n_trunc; ++n) {
    const Coefficient& c = coefficient(k + n);
    const double lw = log_poisson_weight(n, r);
    terms.coeffs[n] = lw == kNegInf ? std::complex<double>{} : std::exp(c.log_abs + lw) * c.unit;
  }
  return terms;
}

EvalResult SeriesHandle::evaluate_scaled(std::size_t k, std::complex<double> z, double tol) {
  const double r = std::abs(z);
  const Terms terms = scaled_terms(k, r, tol);
  const std::complex<double> w = r > 0.0 ? z / r : std::complex<double>{1.0, 0.0};
  std::complex<double> acc = 0.0;
  for (std::size_t n = terms.coeffs.size(); n-- > 0;) acc = acc * w + terms.coeffs[n];
  return {acc, r, terms.coeffs.size() - 1, terms.tail_bound};
}

CircleSamples SeriesHandle::circle_samples(std::size_t k, double r, std::size_t m, double tol) {
  Terms terms = scaled_terms(k, r, tol);
  const std::size_t n_trunc = terms.coeffs.size() - 1;
  if (m == 0) m = grid_size_for(n_trunc);
  if (m < 16 || !is_power_of_two(m))
    throw ConfigError("circle grid size must be a power of two >= 16");
  return {circle_values_fft(terms.coeffs, m), r, n_trunc, terms.tail_bound};
}

std::vector<double> SeriesHandle::block_decompose(std::size_t R, std::size_t j_max) {
  if (R < 1 || j_max < 1) throw ConfigError("block_decompose needs R >= 1 and j_max >= 1");
  const double r = static_cast<double>(R);
  std::vector<double> sups;
  sups.reserve(j_max + 1);
  std::size_t lo = 0;           // first index of the block
  std::size_t hi = 3 * R;       // last index of the block
  for (std::size_t j = 0; j <= j_max; ++j) {
    if (hi > 50'000'000) throw ConfigError("block_decompose: block index range too large");
    std::vector<std::complex<double>> coeffs(hi + 1, 0.0);
    for (std::size_t n = lo; n <= hi; ++n) {
      const Coefficient& c = coefficient(n);
      coeffs[n] = std::exp(c.log_abs + log_poisson_weight(n, r)) * c.unit;
    }
    const std::size_t m = std::bit_ceil(std::max<std::size_t>(256, 4 * hi));
    const auto values = circle_values_fft(coeffs, m);
    double sup = 0.0;
    for (const auto& v : values) sup = std::max(sup, std::abs(v));
    sups.push_back(sup);
    lo = hi + 1;
    hi *= 3;
  }
  return sups;
}

SeriesHandle SeriesHandle::shifted(std::size_t k) const {
  return SeriesHandle(source_.shift(k), limits_);
}

}  // namespace rentire
