#include "rentire/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rentire/error.hpp"
#include "rentire/random.hpp"

namespace rentire {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Beyond this log-magnitude the Gaussian part of G + H sits below one ulp
// of |H|.
constexpr double kHeavyDominates = 40.0;

std::complex<double> unit_phase(double u) {
  const double phi = kTwoPi * u;
  return {std::cos(phi), std::sin(phi)};
}

Coefficient gaussian_draw(std::uint64_t seed, std::uint64_t index) {
  // |X|² = -log U is Exp(1): two N(0, 1/2) components in polar form.
  const double u0 = counter_uniform(seed, index, 0);
  const double u1 = counter_uniform(seed, index, 1);
  return {0.5 * std::log(-std::log(u0)), unit_phase(u1)};
}

// Solves s + α·log s = L for s > 0 (the map is increasing).
double borderline_log_log_radius(double L, double alpha) {
  double lo = 0.0;
  double hi = std::max(1.0, L);
  double s = std::clamp(L - alpha * std::log(std::max(L, 1.0)), 0.5 * hi, hi);
  for (int it = 0; it < 100; ++it) {
    const double g = s + alpha * std::log(s) - L;
    if (g > 0) hi = s; else lo = s;
    if (std::abs(g) < 1e-14 * std::max(1.0, L)) break;
    double next = s - g / (1.0 + alpha / s);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == s) break;
    s = next;
  }
  return s;
}

double borderline_tail_at(double t, double alpha) {
  // t = log r. The formula exceeds 1 for t close to 1; it is clamped there.
  if (t <= 1.0) return 1.0;
  const double lt = std::log(t);
  const double log_tail = -(std::log(t) + alpha * std::log(lt));
  return log_tail >= 0.0 ? 1.0 : std::exp(log_tail);
}

}  // namespace

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::complex_gaussian: return "complex_gaussian";
    case Family::gaussian_plus_log_pareto: return "gaussian_plus_log_pareto";
    case Family::divergent_log_tail: return "divergent_log_tail";
    case Family::borderline_tail: return "borderline_tail";
  }
  return "?";
}

Family family_from_name(std::string_view name) {
  for (Family f : {Family::complex_gaussian, Family::gaussian_plus_log_pareto,
                   Family::divergent_log_tail, Family::borderline_tail}) {
    if (family_name(f) == name) return f;
  }
  throw ConfigError("unknown distribution family '" + std::string(name) + "'");
}

void DistSpec::validate() const {
  if (family == Family::gaussian_plus_log_pareto && !(beta > 0.0))
    throw ConfigError("gaussian_plus_log_pareto requires beta > 0");
  if (family == Family::borderline_tail && !(alpha > 0.0))
    throw ConfigError("borderline_tail requires alpha > 0");
}

Coefficient Coefficient::from_value(std::complex<double> v) {
  const double a = std::abs(v);
  if (a == 0.0) return {};
  return {std::log(a), v / a};
}

std::complex<double> Coefficient::value() const {
  return std::exp(log_abs) * unit;
}

double Coefficient::abs() const { return std::exp(log_abs); }

Coefficient sample(const DistSpec& dist, std::uint64_t seed,
                   std::uint64_t index) {
  switch (dist.family) {
    case Family::complex_gaussian:
      return gaussian_draw(seed, index);

    case Family::gaussian_plus_log_pareto: {
      const double u2 = counter_uniform(seed, index, 2);
      const double log_h = std::pow(u2, -1.0 / (1.0 + dist.beta));
      const std::complex<double> h_unit = unit_phase(counter_uniform(seed, index, 3));
      if (log_h > kHeavyDominates) return {log_h, h_unit};
      const std::complex<double> g = gaussian_draw(seed, index).value();
      return Coefficient::from_value(g + std::exp(log_h) * h_unit);
    }

    case Family::divergent_log_tail: {
      const double u0 = counter_uniform(seed, index, 0);
      return {1.0 / u0, unit_phase(counter_uniform(seed, index, 1))};
    }

    case Family::borderline_tail: {
      const double u0 = counter_uniform(seed, index, 0);
      const double s = borderline_log_log_radius(-std::log(u0), dist.alpha);
      return {std::exp(s), unit_phase(counter_uniform(seed, index, 1))};
    }
  }
  return {};
}

double tail_probability_log(const DistSpec& dist, double log_r) {
  if (log_r == -kInf) return 1.0;
  switch (dist.family) {
    case Family::complex_gaussian:
      if (log_r > 400.0) return 0.0;
      return std::exp(-std::exp(2.0 * log_r));

    case Family::gaussian_plus_log_pareto: {
      const double gauss = log_r > 400.0 ? 0.0 : std::exp(-std::exp(2.0 * log_r));
      const double heavy = log_r < 1.0 ? 1.0 : std::pow(log_r, -(1.0 + dist.beta));
      return std::min(1.0, heavy + gauss);
    }

    case Family::divergent_log_tail:
      return log_r <= 1.0 ? 1.0 : 1.0 / log_r;

    case Family::borderline_tail:
      return borderline_tail_at(log_r, dist.alpha);
  }
  return 1.0;
}

double tail_probability(const DistSpec& dist, double r) {
  if (!(r > 0.0)) return 1.0;
  return tail_probability_log(dist, std::log(r));
}

DecayReport check_decay_condition(const DistSpec& dist, DecayCondition cond,
                                  std::span<const double> r_grid) {
  if (r_grid.empty()) throw ConfigError("check_decay_condition: empty grid");
  DecayReport rep;
  rep.radii.assign(r_grid.begin(), r_grid.end());
  rep.products.reserve(r_grid.size());
  for (double r : r_grid) {
    const double lr = std::log(r);
    const double tail = tail_probability_log(dist, lr);
    double weight = 0.0;
    switch (cond.kind) {
      case DecayCondition::Kind::hypercyclic:
        weight = std::pow(lr, 1.0 + cond.parameter);
        break;
      case DecayCondition::Kind::divergent:
        weight = lr;
        break;
      case DecayCondition::Kind::borderline:
        if (lr <= 1.0)
          throw ConfigError("borderline decay check needs radii above e");
        weight = lr * std::pow(std::log(lr), cond.parameter);
        break;
    }
    rep.products.push_back(weight * tail);
  }

  std::vector<double> sorted = rep.products;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 ? sorted[n / 2]
                               : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  const auto top = rep.products.begin() + static_cast<std::ptrdiff_t>(n / 2);
  const double top_max = *std::max_element(top, rep.products.end());
  rep.bounded = top_max <= 2.0 * median;
  return rep;
}

std::vector<double> log_spaced_radii(double t_min, double t_max,
                                     std::size_t count) {
  if (count < 2 || !(t_min > 0.0) || !(t_max > t_min))
    throw ConfigError("log_spaced_radii: need 0 < t_min < t_max, count >= 2");
  std::vector<double> out(count);
  const double ratio = std::log(t_max / t_min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(t_min * std::exp(ratio * static_cast<double>(i)));
  return out;
}

double abs_mgf(const DistSpec& dist, double t) {
  if (t < 0.0) throw ConfigError("abs_mgf: t must be nonnegative");
  if (t == 0.0) return 1.0;
  if (dist.family != Family::complex_gaussian) return kInf;
  // |X| is Rayleigh with σ² = 1/2.
  const double half = 0.5 * t;
  return 1.0 + t * std::sqrt(std::numbers::pi) * 0.5 * std::exp(half * half) *
                   (1.0 + std::erf(half));
}

bool is_subgaussian(const DistSpec& dist) noexcept {
  return dist.family == Family::complex_gaussian;
}

void to_json(nlohmann::json& j, const DistConfig& c) {
  j = nlohmann::json{{"family", family_name(c.dist.family)},
                     {"beta", c.dist.beta},
                     {"alpha", c.dist.alpha},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, DistConfig& c) {
  if (!j.is_object()) throw ConfigError("distribution fragment must be an object");
  DistConfig out;
  out.dist.family = family_from_name(j.value("family", std::string("complex_gaussian")));
  out.dist.beta = j.value("beta", 1.0);
  out.dist.alpha = j.value("alpha", 2.0);
  out.seed = j.value("seed", std::uint64_t{0});
  out.dist.validate();
  c = out;
}

}  // namespace rentire
