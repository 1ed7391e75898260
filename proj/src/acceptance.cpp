#include "rentire/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <limits>

#include <boost/math/special_functions/bessel.hpp>

#include "rentire/error.hpp"
#include "rentire/growth.hpp"
#include "rentire/radius.hpp"
#include "rentire/random.hpp"
#include "rentire/series.hpp"
#include "rentire/stats.hpp"

namespace rentire {

namespace {

std::string fmt(const char* f, ...) {
  va_list ap, ap2;
  va_start(ap, f);
  va_copy(ap2, ap);
  const int n = std::vsnprintf(nullptr, 0, f, ap);
  va_end(ap);
  std::string out(static_cast<std::size_t>(std::max(n, 0)), '\0');
  std::vsnprintf(out.data(), out.size() + 1, f, ap2);
  va_end(ap2);
  return out;
}

std::uint64_t sub_seed(const AcceptanceOptions& opt, std::uint64_t criterion, std::uint64_t part = 0) {
  return mix_seed(opt.seed, criterion * 1000 + part);
}

bool quick(const AcceptanceOptions& opt) { return opt.profile == Profile::quick; }

QFunction q_function(const DistSpec& dist, const RhoSequence& rho, std::size_t d_max, bool mutate) {
  const QTable table(dist, rho, rho.start + 1, d_max + 1);
  if (mutate) return [table](std::size_t d) { return table(d + 1); };
  return table.as_function();
}

// A1: mean |f(r)|² over 10⁴ Gaussian seeds against I(r), plus the series
// value of I(1) against boost's I₀(2).
CriterionResult a1(const AcceptanceOptions& opt) {
  CriterionResult res{"A1", false, 0.0, {}, 0.0};
  const double oracle = boost::math::cyl_bessel_i(0, 2.0);
  const double rel_oracle = std::abs(std::exp(log_bessel_I(1.0)) / oracle - 1.0);
  bool pass = rel_oracle < 1e-12;
  double worst = 0.0;
  std::string d;
  for (double r : {1.0, 5.0, 10.0}) {
    const auto m = gaussian_moment_check(r, 2.0, 10'000, sub_seed(opt, 1, static_cast<std::uint64_t>(r)),
                                         DistSpec::complex_gaussian(), opt.par);
    const double z = std::abs(m.relative_error) / m.se;
    worst = std::max(worst, z);
    pass = pass && m.pass;
    d += fmt("r=%g rel_err=%.3g se=%.3g; ", r, m.relative_error, m.se);
  }
  res.pass = pass;
  res.measured = worst;
  res.detail = d + fmt("max |err|/SE=%.2f (limit 3), I(1)=%.10f vs boost rel %.1e", worst,
                       std::exp(log_bessel_I(1.0)), rel_oracle);
  return res;
}

// A2: I(r)·2√(πr)·e^{−2r} ∈ [0.99, 1.01] on r ∈ [100, 300].
CriterionResult a2(const AcceptanceOptions&) {
  CriterionResult res{"A2", false, 0.0, {}, 0.0};
  double lo = 2.0, hi = 0.0, worst_oracle = 0.0;
  for (double r = 100.0; r <= 300.0; r += 0.5) {
    const double li = log_bessel_I(r);
    const double ratio = std::exp(li - 2.0 * r + std::log(2.0 * std::sqrt(std::numbers::pi * r)));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    const double oracle = std::log(boost::math::cyl_bessel_i(0, 2.0 * r));
    worst_oracle = std::max(worst_oracle, std::abs(li - oracle) / oracle);
  }
  res.pass = lo >= 0.99 && hi <= 1.01 && worst_oracle < 1e-10;
  res.measured = std::max(1.0 - lo, hi - 1.0);
  res.detail = fmt("ratio range [%.6f, %.6f] (limit [0.99, 1.01]); log I vs boost rel %.1e", lo, hi,
                   worst_oracle);
  return res;
}

// A3: min_{n∈[10³,10⁵]} S_n/n ≥ 0.5·p·Q_{N+1} on every one of 10 seeds.
CriterionResult a3(const AcceptanceOptions& opt) {
  CriterionResult res{"A3", false, 0.0, {}, 0.0};
  const DistSpec dist = DistSpec::complex_gaussian();
  const TargetSpec target = frozen_target();
  const RhoSequence rho = build_rho_sequence(target);
  const QFunction Q = q_function(dist, rho, rho.start + 1, opt.q_index_mutation);
  const Estimate p = theoretical_p(dist, target, 1'000'000, sub_seed(opt, 3, 999));
  const double pq = p.value * Q(rho.start + 1);
  const std::size_t n_max = 100'000, n_from = 1'000, seeds = 10;

  struct Row {
    double min_b, min_a;
    std::uint32_t hits_b, hits_a;
    std::size_t ambiguous;
  };
  const auto rows = replicate_map(
      seeds,
      [&](std::size_t j) {
        const auto src = CoefficientSource::random(dist, mix_seed(sub_seed(opt, 3), j));
        const auto tb = density_trace(src, target, EventKind::B_events, n_max);
        const auto ta = density_trace(src, target, EventKind::A_events, n_max);
        return Row{tb.min_density(n_from, n_max), ta.min_density(n_from, n_max),
                   tb.count(n_max), ta.count(n_max), ta.ambiguous};
      },
      opt.par);

  double worst_b = std::numeric_limits<double>::infinity();
  double worst_a = worst_b;
  std::size_t ok_b = 0, ok_a = 0;
  std::uint32_t tot_b = 0, tot_a = 0;
  for (const auto& r : rows) {
    worst_b = std::min(worst_b, r.min_b);
    worst_a = std::min(worst_a, r.min_a);
    ok_b += r.min_b >= 0.5 * pq ? 1 : 0;
    ok_a += r.min_a >= 0.5 * pq ? 1 : 0;
    tot_b += r.hits_b;
    tot_a += r.hits_a;
  }
  res.pass = ok_b == seeds;
  res.measured = worst_b;
  res.detail = fmt(
      "p=%.5g±%.2g (disk %.5g) Q=%.4g pQ=%.4g; B events: %zu/%zu seeds pass, min density %.3g, "
      "%u hits in %zu shifts; A events: %zu/%zu pass, min density %.3g, %u hits",
      p.value, p.se, gaussian_disk_probability(0.0, 0.5 * target.epsilon), Q(rho.start + 1), pq, ok_b,
      seeds, worst_b, tot_b, seeds * n_max, ok_a, seeds, worst_a, tot_a);
  return res;
}

// A4: Monte Carlo P(B₀∩B_d) against p²Q²_{N+1}/Q_d, d ∈ {M, M+2, M+5}.
CriterionResult a4(const AcceptanceOptions& opt) {
  CriterionResult res{"A4", false, 0.0, {}, 0.0};
  const DistSpec dist = DistSpec::complex_gaussian();
  const std::size_t R = quick(opt) ? 20'000 : 100'000;
  bool pass = true;
  double worst = 0.0;
  std::string d;
  std::uint64_t part = 0;
  for (const auto& [name, target] : {std::pair{"frozen", frozen_target()},
                                     std::pair{"correlated", correlated_target()}}) {
    const RhoSequence rho = build_rho_sequence(target);
    const std::size_t M = threshold_M(dist, target, rho);
    const QFunction Q = q_function(dist, rho, M + 5, opt.q_index_mutation);
    const Estimate p = theoretical_p(dist, target, 1'000'000, sub_seed(opt, 4, 900 + part));
    d += fmt("%s%s M=%zu:", d.empty() ? "" : " ", name, M);
    for (std::size_t dd : {M, M + 2, M + 5}) {
      const double closed = *joint_probability_closed_form(p.value, Q, rho.start, dd, M);
      const Estimate mc = mc_joint_probability(dist, target, rho, dd, R, sub_seed(opt, 4, ++part), opt.par);
      const double se = std::max(binomial_se(closed, R), mc.se);
      const double z = se > 0.0 ? std::abs(mc.value - closed) / se : (mc.value == closed ? 0.0 : INFINITY);
      worst = std::max(worst, z);
      pass = pass && z <= 3.0;
      d += fmt(" d=%zu closed=%.4g mc=%.4g z=%.2f;", dd, closed, mc.value, z);
    }
  }
  res.pass = pass;
  res.measured = worst;
  res.detail = d + fmt(" max z=%.2f (limit 3)", worst);
  return res;
}

// A5: log-log slope of Var(S_n) over n ∈ [10², 10⁴] has upper 95% CI < 2.
CriterionResult a5(const AcceptanceOptions& opt) {
  CriterionResult res{"A5", false, 0.0, {}, 0.0};
  const DistSpec dist = DistSpec::complex_gaussian();
  const TargetSpec target = correlated_target();
  const std::size_t reps = quick(opt) ? 100 : 200, n_max = 10'000;
  std::vector<std::size_t> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(static_cast<std::size_t>(std::lround(100.0 * std::pow(10.0, i / 4.0))));

  const auto traces = replicate_map(
      reps,
      [&](std::size_t j) {
        return density_trace(CoefficientSource::random(dist, mix_seed(sub_seed(opt, 5), j)), target,
                             EventKind::B_events, n_max);
      },
      opt.par);
  const VarianceScaling vs = variance_scaling(traces, grid);

  const RhoSequence rho = build_rho_sequence(target);
  const std::size_t M = threshold_M(dist, target, rho);
  const QFunction Q = q_function(dist, rho, n_max, opt.q_index_mutation);
  const Estimate p = theoretical_p(dist, target, 1'000'000, sub_seed(opt, 5, 1));
  std::vector<double> joints;
  for (std::size_t dd = 1; dd < M; ++dd)
    joints.push_back(mc_joint_probability(dist, target, rho, dd, 100'000, sub_seed(opt, 5, 10 + dd), opt.par).value);
  const double predicted = variance_prediction(p.value, Q, rho.start, M, n_max, joints);

  res.pass = vs.pass;
  res.measured = vs.fit.ci_high;
  res.detail = fmt("slope=%.3f CI95=[%.3f, %.3f] (upper limit 2); Var(S_%zu) empirical %.4g vs predicted %.4g",
                   vs.fit.slope, vs.fit.ci_low, vs.fit.ci_high, n_max, vs.variances.back(), predicted);
  return res;
}

// A6: pooled sup-norm log ratio against √(log r)e^r r^{-1/4} shows no
// upward drift between the second and the top decade of r ∈ [10, 200].
CriterionResult a6(const AcceptanceOptions& opt) {
  CriterionResult res{"A6", false, 0.0, {}, 0.0};
  const DistSpec dist = DistSpec::complex_gaussian();
  const std::size_t seeds = quick(opt) ? 20 : 100;
  std::vector<double> radii;
  for (int r = 10; r <= 200; r += 5) radii.push_back(r);
  const auto curves = replicate_map(
      seeds,
      [&](std::size_t j) {
        SeriesHandle h(CoefficientSource::random(dist, mix_seed(sub_seed(opt, 6), j)));
        return growth_ratio_curve(h, radii, kSupNorm, BoundKind::sup_norm);
      },
      opt.par);
  GrowthCurve pooled = curves.front();
  for (const auto& c : curves)
    for (std::size_t i = 0; i < radii.size(); ++i)
      pooled.log_ratios[i] = std::max(pooled.log_ratios[i], c.log_ratios[i]);
  summarize_curve(pooled);
  const double drift = pooled.top_decade_max - pooled.second_decade_max;
  res.pass = pooled.bounded_above && drift <= 0.5;
  res.measured = drift;
  res.detail = fmt("top-decade max %.4f, second-decade max %.4f, drift %.4f (limit 0.5); fitted C=%.4f over %zu seeds",
                   pooled.top_decade_max, pooled.second_decade_max, drift, std::exp(pooled.max_log_ratio), seeds);
  return res;
}

// A7: E|f(r)|^p = Γ(p/2+1)·I(r)^{p/2} within 3 bootstrap SE.
CriterionResult a7(const AcceptanceOptions& opt) {
  CriterionResult res{"A7", false, 0.0, {}, 0.0};
  bool pass = true;
  double worst = 0.0;
  std::string d;
  std::uint64_t part = 0;
  for (double p : {1.0, 2.0, 4.0})
    for (double r : {1.0, 5.0, 10.0}) {
      const auto m = gaussian_moment_check(r, p, 10'000, sub_seed(opt, 7, ++part),
                                           DistSpec::complex_gaussian(), opt.par);
      const double z = std::abs(m.relative_error) / m.se;
      worst = std::max(worst, z);
      pass = pass && m.pass;
      d += fmt("p=%g r=%g z=%.2f; ", p, r, z);
    }
  res.pass = pass;
  res.measured = worst;
  res.detail = d + fmt("max |err|/SE=%.2f (limit 3)", worst);
  return res;
}

// A8: root-test dichotomy over 200 seeds, n ≤ 10⁴.
CriterionResult a8(const AcceptanceOptions& opt) {
  CriterionResult res{"A8", false, 0.0, {}, 0.0};
  const std::size_t seeds = 200, n_max = 10'000, window = n_max / 2;
  struct Fam {
    const char* name;
    DistSpec dist;
  };
  const Fam fams[] = {{"divergent", DistSpec::divergent_log_tail()},
                      {"borderline(2)", DistSpec::borderline_tail(2.0)},
                      {"gaussian", DistSpec::complex_gaussian()}};
  double frac[3][2] = {};
  for (int f = 0; f < 3; ++f) {
    const auto est = replicate_map(
        seeds,
        [&](std::size_t j) {
          const auto prof = root_test_profile(
              CoefficientSource::random(fams[f].dist, mix_seed(sub_seed(opt, 8, f), j)), n_max);
          return radius_estimate(prof, window);
        },
        opt.par);
    for (const auto& e : est) {
      frac[f][0] += (f == 0 ? e.trailing_max > 1.0 : e.trailing_max < 0.1) ? 1.0 : 0.0;
      frac[f][1] += e.global_max > 1.0 ? 1.0 : 0.0;
    }
    frac[f][0] /= seeds;
    frac[f][1] /= seeds;
  }
  // The running max over n <= 10^4 always exceeds 1 (t_1 = |X_1| >= e for
  // this law), so only the trailing window carries information.
  const double exact_trailing =
      root_test_crossing_probability(DistSpec::divergent_log_tail(), 1.0, n_max - window + 1, n_max);
  res.pass = frac[0][0] >= 0.9 && frac[1][0] >= 0.99 && frac[2][0] >= 0.99;
  res.measured = frac[0][0];
  res.detail = fmt(
      "divergent: trailing max (n > %zu) > 1 on %.3f (limit 0.90, exact probability %.3f); "
      "borderline(2) trailing max < 0.1 on %.3f, gaussian on %.3f (limit 0.99); "
      "divergent running max > 1 on %.3f",
      n_max - window, frac[0][0], exact_trailing, frac[1][0], frac[2][0], frac[0][1]);
  return res;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }
bool same_bits(std::complex<double> a, std::complex<double> b) {
  return same_bits(a.real(), b.real()) && same_bits(a.imag(), b.imag());
}

// A9: exact identities.
CriterionResult a9(const AcceptanceOptions& opt) {
  CriterionResult res{"A9", false, 0.0, {}, 0.0};
  const DistSpec gauss = DistSpec::complex_gaussian();

  std::size_t shift_bad = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const CoefficientStream st(gauss, mix_seed(sub_seed(opt, 9, 1), s));
    for (std::uint64_t k : {1, 7, 100, 12345})
      for (std::uint64_t n = 0; n < 50; ++n) {
        const auto a = st.shift(k).sample(n), b = st.sample(n + k);
        if (!same_bits(a.log_abs, b.log_abs) || !same_bits(a.unit, b.unit)) ++shift_bad;
      }
    SeriesHandle h{CoefficientSource(st)};
    for (std::size_t k : {1, 5, 40}) {
      SeriesHandle hk = h.shifted(k);
      const std::complex<double> z{0.7, -1.3};
      if (!same_bits(h.evaluate_scaled(k, z).scaled_value, hk.evaluate_scaled(0, z).scaled_value)) ++shift_bad;
    }
  }

  std::size_t b_hits = 0, b_not_a = 0;
  {
    const TargetSpec t = correlated_target();
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto src = CoefficientSource::random(gauss, mix_seed(sub_seed(opt, 9, 2), s));
      const EventBChecker B(src, t);
      SeriesHandle h(src);
      for (std::size_t k = 0; k < 100; ++k) {
        if (!B(h, k)) continue;
        ++b_hits;
        if (!event_A(h, k, t).hit) ++b_not_a;
      }
    }
  }

  std::size_t order_bad = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    SeriesHandle h(CoefficientSource::random(gauss, mix_seed(sub_seed(opt, 9, 3), s)));
    for (double r : {1.0, 5.0, 10.0, 50.0}) {
      const double m1 = log_circle_mean(h, r, 1), m2 = log_circle_mean(h, r, 2),
                   m4 = log_circle_mean(h, r, 4), mi = log_sup_norm(h, r);
      const double slack = 1e-12 * std::abs(mi);
      if (!(m1 <= m2 + slack && m2 <= m4 + slack && m4 <= mi + slack)) ++order_bad;
    }
  }

  double parseval_err = 0.0;
  {
    std::vector<std::complex<double>> prefix;
    const CoefficientStream st(gauss, sub_seed(opt, 9, 4));
    for (std::uint64_t n = 0; n < 30; ++n) prefix.push_back(st.sample(n).value());
    SeriesHandle h(CoefficientSource::fixed(prefix));
    for (double r : {0.5, 1.0, 2.0, 5.0}) {
      double direct = 0.0;
      for (std::size_t n = 0; n < prefix.size(); ++n) {
        const double dn = static_cast<double>(n);
        direct += std::norm(prefix[n]) * std::exp(2.0 * (dn * std::log(r) - std::lgamma(dn + 1.0)));
      }
      const double quad = std::exp(2.0 * log_circle_mean(h, r, 2));
      parseval_err = std::max(parseval_err, std::abs(quad / direct - 1.0));
    }
  }

  double mass_err = 0.0;
  for (double r : {0.1, 1.0, 10.0, 100.0, 300.0}) {
    double s = 0.0;
    const auto n_end = static_cast<std::size_t>(r + 40.0 * std::sqrt(r) + 100.0);
    for (std::size_t n = 0; n <= n_end; ++n) s += std::exp(log_poisson_weight(n, r));
    mass_err = std::max(mass_err, std::abs(s - 1.0));
  }

  double deriv_err = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    SeriesHandle h(CoefficientSource::random(gauss, mix_seed(sub_seed(opt, 9, 5), s)));
    for (const std::complex<double> z : {std::complex<double>{0.3, 0.4}, {2.0, -1.0}, {-3.5, 2.5}}) {
      const double step = 1e-4 * std::max(1.0, std::abs(z));
      const auto fp = h.evaluate_scaled(1, z).raw();
      const auto cd = (h.evaluate_scaled(0, z + step).raw() - h.evaluate_scaled(0, z - step).raw()) / (2.0 * step);
      deriv_err = std::max(deriv_err, std::abs(cd - fp) / std::abs(fp));
    }
  }

  res.pass = shift_bad == 0 && b_hits > 0 && b_not_a == 0 && order_bad == 0 && parseval_err < 1e-8 &&
             mass_err < 1e-12 && deriv_err < 1e-6;
  res.measured = static_cast<double>(shift_bad + b_not_a + order_bad);
  res.detail = fmt(
      "shift mismatches %zu; B without A %zu of %zu B hits in 10^4 pairs; power-mean violations %zu; "
      "Parseval rel %.1e (limit 1e-8); Poisson mass %.1e (limit 1e-12); derivative rel %.1e (limit 1e-6)",
      shift_bad, b_not_a, b_hits, order_bad, parseval_err, mass_err, deriv_err);
  return res;
}

}  // namespace

TargetSpec frozen_target() { return {{0.0}, 1.0, 0.5}; }
TargetSpec correlated_target() { return {{0.0}, 0.5, 1.0}; }

Profile profile_from_name(std::string_view name) {
  if (name == "quick") return Profile::quick;
  if (name == "full") return Profile::full;
  throw ConfigError("unknown profile '" + std::string(name) + "' (expected quick or full)");
}

std::string_view profile_name(Profile p) noexcept { return p == Profile::quick ? "quick" : "full"; }

std::vector<std::string> criterion_ids() {
  return {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9"};
}

CriterionResult run_criterion(std::string_view id, const AcceptanceOptions& opt) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  static constexpr std::pair<std::string_view, Fn> table[] = {
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}};
  for (const auto& [name, fn] : table) {
    if (name != id) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r = fn(opt);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
  throw ConfigError("unknown acceptance criterion '" + std::string(id) + "'");
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  for (const auto& id : criterion_ids()) out.push_back(run_criterion(id, opt));
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt("%-3s %s  measured=%-12.6g %6.1fs  %s", r.id.c_str(), r.pass ? "PASS" : "FAIL", r.measured,
             r.seconds, r.detail.c_str());
}

}  // namespace rentire
