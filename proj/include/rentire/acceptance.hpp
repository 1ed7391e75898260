#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rentire/hypercyclicity.hpp"
#include "rentire/parallel.hpp"

namespace rentire {

/// g = 0, r = 1, ε = 0.5: the reference density configuration.
TargetSpec frozen_target();
/// g = 0, r = 1/2, ε = 1: hits are frequent enough (p·Q ≈ 0.034) for
/// joint-probability and variance statistics to be resolvable.
TargetSpec correlated_target();

enum class Profile { quick, full };
Profile profile_from_name(std::string_view name);
std::string_view profile_name(Profile p) noexcept;

struct AcceptanceOptions {
  Profile profile = Profile::full;
  std::uint64_t seed = 0;
  ParallelOptions par;
  /// Fault injection for the suite's own mutation test: Q_d is replaced by
  /// Q_{d+1} everywhere the closed forms use it.
  bool q_index_mutation = false;
};

struct CriterionResult {
  std::string id;
  bool pass = false;
  double measured = 0.0;
  std::string detail;
  double seconds = 0.0;
};

/// "A1" .. "A9".
std::vector<std::string> criterion_ids();

/// Throws ConfigError for an unknown id.
CriterionResult run_criterion(std::string_view id, const AcceptanceOptions& opt);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

/// One line per criterion: id, PASS/FAIL, measured value, detail.
std::string format_result(const CriterionResult& r);

}  // namespace rentire
