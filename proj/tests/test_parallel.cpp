#include <stdexcept>
#include <string>

#include "doctest.h"
#include "rentire/growth.hpp"
#include "rentire/hypercyclicity.hpp"
#include "rentire/parallel.hpp"
#include "rentire/random.hpp"
#include "rentire/acceptance.hpp"

using namespace rentire;

TEST_CASE("replicate_map returns results in index order for any thread count") {
  auto fn = [](std::size_t j) { return splitmix64(j) % 1000; };
  const auto serial = replicate_map(500, fn, ParallelOptions::serial());
  CHECK(replicate_map(500, fn, {Execution::parallel, 1}) == serial);
  CHECK(replicate_map(500, fn, {Execution::parallel, 4}) == serial);
  CHECK(replicate_map(0, fn).empty());
}

TEST_CASE("the lowest-index exception is the one rethrown") {
  auto fn = [](std::size_t j) -> int {
    if (j == 3) throw std::runtime_error("three");
    if (j == 7) throw std::runtime_error("seven");
    return static_cast<int>(j);
  };
  for (int threads : {1, 4}) {
    try {
      replicate_map(20, fn, {Execution::parallel, threads});
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "three");
    }
  }
  CHECK_THROWS_WITH(replicate_map(20, fn, ParallelOptions::serial()), "three");
}

TEST_CASE("Monte Carlo results do not depend on the thread count") {
  const auto one = gaussian_moment_check(5.0, 2.0, 10000, 11, DistSpec::complex_gaussian(), {Execution::parallel, 1});
  const auto four = gaussian_moment_check(5.0, 2.0, 10000, 11, DistSpec::complex_gaussian(), {Execution::parallel, 4});
  const auto ser = gaussian_moment_check(5.0, 2.0, 10000, 11, DistSpec::complex_gaussian(), ParallelOptions::serial());
  CHECK(one.relative_error == four.relative_error);
  CHECK(one.se == four.se);
  CHECK(one.relative_error == ser.relative_error);

  const TargetSpec t = correlated_target();
  const auto rho = build_rho_sequence(t);
  const auto a = mc_joint_probability(DistSpec::complex_gaussian(), t, rho, 2, 20000, 5, {Execution::parallel, 1});
  const auto b = mc_joint_probability(DistSpec::complex_gaussian(), t, rho, 2, 20000, 5, {Execution::parallel, 3});
  CHECK(a.value == b.value);
}
