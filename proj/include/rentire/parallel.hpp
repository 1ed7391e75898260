#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <type_traits>
#include <vector>

#include <omp.h>

namespace rentire {

enum class Execution { serial, parallel };

struct ParallelOptions {
  Execution execution = Execution::parallel;
  int threads = 0;  ///< 0 = OpenMP default

  static ParallelOptions serial() { return {Execution::serial, 1}; }
};

/// Runs fn(j) for j = 0..count-1 and returns the results in index order.
/// Work items must be independent; any reduction over the result happens
/// afterwards in fixed order, so output does not depend on the thread count.
/// If several items throw, the exception of the lowest index is rethrown.
template <class F>
auto replicate_map(std::size_t count, F&& fn, const ParallelOptions& opt = {})
    -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);

  if (opt.execution == Execution::serial) {
    for (std::size_t j = 0; j < count; ++j) slots[j].emplace(fn(j));
  } else {
    const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::int64_t j = 0; j < n; ++j) {
      try {
        slots[static_cast<std::size_t>(j)].emplace(fn(static_cast<std::size_t>(j)));
      } catch (...) {
        errors[static_cast<std::size_t>(j)] = std::current_exception();
      }
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace rentire
