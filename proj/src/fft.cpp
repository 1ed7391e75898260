#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace rentire::detail {

namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [size, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t m) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(m);
    if (it != plans_.end()) return it->second;
    // Planning with FFTW_ESTIMATE does not touch the arrays' contents.
    std::vector<std::complex<double>> a(m), b(m);
    fftw_plan plan = fftw_plan_dft_1d(
        static_cast<int>(m), reinterpret_cast<fftw_complex*>(a.data()),
        reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
    if (plan == nullptr) throw std::runtime_error("fftw planning failed");
    plans_.emplace(m, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void backward_dft(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) {
  if (in.size() != out.size()) throw std::invalid_argument("backward_dft: size mismatch");
  fftw_plan plan = plan_cache().get(in.size());
  // Planned with FFTW_PRESERVE_INPUT, so the input is never written.
  fftw_execute_dft(plan,
                   const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace rentire::detail
