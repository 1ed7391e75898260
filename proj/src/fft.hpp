#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace rentire::detail {

/// out[j] = Σ_n in[n]·exp(+2πi·jn/m), with in.size() == out.size() == m.
/// Plans are created once per size and shared; execution is thread-safe.
void backward_dft(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out);

}  // namespace rentire::detail
