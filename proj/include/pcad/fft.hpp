#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace pcad {

using Spectrum = std::vector<std::complex<double>>;

constexpr bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

// In-place iterative radix-2 transform. Length must be a power of two.
// The inverse includes the 1/n scaling.
void fft_inplace(Spectrum& a, bool inverse);

// Forward transform of a real sequence.
Spectrum fft_forward(const std::vector<double>& values);

}  // namespace pcad
