#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace vc {

// In-place DFT of arbitrary length: radix-2 Cooley-Tukey for powers of two,
// Bluestein's chirp-z otherwise. The inverse transform scales by 1/N.
void fft(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace vc
