#include "core/fft.hpp"

#include <cmath>
#include <cstdint>

namespace vc {

namespace {

using cplx = std::complex<double>;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_pow2(std::vector<cplx>& a, bool inverse) {
  size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    cplx wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        cplx u = a[i + j];
        cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

// Bluestein: X_k = conj(chirp_k) * (a (*) b)_k with a_n = x_n * conj(chirp_n),
// b_n = chirp_n, chirp_n = exp(i*pi*n^2/N). Exponents reduced mod 2N to keep
// the angle argument small.
void fft_bluestein(std::vector<cplx>& x, bool inverse) {
  size_t n = x.size();
  size_t m = next_pow2(2 * n - 1);

  std::vector<cplx> chirp(n);
  for (size_t k = 0; k < n; ++k) {
    uint64_t sq = (static_cast<uint64_t>(k) * k) % (2 * n);
    double ang = M_PI * static_cast<double>(sq) / static_cast<double>(n);
    chirp[k] = cplx(std::cos(ang), (inverse ? -1.0 : 1.0) * std::sin(ang));
  }

  std::vector<cplx> a(m, cplx(0.0, 0.0)), b(m, cplx(0.0, 0.0));
  for (size_t k = 0; k < n; ++k) a[k] = x[k] * std::conj(chirp[k]);
  b[0] = chirp[0];
  for (size_t k = 1; k < n; ++k) b[k] = b[m - k] = chirp[k];

  fft_pow2(a, false);
  fft_pow2(b, false);
  for (size_t k = 0; k < m; ++k) a[k] *= b[k];
  fft_pow2(a, true);

  for (size_t k = 0; k < n; ++k) x[k] = a[k] * std::conj(chirp[k]);
  if (inverse) {
    for (auto& v : x) v /= static_cast<double>(n);
  }
}

}  // namespace

void fft(std::vector<cplx>& a, bool inverse) {
  if (a.size() <= 1) return;
  if (is_pow2(a.size()))
    fft_pow2(a, inverse);
  else
    fft_bluestein(a, inverse);
}

}  // namespace vc
