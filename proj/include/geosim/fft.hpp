#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace geosim::fft {

using cvec = std::vector<std::complex<double>>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Iterative radix-2 Cooley-Tukey, unscaled. Length must be a power of two.
inline void radix2(cvec& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; (j & bit) != 0; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  cvec twiddle(n / 2);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double sign = inverse ? 1.0 : -1.0;
    const double step = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t j = 0; j < len / 2; ++j)
      twiddle[j] = std::polar(1.0, step * static_cast<double>(j));
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[base + j];
        const std::complex<double> t = a[base + j + len / 2] * twiddle[j];
        a[base + j] = u + t;
        a[base + j + len / 2] = u - t;
      }
    }
  }
}

/// Bluestein's chirp-z transform: DFT of arbitrary length via one power-of-two
/// circular convolution. Phase arguments use k^2 mod 2n in integer arithmetic
/// so they stay accurate for large indices.
inline void bluestein(cvec& a, bool inverse) {
  const std::size_t n = a.size();
  const std::size_t m = next_pow2(2 * n + 1);
  const double sign = inverse ? 1.0 : -1.0;

  cvec chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const unsigned long long sq = (static_cast<unsigned long long>(k) * k) %
                                  (2ull * static_cast<unsigned long long>(n));
    chirp[k] = std::polar(1.0, sign * std::numbers::pi * static_cast<double>(sq) /
                                   static_cast<double>(n));
  }

  cvec x(m, {0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];

  cvec y(m, {0.0, 0.0});
  y[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    y[k] = std::conj(chirp[k]);
    y[m - k] = std::conj(chirp[k]);
  }

  radix2(x, false);
  radix2(y, false);
  for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
  radix2(x, true);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * scale * chirp[k];
}

} // namespace detail

/// In-place DFT of arbitrary length. Forward uses exp(-2*pi*i*jk/n) and is
/// unscaled; the inverse is scaled by 1/n so the pair round-trips.
inline void transform(cvec& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  if (detail::is_pow2(n)) {
    detail::radix2(a, inverse);
  } else {
    detail::bluestein(a, inverse);
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : a) v *= scale;
  }
}

/// Row-major 2-D DFT over nx columns and ny rows (nx is the fast axis).
inline void transform_2d(cvec& a, int nx, int ny, bool inverse) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("transform_2d: dimensions must be positive");
  if (a.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny))
    throw std::invalid_argument("transform_2d: data size does not match dimensions");

  cvec scratch(static_cast<std::size_t>(nx));
  for (int j = 0; j < ny; ++j) {
    const std::size_t off = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx);
    scratch.assign(a.begin() + static_cast<std::ptrdiff_t>(off),
                   a.begin() + static_cast<std::ptrdiff_t>(off + static_cast<std::size_t>(nx)));
    transform(scratch, inverse);
    std::copy(scratch.begin(), scratch.end(), a.begin() + static_cast<std::ptrdiff_t>(off));
  }

  scratch.resize(static_cast<std::size_t>(ny));
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j)
      scratch[static_cast<std::size_t>(j)] =
          a[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i)];
    transform(scratch, inverse);
    for (int j = 0; j < ny; ++j)
      a[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i)] =
          scratch[static_cast<std::size_t>(j)];
  }
}

} // namespace geosim::fft
