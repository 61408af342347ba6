#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "gkdv/error.hpp"

namespace gkdv::detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Radix-2 transform of real sequences of power-of-two length n.
///
/// The real input is packed into a complex sequence of length n/2, transformed,
/// and split into the n/2+1 non-redundant coefficients. Twiddles are computed
/// directly (not by recurrence) so round-off does not accumulate with n.
/// Instances are immutable after construction and safe to share across threads.
class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n), half_(n / 2) {
    if (n < 2 || !is_power_of_two(n)) throw InvalidArgument("FFT length must be a power of two >= 2");
    const double two_pi = 2.0 * std::numbers::pi;
    half_twiddle_.resize(half_ / 2 + 1);
    for (std::size_t j = 0; j < half_twiddle_.size(); ++j) {
      const double a = -two_pi * static_cast<double>(j) / static_cast<double>(half_);
      half_twiddle_[j] = {std::cos(a), std::sin(a)};
    }
    split_twiddle_.resize(half_ + 1);
    for (std::size_t k = 0; k <= half_; ++k) {
      const double a = -two_pi * static_cast<double>(k) / static_cast<double>(n_);
      split_twiddle_[k] = {std::cos(a), std::sin(a)};
    }
    bit_reverse_.resize(half_);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < half_) ++bits;
    for (std::size_t i = 0; i < half_; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      bit_reverse_[i] = r;
    }
  }

  std::size_t size() const noexcept { return n_; }

  /// Unnormalized forward transform: X_k = sum_j x_j exp(-2 pi i j k / n), k = 0..n/2.
  void forward(std::span<const double> x, std::span<std::complex<double>> out) const {
    std::vector<std::complex<double>> z(half_);
    for (std::size_t j = 0; j < half_; ++j) z[j] = {x[2 * j], x[2 * j + 1]};
    transform(z);
    for (std::size_t k = 0; k <= half_; ++k) {
      const auto zk = z[k % half_];
      const auto zc = std::conj(z[(half_ - k) % half_]);
      const auto even = 0.5 * (zk + zc);
      const auto odd = std::complex<double>(0.0, -0.5) * (zk - zc);
      out[k] = even + split_twiddle_[k] * odd;
    }
    out[0].imag(0.0);
    out[half_].imag(0.0);
  }

  /// Inverse of forward() including the 1/n factor. Only the real parts of the
  /// first and last coefficients are used.
  void inverse(std::span<const std::complex<double>> coeffs, std::span<double> x) const {
    std::vector<std::complex<double>> z(half_);
    for (std::size_t k = 0; k < half_; ++k) {
      auto xk = coeffs[k];
      auto xm = coeffs[half_ - k];
      if (k == 0) {
        xk.imag(0.0);
        xm.imag(0.0);
      }
      const auto even = 0.5 * (xk + std::conj(xm));
      const auto odd = 0.5 * (xk - std::conj(xm)) * std::conj(split_twiddle_[k]);
      // inverse via conjugation: ifft(Z) = conj(fft(conj Z)) / m
      z[k] = std::conj(even + std::complex<double>(0.0, 1.0) * odd);
    }
    transform(z);
    const double scale = 1.0 / static_cast<double>(half_);
    for (std::size_t j = 0; j < half_; ++j) {
      const auto v = std::conj(z[j]) * scale;
      x[2 * j] = v.real();
      x[2 * j + 1] = v.imag();
    }
  }

 private:
  void transform(std::vector<std::complex<double>>& a) const {
    const std::size_t m = a.size();
    for (std::size_t i = 0; i < m; ++i)
      if (i < bit_reverse_[i]) std::swap(a[i], a[bit_reverse_[i]]);
    for (std::size_t len = 2; len <= m; len <<= 1) {
      const std::size_t stride = m / len;
      const std::size_t half_len = len / 2;
      for (std::size_t start = 0; start < m; start += len) {
        for (std::size_t j = 0; j < half_len; ++j) {
          const auto w = half_twiddle_[j * stride];
          const auto u = a[start + j];
          const auto v = a[start + j + half_len] * w;
          a[start + j] = u + v;
          a[start + j + half_len] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  std::size_t half_;
  std::vector<std::complex<double>> half_twiddle_;
  std::vector<std::complex<double>> split_twiddle_;
  std::vector<std::size_t> bit_reverse_;
};

}  // namespace gkdv::detail
