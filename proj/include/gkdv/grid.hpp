#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

#include "gkdv/error.hpp"
#include "gkdv/fft.hpp"

namespace gkdv {

/// Uniform periodic sampling of [x0 - L, x0 + L) with N points.
///
/// Mode j of the real spectral ladder (j = 0..N/2) has wavenumber j*pi/L.
class PeriodicGrid {
 public:
  PeriodicGrid(double half_length, std::size_t samples, double offset = 0.0)
      : half_length_(half_length), offset_(offset), n_(samples) {
    if (!(std::isfinite(half_length_) && half_length_ > 0.0))
      throw InvalidArgument("grid half-length L must be finite and > 0");
    if (!std::isfinite(offset_)) throw InvalidArgument("grid offset x0 must be finite");
    if (n_ < 8 || !detail::is_power_of_two(n_))
      throw InvalidArgument("grid sample count N must be a power of two >= 8");
    fft_ = std::make_shared<const detail::RealFft>(n_);
  }

  double half_length() const noexcept { return half_length_; }
  double length() const noexcept { return 2.0 * half_length_; }
  double offset() const noexcept { return offset_; }
  std::size_t size() const noexcept { return n_; }
  std::size_t mode_count() const noexcept { return n_ / 2 + 1; }
  std::size_t nyquist() const noexcept { return n_ / 2; }
  double dx() const noexcept { return length() / static_cast<double>(n_); }
  double left() const noexcept { return offset_ - half_length_; }

  double x(std::size_t j) const noexcept { return left() + dx() * static_cast<double>(j); }

  std::vector<double> points() const {
    std::vector<double> xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
    return xs;
  }

  double wavenumber(std::size_t mode) const noexcept {
    return std::numbers::pi * static_cast<double>(mode) / half_length_;
  }
  double k_max() const noexcept { return wavenumber(nyquist()); }

  /// Diagnostic k_max*h for a layer of depth h.
  double kmax_h(double depth) const noexcept { return k_max() * depth; }

  /// Wraps a position onto the periodic domain [x0 - L, x0 + L).
  double wrap(double pos) const noexcept {
    const double shifted = std::fmod(pos - left(), length());
    return left() + (shifted < 0.0 ? shifted + length() : shifted);
  }

  /// Signed separation a - b folded into [-L, L).
  double separation(double a, double b) const noexcept {
    double d = std::fmod(a - b + half_length_, length());
    if (d < 0.0) d += length();
    return d - half_length_;
  }

  const detail::RealFft& fft() const noexcept { return *fft_; }

  friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) noexcept {
    return a.half_length_ == b.half_length_ && a.offset_ == b.offset_ && a.n_ == b.n_;
  }

 private:
  double half_length_;
  double offset_;
  std::size_t n_;
  std::shared_ptr<const detail::RealFft> fft_;
};

}  // namespace gkdv
