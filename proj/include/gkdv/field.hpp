#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gkdv/error.hpp"
#include "gkdv/grid.hpp"

namespace gkdv {

using Complex = std::complex<double>;

/// Real samples on a PeriodicGrid together with their spectral coefficients.
///
/// coeffs()[j] is the amplitude of exp(i k_j (x - left)) normalized by 1/N, so
/// values_n = c_0 + 2 Re sum_{0<j<N/2} c_j e^{...} + c_{N/2} (-1)^n. The
/// negative-wavenumber half is implied by conjugate symmetry. Immutable.
class SpectralField {
 public:
  static SpectralField from_values(PeriodicGrid grid, std::vector<double> values) {
    if (values.size() != grid.size()) throw InvalidArgument("sample count does not match grid");
    std::vector<Complex> coeffs(grid.mode_count());
    grid.fft().forward(values, coeffs);
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& c : coeffs) c *= scale;
    return SpectralField(std::move(grid), std::move(values), std::move(coeffs));
  }

  /// Builds the field from half-spectrum coefficients. The imaginary parts of
  /// the mean and Nyquist modes are dropped so the field is real.
  static SpectralField from_coeffs(PeriodicGrid grid, std::vector<Complex> coeffs) {
    if (coeffs.size() != grid.mode_count()) throw InvalidArgument("coefficient count does not match grid");
    coeffs.front().imag(0.0);
    coeffs.back().imag(0.0);
    std::vector<Complex> scaled(coeffs);
    for (auto& c : scaled) c *= static_cast<double>(grid.size());
    std::vector<double> values(grid.size());
    grid.fft().inverse(scaled, values);
    return SpectralField(std::move(grid), std::move(values), std::move(coeffs));
  }

  static SpectralField from_function(const PeriodicGrid& grid, const std::function<double(double)>& f) {
    std::vector<double> values(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) values[j] = f(grid.x(j));
    return from_values(grid, std::move(values));
  }

  static SpectralField zeros(const PeriodicGrid& grid) {
    return SpectralField(grid, std::vector<double>(grid.size(), 0.0), std::vector<Complex>(grid.mode_count()));
  }

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  std::size_t size() const noexcept { return values_.size(); }

  double mean() const noexcept { return coeffs_.front().real(); }
  /// Integral over one period.
  double integral() const noexcept { return mean() * grid_.length(); }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Discrete L2 norm sqrt(sum v^2 dx).
  double l2_norm() const noexcept {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s * grid_.dx());
  }

  /// Highest mode index carrying an exactly nonzero coefficient (0 if none).
  std::size_t highest_active_mode() const noexcept {
    for (std::size_t j = coeffs_.size(); j-- > 1;)
      if (coeffs_[j] != Complex{}) return j;
    return 0;
  }

  bool all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

  SpectralField operator+(const SpectralField& o) const { return combine(o, 1.0, 1.0); }
  SpectralField operator-(const SpectralField& o) const { return combine(o, 1.0, -1.0); }
  SpectralField operator*(double s) const { return combine(*this, s, 0.0); }
  friend SpectralField operator*(double s, const SpectralField& f) { return f * s; }

  /// a * this + b * other, formed on the coefficients.
  SpectralField combine(const SpectralField& other, double a, double b) const {
    require_same_grid(other);
    std::vector<Complex> c(coeffs_.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = a * coeffs_[j] + b * other.coeffs_[j];
    std::vector<double> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a * values_[j] + b * other.values_[j];
    return SpectralField(grid_, std::move(v), std::move(c));
  }

  /// Pointwise product, re-transformed.
  SpectralField pointwise_product(const SpectralField& other) const {
    require_same_grid(other);
    std::vector<double> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = values_[j] * other.values_[j];
    return from_values(grid_, std::move(v));
  }

  void require_same_grid(const SpectralField& other) const {
    if (!(grid_ == other.grid_)) throw InvalidArgument("fields live on different grids");
  }

 private:
  SpectralField(PeriodicGrid grid, std::vector<double> values, std::vector<Complex> coeffs)
      : grid_(std::move(grid)), values_(std::move(values)), coeffs_(std::move(coeffs)) {}

  PeriodicGrid grid_;
  std::vector<double> values_;
  std::vector<Complex> coeffs_;
};

}  // namespace gkdv
