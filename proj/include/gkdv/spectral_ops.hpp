#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "gkdv/error.hpp"
#include "gkdv/field.hpp"
#include "gkdv/params.hpp"

namespace gkdv {

/// Exponential growth of cosh(kh), sinh(kh) turns round-off in high modes into
/// garbage; operators refuse fields with content above this k*h.
struct OperatorOptions {
  double max_kh = 30.0;
};

enum class Parity { even, odd };

/// Throws BandLimitError when the highest mode carrying content exceeds k*h limit.
inline void check_band_limit(const SpectralField& field, double h, const OperatorOptions& opts) {
  const std::size_t top = field.highest_active_mode();
  const double k = field.grid().wavenumber(top);
  if (k * h > opts.max_kh) throw BandLimitError(top, k, k * h, opts.max_kh);
}

/// Multiplies mode j by m(k_j). For odd multipliers the Nyquist mode is dropped
/// (its image would be imaginary); for even ones only the real part is kept.
template <class Multiplier>
SpectralField apply_multiplier(const SpectralField& field, Multiplier&& m, Parity parity) {
  const auto& grid = field.grid();
  const auto in = field.coeffs();
  std::vector<Complex> out(in.size());
  for (std::size_t j = 0; j < in.size(); ++j) {
    if (in[j] == Complex{}) continue;
    out[j] = Complex(m(grid.wavenumber(j))) * in[j];
  }
  const std::size_t nyq = grid.nyquist();
  if (parity == Parity::odd || in[nyq] == Complex{})
    out[nyq] = {};
  else
    out[nyq] = Complex(std::real(Complex(m(grid.wavenumber(nyq)))) * in[nyq].real(), 0.0);
  return SpectralField::from_coeffs(grid, std::move(out));
}

/// sin(h d/dx): mode k picks up i sinh(kh).
inline SpectralField apply_sin_h_dx(const SpectralField& field, double h, const OperatorOptions& opts = {}) {
  if (!(h >= 0.0)) throw InvalidArgument("operator depth h must be >= 0");
  check_band_limit(field, h, opts);
  return apply_multiplier(field, [h](double k) { return Complex(0.0, std::sinh(k * h)); }, Parity::odd);
}

/// cos(h d/dx): mode k picks up cosh(kh).
inline SpectralField apply_cos_h_dx(const SpectralField& field, double h, const OperatorOptions& opts = {}) {
  if (!(h >= 0.0)) throw InvalidArgument("operator depth h must be >= 0");
  check_band_limit(field, h, opts);
  return apply_multiplier(field, [h](double k) { return Complex(std::cosh(k * h), 0.0); }, Parity::even);
}

/// Spectral derivative of order 1..4: mode k picks up (ik)^order.
inline SpectralField derivative(const SpectralField& field, int order) {
  if (order < 1 || order > 4) throw InvalidArgument("derivative order must be in 1..4");
  return apply_multiplier(
      field,
      [order](double k) {
        switch (order) {
          case 1: return Complex(0.0, k);
          case 2: return Complex(-k * k, 0.0);
          case 3: return Complex(0.0, -k * k * k);
          default: return Complex(k * k * k * k, 0.0);
        }
      },
      order % 2 == 0 ? Parity::even : Parity::odd);
}

/// Translation eta(x) -> eta(x - d), exact for band-limited fields.
inline SpectralField shifted(const SpectralField& field, double d) {
  return apply_multiplier(field, [d](double k) { return std::exp(Complex(0.0, -k * d)); }, Parity::odd);
}

struct SurfaceVelocity {
  SpectralField u;
  SpectralField v;
};

/// Horizontal and vertical velocity traces on y = h + eta, to first order in eta:
///   u = [cos(h d) - eta d sin(h d)] f,   v = -[sin(h d) + eta d cos(h d)] f.
inline SurfaceVelocity surface_velocity(const SpectralField& f, const SpectralField& eta,
                                        const PhysicalParams& params, const OperatorOptions& opts = {}) {
  f.require_same_grid(eta);
  const double h = params.h();
  const auto sin_f = apply_sin_h_dx(f, h, opts);
  const auto cos_f = apply_cos_h_dx(f, h, opts);
  const auto u = cos_f - eta.pointwise_product(derivative(sin_f, 1));
  const auto v = (sin_f + eta.pointwise_product(derivative(cos_f, 1))) * -1.0;
  return {u, v};
}

/// Linear-theory potential trace f = (c0/h) (sin(2h d)/(2h d))^(-1/2) eta, i.e.
/// mode k scaled by (c0/h) (sinh(2kh)/(2kh))^(-1/2); the k = 0 gap is filled
/// with its limit c0/h.
inline SpectralField f_linear_from_eta(const SpectralField& eta, const PhysicalParams& params,
                                       const OperatorOptions& opts = {}) {
  const double h = params.h();
  check_band_limit(eta, h, opts);
  const double base = params.c0() / h;
  return apply_multiplier(
      eta,
      [base, h](double k) {
        const double x = 2.0 * k * h;
        if (x < 1e-4) return Complex(base / std::sqrt(1.0 + x * x / 6.0), 0.0);
        return Complex(base / std::sqrt(std::sinh(x) / x), 0.0);
      },
      Parity::even);
}

/// Zeroes every mode with index above floor(fraction * N / 2).
inline std::size_t dealias_cutoff(const PeriodicGrid& grid, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("dealias fraction must be in (0, 1]");
  // 2/3 rule: keep j < N/3, i.e. j <= floor(N/3) for power-of-two N.
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(grid.nyquist()) + 1e-12));
}

inline SpectralField dealiased(const SpectralField& field, double fraction) {
  const std::size_t cut = dealias_cutoff(field.grid(), fraction);
  std::vector<Complex> c(field.coeffs().begin(), field.coeffs().end());
  for (std::size_t j = cut + 1; j < c.size(); ++j) c[j] = {};
  return SpectralField::from_coeffs(field.grid(), std::move(c));
}

/// Exponential filter exp(-strength (k/k_max)^order).
inline SpectralField filtered(const SpectralField& field, double strength = 36.0, int order = 16) {
  const double kmax = field.grid().k_max();
  return apply_multiplier(
      field, [=](double k) { return Complex(std::exp(-strength * std::pow(k / kmax, order)), 0.0); },
      Parity::even);
}

}  // namespace gkdv
