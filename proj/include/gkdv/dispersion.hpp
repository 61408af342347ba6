#pragma once

#include <cmath>

#include "gkdv/error.hpp"
#include "gkdv/params.hpp"

namespace gkdv {

/// Linear response of the layer at one wavenumber.
struct DispersionSample {
  double k = 0.0;
  double omega2 = 0.0;
  double omega_model = 0.0;
  double phase_velocity = 0.0;
  double group_velocity = 0.0;
};

/// Squared frequency of the linearized layer, omega^2 = (g k + sigma k^3 / rho) tanh(kh).
///
/// Obtained by inserting exp(i(kx - wt)) into the linearized surface system.
/// Reduces to c0^2 k^2 for sigma = 0 and to (h sigma / rho) k^4 for g = 0 as kh -> 0.
inline double omega_squared(double k, const PhysicalParams& p) {
  if (!(k >= 0.0)) throw InvalidArgument("wavenumber must be >= 0");
  return (p.g() * k + p.sigma() * k * k * k / p.rho()) * std::tanh(k * p.h());
}

/// Linear frequency of the nonlocal surface equation itself, (c0/h) sinh(kh).
/// Agrees with sqrt(omega_squared) only as kh -> 0.
inline double model_dispersion_gkdv(double k, const PhysicalParams& p, double max_kh = 30.0) {
  if (!(k >= 0.0)) throw InvalidArgument("wavenumber must be >= 0");
  const double kh = k * p.h();
  if (kh > max_kh) throw BandLimitError(0, k, kh, max_kh);
  return p.c0() / p.h() * std::sinh(kh);
}

/// Phase velocity omega/k; at k = 0 the long-wave limit (c0 if g > 0, else 0).
inline double phase_velocity(double k, const PhysicalParams& p) {
  if (!(k >= 0.0)) throw InvalidArgument("wavenumber must be >= 0");
  if (k == 0.0) return p.c0();
  return std::sqrt(omega_squared(k, p)) / k;
}

/// d omega / dk from the analytic derivative of omega^2.
inline double group_velocity(double k, const PhysicalParams& p) {
  if (!(k >= 0.0)) throw InvalidArgument("wavenumber must be >= 0");
  if (k == 0.0) return p.c0();
  const double kh = k * p.h();
  const double t = std::tanh(kh);
  const double sech = 1.0 / std::cosh(kh);
  const double force = p.g() * k + p.sigma() * k * k * k / p.rho();
  const double dforce = p.g() + 3.0 * p.sigma() * k * k / p.rho();
  const double domega2 = dforce * t + force * p.h() * sech * sech;
  return domega2 / (2.0 * std::sqrt(force * t));
}

inline DispersionSample sample_dispersion(double k, const PhysicalParams& p, double max_kh = 30.0) {
  return {k, omega_squared(k, p), model_dispersion_gkdv(k, p, max_kh), phase_velocity(k, p), group_velocity(k, p)};
}

}  // namespace gkdv
