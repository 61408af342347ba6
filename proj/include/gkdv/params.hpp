#pragma once

#include <cmath>
#include <string>

#include "gkdv/error.hpp"

namespace gkdv {

/// Material and geometry constants of the fluid layer.
///
/// depth h and density rho must be positive; the force-field constant g and
/// the surface-pressure coefficient sigma are non-negative and not both zero.
/// The long-wave speed c0 = sqrt(g h) is derived on access.
class PhysicalParams {
 public:
  PhysicalParams(double depth, double gravity, double density, double surface_pressure)
      : h_(depth), g_(gravity), rho_(density), sigma_(surface_pressure) {
    if (!(std::isfinite(h_) && h_ > 0.0)) throw InvalidArgument("depth h must be finite and > 0");
    if (!(std::isfinite(rho_) && rho_ > 0.0)) throw InvalidArgument("density rho must be finite and > 0");
    if (!(std::isfinite(g_) && g_ >= 0.0)) throw InvalidArgument("gravity g must be finite and >= 0");
    if (!(std::isfinite(sigma_) && sigma_ >= 0.0))
      throw InvalidArgument("surface-pressure coefficient sigma must be finite and >= 0");
    if (g_ == 0.0 && sigma_ == 0.0) throw InvalidArgument("g and sigma cannot both be zero");
  }

  /// Unit layer: h = g = rho = 1, sigma = 0, so c0 = 1.
  static PhysicalParams unit() { return {1.0, 1.0, 1.0, 0.0}; }

  double h() const noexcept { return h_; }
  double g() const noexcept { return g_; }
  double rho() const noexcept { return rho_; }
  double sigma() const noexcept { return sigma_; }
  double c0() const noexcept { return std::sqrt(g_ * h_); }

  PhysicalParams with_depth(double depth) const { return {depth, g_, rho_, sigma_}; }

 private:
  double h_;
  double g_;
  double rho_;
  double sigma_;
};

}  // namespace gkdv
