#pragma once

// Independent reference computations used by the acceptance suite and the
// tests. Nothing here calls the transforms, multipliers or recursions it is
// meant to check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace gkdv::oracle {

/// alpha_k of the shallow closed forms: k (1/(2B^2h^3))^(k-1) printed, k (1/(B^2h^3))^(k-1) derived.
inline double shallow_alpha(bool printed, double B, double h, int k) {
  const double r = (printed ? 2.0 : 1.0) * B * B * h * h * h;
  return k * std::pow(1.0 / r, k - 1);
}

/// Same, in scaled form alpha_k s^(k-1).
inline double shallow_beta(bool printed, double B, double h, int k, double scale) {
  const double r = (printed ? 2.0 : 1.0) * B * B * h * h * h;
  return k * std::pow(scale / r, k - 1);
}

inline double sech2(double x) {
  const double c = std::cosh(x);
  return 1.0 / (c * c);
}

/// O(N^2) DFT of real samples over [left, left + 2L): c_j = (1/N) sum_n v_n e^{-2 pi i j n / N}, j = 0..N/2.
inline std::vector<std::complex<double>> naive_dft(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::complex<double>> c(n / 2 + 1);
  for (std::size_t j = 0; j <= n / 2; ++j) {
    std::complex<double> s{};
    for (std::size_t m = 0; m < n; ++m) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>((j * m) % n) / static_cast<double>(n);
      s += v[m] * std::complex<double>(std::cos(a), std::sin(a));
    }
    c[j] = s / static_cast<double>(n);
  }
  return c;
}

/// Inverse of naive_dft.
inline std::vector<double> naive_synthesis(std::span<const std::complex<double>> c, std::size_t n) {
  std::vector<double> v(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double s = c[0].real();
    for (std::size_t j = 1; j < c.size(); ++j) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>((j * m) % n) / static_cast<double>(n);
      const double w = (j == n / 2) ? 1.0 : 2.0;
      s += w * (c[j] * std::complex<double>(std::cos(a), std::sin(a))).real();
    }
    v[m] = s;
  }
  return v;
}

/// Nine nonzero Taylor terms of sin(h d) (odd powers up to 17) or cos(h d)
/// (even powers up to 16), applied through repeated exact differentiation of
/// the naive DFT. Samples must cover a period of half-length L. Modes with
/// k*h above band_kh are treated as round-off and dropped: the polynomial
/// would amplify them far outside its range of validity.
inline std::vector<double> taylor_operator(std::span<const double> v, double L, double h, bool sine,
                                           double band_kh = 2.0) {
  const std::size_t n = v.size();
  auto c = naive_dft(v);
  std::vector<std::complex<double>> out(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    const std::complex<double> d(0.0, std::numbers::pi * static_cast<double>(j) / L * h);  // h * ik
    if (d.imag() > band_kh * (1.0 + 1e-12)) continue;
    std::complex<double> power = sine ? d : 1.0;
    double fact = 1.0;
    std::complex<double> sum{};
    for (int term = 0; term < 9; ++term) {
      const int p = sine ? 2 * term + 1 : 2 * term;
      if (term > 0) {
        power *= -(d * d);  // sin z, cos z series in z = h d
        fact *= static_cast<double>(p) * static_cast<double>(p - 1);
      }
      sum += power / fact;
    }
    out[j] = sum * c[j];
  }
  if (sine) out[n / 2] = {};  // odd symbol: the Nyquist image is not real
  return naive_synthesis(out, n);
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Best c in eta ~ c * shape (least squares) and the coefficient of determination.
struct ShapeFit {
  double amplitude = 0.0;
  double r_squared = 0.0;
};

inline ShapeFit fit_shape(std::span<const double> eta, std::span<const double> shape) {
  double num = 0, den = 0, mean = 0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    num += eta[i] * shape[i];
    den += shape[i] * shape[i];
    mean += eta[i];
  }
  mean /= static_cast<double>(eta.size());
  const double c = num / den;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    ss_res += (eta[i] - c * shape[i]) * (eta[i] - c * shape[i]);
    ss_tot += (eta[i] - mean) * (eta[i] - mean);
  }
  return {c, 1.0 - ss_res / ss_tot};
}

/// X > 0 at which |f(X)| falls to half of |f(0)|, by bisection on [0, hi].
inline double half_width(const std::function<double(double)>& f, double hi) {
  const double target = 0.5 * std::abs(f(0.0));
  double a = 0.0, b = hi;
  for (int i = 0; i < 200 && b - a > 1e-15 * hi; ++i) {
    const double m = 0.5 * (a + b);
    (std::abs(f(m)) > target ? a : b) = m;
  }
  return 0.5 * (a + b);
}

/// Centered difference of f at x with step dx.
inline double central_difference(const std::function<double(double)>& f, double x, double dx) {
  return (f(x + dx) - f(x - dx)) / (2.0 * dx);
}

/// Principal-value wrap of an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a;
}

}  // namespace gkdv::oracle
