#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gkdv/error.hpp"

namespace gkdv {

/// Which coefficient recursion generates the traveling-wave series.
///
/// paper_printed keeps the published recursions verbatim (for reproducing the
/// published numbers); steady_derived is re-derived by substituting the series
/// into the steady equation with exact operator action on each exponential and
/// is what the residual check accepts.
enum class RecursionMode { paper_printed, steady_derived };

/// full keeps every sin/cos of the depth; shallow keeps the lowest
/// non-vanishing terms of their power expansions.
enum class DepthModel { full, shallow };

inline std::string_view to_string(RecursionMode m) {
  return m == RecursionMode::paper_printed ? "paper_printed" : "steady_derived";
}
inline std::string_view to_string(DepthModel d) { return d == DepthModel::full ? "full" : "shallow"; }

inline std::optional<RecursionMode> parse_recursion_mode(std::string_view s) {
  if (s == "paper_printed") return RecursionMode::paper_printed;
  if (s == "steady_derived") return RecursionMode::steady_derived;
  return std::nullopt;
}
inline std::optional<DepthModel> parse_depth_model(std::string_view s) {
  if (s == "full") return DepthModel::full;
  if (s == "shallow") return DepthModel::shallow;
  return std::nullopt;
}

/// Tolerance on |Bh - m pi| below which the envelope velocity is resonant.
inline constexpr double kVelocityResonanceTol = 1e-9;
/// Relative tolerance on k sin(Bh) - sin(kBh) below which a recursion denominator vanishes.
inline constexpr double kDenominatorResonanceTol = 1e-12;

/// Envelope velocity factor A = -sin(Bh)/(Bh), with the limit -1 at h = 0.
inline double velocity_constraint(double B, double h) {
  if (!(B > 0.0 && std::isfinite(B))) throw InvalidArgument("decay rate B must be finite and > 0");
  if (!(h >= 0.0 && std::isfinite(h))) throw InvalidArgument("depth h must be finite and >= 0");
  const double theta = B * h;
  const double m = std::round(theta / std::numbers::pi);
  if (m >= 1.0 && std::abs(theta - m * std::numbers::pi) <= kVelocityResonanceTol)
    throw ResonanceError("resonant envelope velocity: B*h is within 1e-9 of " + std::to_string(static_cast<int>(m)) +
                             "*pi (B*h must differ from multiples of pi)",
                         static_cast<int>(m));
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    return -(1.0 - t2 / 6.0 + t2 * t2 / 120.0);
  }
  return -std::sin(theta) / theta;
}

/// k sin(theta) - sin(k theta), evaluated by its Taylor series when k theta is
/// small so the O(theta^3) result keeps full relative precision.
inline double resonance_denominator(int k, double theta) {
  const double kd = static_cast<double>(k);
  if (kd * std::abs(theta) <= 1.0) {
    // sum_j (-1)^j theta^(2j+1) (k - k^(2j+1)) / (2j+1)!, j >= 1
    double sum = 0.0;
    double theta_pow = theta;  // theta^(2j+1)
    double k_pow = kd;         // k^(2j+1)
    double fact = 1.0;         // (2j+1)!
    for (int j = 1; j < 40; ++j) {
      theta_pow *= theta * theta;
      k_pow *= kd * kd;
      fact *= static_cast<double>((2 * j) * (2 * j + 1));
      const double term = (j % 2 == 0 ? 1.0 : -1.0) * theta_pow * (kd - k_pow) / fact;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  const double a = kd * std::sin(theta);
  const double b = std::sin(kd * theta);
  const double d = a - b;
  if (std::abs(d) <= kDenominatorResonanceTol * (std::abs(a) + std::abs(b)))
    throw ResonanceError("resonant recursion denominator k*sin(Bh) - sin(k*B*h) vanishes at k = " +
                             std::to_string(k),
                         k);
  return d;
}

/// Normalized series coefficients alpha_1..alpha_K (alpha_1 = 1) stored as
/// beta_k = alpha_k * scale^(k-1), which keeps them representable at large K.
struct ScaledCoefficients {
  double scale = 1.0;
  std::vector<double> beta;  // beta[k-1] for k = 1..K

  int order() const noexcept { return static_cast<int>(beta.size()); }
  double scaled(int k) const { return beta.at(static_cast<std::size_t>(k - 1)); }

  /// alpha_k; may overflow for large k when scale is far from 1.
  double alpha(int k) const { return scaled(k) / std::pow(scale, k - 1); }

  std::vector<double> alphas() const {
    std::vector<double> out(beta.size());
    for (int k = 1; k <= order(); ++k) out[static_cast<std::size_t>(k - 1)] = alpha(k);
    return out;
  }

  static ScaledCoefficients from_alphas(const std::vector<double>& alphas, double scale = 1.0) {
    ScaledCoefficients c{scale, std::vector<double>(alphas.size())};
    for (std::size_t i = 0; i < alphas.size(); ++i) c.beta[i] = alphas[i] * std::pow(scale, static_cast<double>(i));
    return c;
  }

  /// True when every nonzero |beta_k| lies in [1e-12, 1e12].
  bool well_scaled() const noexcept {
    return std::all_of(beta.begin(), beta.end(), [](double b) {
      const double a = std::abs(b);
      return a == 0.0 || (a >= 1e-12 && a <= 1e12);
    });
  }
};

namespace detail {

/// One recursion: beta_k = scale * prefactor(k) * sum_{n=1}^{k-1} weight(n,k) beta_n beta_{k-n}.
struct RecursionRule {
  std::function<double(int)> prefactor;
  std::function<double(int, int)> weight;
};

inline std::vector<double> run_recursion(const RecursionRule& rule, int K, double scale) {
  std::vector<double> beta(static_cast<std::size_t>(K), 0.0);
  beta[0] = 1.0;
  for (int k = 2; k <= K; ++k) {
    const double pre = rule.prefactor(k);
    double sum = 0.0;
    for (int n = 1; n < k; ++n) sum += rule.weight(n, k) * beta[n - 1] * beta[k - n - 1];
    beta[k - 1] = scale * pre * sum;
  }
  return beta;
}

/// Slope of log(|beta_k|/k) against k over the nonzero entries of [lo, hi].
inline std::optional<double> growth_slope(const std::vector<double>& beta, int lo, int hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int k = std::max(lo, 1); k <= hi && k <= static_cast<int>(beta.size()); ++k) {
    const double b = std::abs(beta[k - 1]);
    if (b == 0.0 || !std::isfinite(b)) continue;
    const double x = k;
    const double y = std::log(b / k);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::nullopt;
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (count * sxy - sx * sy) / denom;
}

/// Runs the recursion with an automatically chosen scale. The first guess is
/// refined from the growth of early coefficients (Koebe-normalized, log(beta_k/k)),
/// then from the top half of the full run.
inline ScaledCoefficients auto_scaled(const RecursionRule& rule, int K, double initial_scale,
                                      std::optional<double> fixed_scale) {
  if (fixed_scale) return {*fixed_scale, run_recursion(rule, K, *fixed_scale)};
  double scale = initial_scale;
  const int probe = std::min(K, 24);
  if (probe >= 4) {
    const auto early = run_recursion(rule, probe, scale);
    if (auto s = growth_slope(early, probe / 2, probe)) scale *= std::exp(-*s);
  }
  auto beta = run_recursion(rule, K, scale);
  for (int pass = 0; pass < 3 && K >= 8; ++pass) {
    const auto s = growth_slope(beta, K / 2, K);
    if (!s || std::abs(*s) * K < std::log(1e3)) break;
    scale *= std::exp(-*s);
    beta = run_recursion(rule, K, scale);
  }
  return {scale, std::move(beta)};
}

inline void require_recursion_inputs(double B, double h, int K) {
  if (!(B > 0.0 && std::isfinite(B))) throw InvalidArgument("decay rate B must be finite and > 0");
  if (!(h > 0.0 && std::isfinite(h))) throw InvalidArgument("depth h must be finite and > 0");
  if (K < 1) throw InvalidArgument("truncation order K must be >= 1");
}

}  // namespace detail

/// Published general-depth recursion:
///   alpha_k = 2B cos(Bh(k-1)/2) / (k sin Bh - sin kBh)
///             * sum_n n cos(Bh(2k-n-1)/2) alpha_n alpha_{k-n}.
inline ScaledCoefficients recursion_paper_printed(double B, double h, int K,
                                                  std::optional<double> scale = std::nullopt) {
  detail::require_recursion_inputs(B, h, K);
  const double theta = B * h;
  std::vector<double> denom(static_cast<std::size_t>(K + 1), 1.0);
  for (int k = 2; k <= K; ++k) denom[k] = resonance_denominator(k, theta);
  detail::RecursionRule rule{
      [&](int k) { return 2.0 * B * std::cos(theta * (k - 1) / 2.0) / denom[k]; },
      [theta](int n, int k) { return n * std::cos(theta * (2.0 * k - n - 1.0) / 2.0); }};
  return detail::auto_scaled(rule, K, 2.0 * B * B * h * h * h, scale);
}

/// Published shallow-depth recursion: alpha_k = 6 / (B^2 h^3 k (k^2 - 1)) sum_n n alpha_n alpha_{k-n}.
/// Solved by alpha_k = k (1 / (2 B^2 h^3))^(k-1).
inline ScaledCoefficients recursion_shallow_printed(double B, double h, int K,
                                                    std::optional<double> scale = std::nullopt) {
  detail::require_recursion_inputs(B, h, K);
  const double b2h3 = B * B * h * h * h;
  detail::RecursionRule rule{[b2h3](int k) { return 6.0 / (b2h3 * k * (static_cast<double>(k) * k - 1.0)); },
                             [](int n, int) { return static_cast<double>(n); }};
  return detail::auto_scaled(rule, K, 2.0 * b2h3, scale);
}

/// Coefficient matching of the steady traveling-wave equation with exact
/// operator action on exp(-nBX):
///   (k sin Bh - sin kBh) alpha_k = k B sum_{m=1}^{k-1} cos(mBh) alpha_m alpha_{k-m}.
inline ScaledCoefficients recursion_steady_derived(double B, double h, int K,
                                                   std::optional<double> scale = std::nullopt) {
  detail::require_recursion_inputs(B, h, K);
  const double theta = B * h;
  std::vector<double> denom(static_cast<std::size_t>(K + 1), 1.0);
  for (int k = 2; k <= K; ++k) denom[k] = resonance_denominator(k, theta);
  detail::RecursionRule rule{[&](int k) { return k * B / denom[k]; },
                             [theta](int n, int) { return std::cos(n * theta); }};
  return detail::auto_scaled(rule, K, 2.0 * B * B * h * h * h, scale);
}

/// Shallow limit of recursion_steady_derived:
///   alpha_k = 6 / (B^2 h^3 (k^2 - 1)) sum_m alpha_m alpha_{k-m},  solved by alpha_k = k (1/(B^2 h^3))^(k-1).
inline ScaledCoefficients recursion_shallow_derived(double B, double h, int K,
                                                    std::optional<double> scale = std::nullopt) {
  detail::require_recursion_inputs(B, h, K);
  const double b2h3 = B * B * h * h * h;
  detail::RecursionRule rule{[b2h3](int k) { return 6.0 / (b2h3 * (static_cast<double>(k) * k - 1.0)); },
                             [](int, int) { return 1.0; }};
  return detail::auto_scaled(rule, K, 2.0 * b2h3, scale);
}

inline ScaledCoefficients run_recursion(RecursionMode mode, DepthModel depth, double B, double h, int K,
                                        std::optional<double> scale = std::nullopt) {
  if (mode == RecursionMode::paper_printed)
    return depth == DepthModel::full ? recursion_paper_printed(B, h, K, scale)
                                     : recursion_shallow_printed(B, h, K, scale);
  return depth == DepthModel::full ? recursion_steady_derived(B, h, K, scale)
                                   : recursion_shallow_derived(B, h, K, scale);
}

/// Radius of convergence of the shallow closed forms (2B^2h^3 printed, B^2h^3 derived).
inline double shallow_radius(RecursionMode mode, double B, double h) {
  const double b2h3 = B * B * h * h * h;
  return mode == RecursionMode::paper_printed ? 2.0 * b2h3 : b2h3;
}

/// Steady traveling-wave series eta(X) = sum_n alpha_n a1^n exp(-nB|X|), X = x + A c0 t.
struct SeriesSolution {
  double B = 0.0;
  double h = 0.0;
  double A = -1.0;
  RecursionMode mode = RecursionMode::steady_derived;
  DepthModel depth = DepthModel::full;
  ScaledCoefficients coeffs;
  double a1 = std::numeric_limits<double>::quiet_NaN();

  int order() const noexcept { return coeffs.order(); }
  double alpha(int k) const { return coeffs.alpha(k); }
  bool has_amplitude() const noexcept { return std::isfinite(a1); }

  SeriesSolution with_amplitude(double amplitude) const {
    SeriesSolution s = *this;
    s.a1 = amplitude;
    return s;
  }
};

/// Builds A and alpha_1..alpha_K; a1 is left unset (see solve_a1).
inline SeriesSolution build_series(double B, double h, int K, RecursionMode mode, DepthModel depth) {
  if (K < 2) throw InvalidArgument("truncation order K must be >= 2");
  SeriesSolution s;
  s.B = B;
  s.h = h;
  s.A = velocity_constraint(B, h);
  s.mode = mode;
  s.depth = depth;
  s.coeffs = run_recursion(mode, depth, B, h, K);
  return s;
}

struct RadiusEstimate {
  double radius = std::numeric_limits<double>::infinity();
  double fit_rms = 0.0;
  bool geometric = true;
  int points = 0;
};

/// Cauchy-Hadamard radius 1/limsup |alpha_k|^(1/k), extrapolated by a linear
/// fit of log|alpha_k|/k against 1/k over the top half of the orders.
/// geometric is false when the fit residual exceeds rms_threshold.
inline RadiusEstimate radius_estimate(const ScaledCoefficients& c, double rms_threshold = 0.02) {
  const int K = c.order();
  const double log_scale = std::log(c.scale);
  std::vector<double> xs, ys;
  for (int k = std::max(1, K / 2); k <= K; ++k) {
    const double b = std::abs(c.scaled(k));
    if (b == 0.0 || !std::isfinite(b)) continue;
    xs.push_back(1.0 / k);
    ys.push_back(std::log(b) / k - (1.0 - 1.0 / k) * log_scale);
  }
  RadiusEstimate r;
  r.points = static_cast<int>(xs.size());
  if (xs.size() < 3) {
    r.geometric = false;
    return r;
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    ss += e * e;
  }
  r.fit_rms = std::sqrt(ss / n);
  r.radius = std::exp(-intercept);
  r.geometric = r.fit_rms <= rms_threshold;
  return r;
}

inline RadiusEstimate radius_estimate(const SeriesSolution& s, double rms_threshold = 0.02) {
  return radius_estimate(s.coeffs, rms_threshold);
}

struct KoebeReport {
  double radius = 0.0;
  std::vector<double> normalized;  // alpha_k R^(k-1), k = 1..K
  double max_deviation = 0.0;      // max_k |normalized_k - k|
  bool bieberbach_bound = true;    // |normalized_k| <= k for all k
};

/// Rescales the generating function g(z) = sum alpha_k z^k by its radius so a
/// Koebe-type series reads g(Rw)/R = w/(1-w)^2, i.e. normalized coefficients k.
/// Shallow solutions use their closed-form radius; full-depth ones the estimate.
inline KoebeReport koebe_diagnostic(const SeriesSolution& s) {
  KoebeReport rep;
  rep.radius = s.depth == DepthModel::shallow ? shallow_radius(s.mode, s.B, s.h) : radius_estimate(s).radius;
  const double ratio = rep.radius / s.coeffs.scale;
  rep.normalized.resize(static_cast<std::size_t>(s.order()));
  for (int k = 1; k <= s.order(); ++k) {
    const double v = s.coeffs.scaled(k) * std::pow(ratio, k - 1);
    rep.normalized[static_cast<std::size_t>(k - 1)] = v;
    rep.max_deviation = std::max(rep.max_deviation, std::abs(v - k));
    if (std::abs(v) > k * (1.0 + 1e-12)) rep.bieberbach_bound = false;
  }
  return rep;
}

}  // namespace gkdv
