#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gkdv/error.hpp"
#include "gkdv/pade.hpp"
#include "gkdv/series.hpp"

namespace gkdv {

struct PadeOptions {
  int order = 20;             // lowest of the three consecutive [M/M] orders
  double agreement = 1e-9;    // relative spread allowed across the three orders
  double direct_tail = 1e-17; // partial sums are used when the tail estimate is below this (relative)
};

/// Power series sum_n c_n z^n evaluated by partial sums where they have
/// converged and by diagonal Padé approximants elsewhere. Padé values are
/// accepted only when orders M, M+1, M+2 agree.
class SeriesEvaluator {
 public:
  struct Value {
    double value = 0.0;
    bool accelerated = false;
    bool converged = true;
    double spread = 0.0;
  };

  SeriesEvaluator(std::vector<double> taylor, PadeOptions opts = {}) : c_(std::move(taylor)), opts_(opts) {
    int order = opts_.order;
    const int available = static_cast<int>(c_.size());
    while (order > 1 && 2 * (order + 2) + 1 > available) --order;
    if (2 * (order + 2) + 1 <= available)
      for (int m = order; m < order + 3; ++m) pade_.push_back(robust_pade(c_, m, m));
  }

  const std::vector<double>& taylor() const noexcept { return c_; }
  const std::vector<RationalFunction>& approximants() const noexcept { return pade_; }

  double partial_sum(double z) const noexcept { return RationalFunction::horner(c_, z); }

  Value operator()(double z) const {
    double sum = 0.0, biggest = 0.0, tail = 0.0;
    double zp = 1.0;
    const std::size_t n = c_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double term = c_[i] * zp;
      sum += term;
      biggest = std::max(biggest, std::abs(term));
      if (i + 8 >= n) tail = std::max(tail, std::abs(term));
      zp *= z;
    }
    if (tail <= opts_.direct_tail * std::max(biggest, std::numeric_limits<double>::min()) || pade_.empty())
      return {sum, false, tail <= opts_.direct_tail * biggest || biggest == 0.0, 0.0};

    Value v;
    v.accelerated = true;
    v.value = pade_.front()(z);
    double lo = v.value, hi = v.value;
    for (const auto& p : pade_) {
      const double x = p(z);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    v.spread = hi - lo;
    const double ref = std::max({std::abs(v.value), std::abs(c_.size() > 1 ? c_[1] * z : 0.0), std::abs(c_[0])});
    v.converged = std::isfinite(v.value) && v.spread <= opts_.agreement * ref;
    return v;
  }

 private:
  std::vector<double> c_;
  PadeOptions opts_;
  std::vector<RationalFunction> pade_;
};

struct SmoothMatching {
  double a1 = 0.0;
  double w = 0.0;       // a1 / scale
  int root_count = 0;   // roots of the smoothness condition found in the search interval
  double spread = 0.0;  // |root differences| across the three Padé orders
  int pade_order = 0;
};

struct SolveA1Options {
  double margin = 0.1;  // search a1 in (-(1 + margin) R, 0)
  int scan_points = 400;
  PadeOptions pade{};
};

namespace detail {

/// Roots of the numerator of r on (lo, 0) where the denominator keeps its sign,
/// sorted by increasing |w|.
inline std::vector<double> negative_roots(const RationalFunction& r, double lo, int points) {
  std::vector<double> roots;
  auto num = [&](double x) { return RationalFunction::horner(r.numerator, x); };
  auto den = [&](double x) { return RationalFunction::horner(r.denominator, x); };
  double x_prev = 0.0, n_prev = num(0.0), d_prev = den(0.0);
  for (int i = 1; i <= points; ++i) {
    const double x = lo * static_cast<double>(i) / points;
    const double nx = num(x), dx = den(x);
    if ((nx == 0.0 || (nx < 0) != (n_prev < 0)) && (dx < 0) == (d_prev < 0)) {
      double a = x_prev, b = x, fa = n_prev;
      for (int it = 0; it < 200 && std::abs(b - a) > 1e-16 * std::max(1.0, std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = num(m);
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      double root = 0.5 * (a + b);
      for (int it = 0; it < 3; ++it) {
        const double d = RationalFunction::horner_derivative(r.numerator, root);
        if (d == 0.0) break;
        const double next = root - num(root) / d;
        if (!(next <= std::max(x_prev, x) && next >= std::min(x_prev, x))) break;
        root = next;
      }
      roots.push_back(root);
    }
    x_prev = x;
    n_prev = nx;
    d_prev = dx;
  }
  return roots;
}

}  // namespace detail

/// Solves the derivative-continuity condition sum_n n alpha_n a1^(n-1) = 0 at X = 0.
///
/// Works in w = a1/scale on the Taylor series sum_n n beta_n w^(n-1), which is
/// continued past the partial-sum region by diagonal Padé approximants. The root
/// of smallest |w| in (-(1+margin) R, 0) is returned if three consecutive Padé
/// orders agree on it.
inline SmoothMatching solve_a1(const SeriesSolution& sol, const SolveA1Options& opts = {}) {
  const int K = sol.order();
  std::vector<double> deriv(static_cast<std::size_t>(K));
  for (int n = 1; n <= K; ++n) deriv[static_cast<std::size_t>(n - 1)] = n * sol.coeffs.scaled(n);

  const auto R = radius_estimate(sol);
  const double reach = std::isfinite(R.radius) ? R.radius : sol.coeffs.scale;
  const double lo = -(1.0 + opts.margin) * reach / sol.coeffs.scale;

  std::vector<RationalFunction> family;
  int order = opts.pade.order;
  while (order > 1 && 2 * (order + 2) + 1 > K) --order;
  if (2 * (order + 2) + 1 <= K) {
    for (int m = order; m < order + 3; ++m) family.push_back(robust_pade(deriv, m, m));
  } else {
    // too few coefficients for acceleration: use the truncated polynomial itself
    family.push_back(RationalFunction{deriv, {1.0}});
    order = 0;
  }

  std::vector<double> picks;
  int count = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto roots = detail::negative_roots(family[i], lo, opts.scan_points);
    if (roots.empty())
      throw NoSmoothMatchingError("no real root of the derivative-continuity condition for a1 in (" +
                                  std::to_string(lo * sol.coeffs.scale) + ", 0)");
    if (i == 0) count = static_cast<int>(roots.size());
    picks.push_back(roots.front());
  }
  const auto [mn, mx] = std::minmax_element(picks.begin(), picks.end());
  SmoothMatching out;
  out.w = picks.front();
  out.a1 = out.w * sol.coeffs.scale;
  out.root_count = count;
  out.spread = (*mx - *mn) * sol.coeffs.scale;
  out.pade_order = order;
  if (out.spread > opts.pade.agreement * std::abs(out.a1) * 10.0)
    throw EvaluationError("smoothness root not stable across Padé orders " + std::to_string(order) + ".." +
                          std::to_string(order + 2) + " (spread " + std::to_string(out.spread) + ")");
  return out;
}

/// Sign applied to the summed series when sampling the profile. The published
/// closed form reports the shallow soliton as an elevation although the series
/// it sums is a depression; paper_printed reproduces the published sign.
inline double profile_sign(RecursionMode mode) noexcept { return mode == RecursionMode::paper_printed ? -1.0 : 1.0; }

struct ProfileSample {
  double X = 0.0;
  double eta = 0.0;
};

/// Evaluator for sum_n mult(n) beta_n z^n (constant term zero).
template <class Mult>
SeriesEvaluator weighted_series(const SeriesSolution& sol, Mult&& mult, const PadeOptions& opts = {}) {
  std::vector<double> c(static_cast<std::size_t>(sol.order() + 1), 0.0);
  for (int n = 1; n <= sol.order(); ++n) c[static_cast<std::size_t>(n)] = mult(n) * sol.coeffs.scaled(n);
  return SeriesEvaluator(std::move(c), opts);
}

/// eta(X) = sum_n alpha_n a1^n exp(-nB|X|), even in X.
inline std::vector<ProfileSample> reconstruct_profile(const SeriesSolution& sol, std::span<const double> X,
                                                      const PadeOptions& opts = {}) {
  if (!sol.has_amplitude()) throw InvalidArgument("series amplitude a1 is not set (run solve_a1 first)");
  std::vector<ProfileSample> out(X.size());
  if (sol.a1 == 0.0) {
    for (std::size_t i = 0; i < X.size(); ++i) out[i] = {X[i], 0.0};
    return out;
  }
  const auto eval = weighted_series(sol, [](int) { return 1.0; }, opts);
  const double w = sol.a1 / sol.coeffs.scale;
  const double factor = profile_sign(sol.mode) * sol.coeffs.scale;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto v = eval(w * std::exp(-sol.B * std::abs(X[i])));
    if (!v.converged)
      throw EvaluationError("profile at X = " + std::to_string(X[i]) +
                            " lies outside the convergence disk and the Padé continuation did not settle (spread " +
                            std::to_string(v.spread) + ")");
    out[i] = {X[i], factor * v.value};
  }
  return out;
}

inline double profile_at(const SeriesSolution& sol, double X, const PadeOptions& opts = {}) {
  const double xs[1] = {X};
  return reconstruct_profile(sol, xs, opts).front().eta;
}

/// Truncated one-sided slope factor sum_{n<=K} n alpha_n a1^n at X = 0+.
inline double truncated_smoothness_sum(const SeriesSolution& sol) {
  const double w = sol.a1 / sol.coeffs.scale;
  double s = 0.0, wp = w;
  for (int n = 1; n <= sol.order(); ++n, wp *= w) s += n * sol.coeffs.scaled(n) * wp;
  return s * sol.coeffs.scale;
}

enum class SteadyEquation { gkdv_steady, kdv_steady };

inline std::string_view to_string(SteadyEquation e) { return e == SteadyEquation::gkdv_steady ? "gkdv_steady" : "kdv_steady"; }

struct ResidualOptions {
  double delta_factor = 0.1;   // delta = delta_factor / B
  double extent_factor = 40.0; // X_max = extent_factor / B
  int points = 2000;
  double pass_factor = 10.0;   // PASS iff scaled residual <= pass_factor * tail bound
  PadeOptions pade{};
};

struct ResidualReport {
  SteadyEquation equation = SteadyEquation::gkdv_steady;
  double delta = 0.0;
  double x_max = 0.0;
  double sup = 0.0;                // sup |residual|
  double l2 = 0.0;                 // L2 norm of the residual over [delta, x_max]
  double scaled_sup = 0.0;         // sup |residual| / sup(sum of |terms|)
  double scaled_l2 = 0.0;
  double truncated_scaled_sup = 0.0;  // same, using raw K-term partial sums
  double tail_bound = 0.0;         // |a1 exp(-B delta) / R|^(K+1)
  bool evaluation_converged = true;
  bool pass = false;
};

/// Residual of the steady traveling-wave equation on the half-line X >= delta.
///
/// gkdv_steady:  A h eta' + sin(h d) eta + eta' cos(h d) eta + eta cos(h d) eta' = 0
/// kdv_steady:   (A_kdv + 1) eta - (h^2/6) eta'' + eta^2 / h = 0, A_kdv + 1 = (Bh)^2/6
/// Operators act exactly on each exp(-nBX): sin(h d) -> -sin(nBh), cos(h d) -> cos(nBh).
inline ResidualReport residual_check(const SeriesSolution& sol, SteadyEquation which,
                                     const ResidualOptions& opts = {}) {
  if (!sol.has_amplitude()) throw InvalidArgument("series amplitude a1 is not set (run solve_a1 first)");
  ResidualReport rep;
  rep.equation = which;
  rep.delta = opts.delta_factor / sol.B;
  rep.x_max = opts.extent_factor / sol.B;
  if (sol.a1 == 0.0) {
    rep.pass = true;
    return rep;
  }
  const double B = sol.B, h = sol.h, theta = B * h;
  const auto R = radius_estimate(sol);
  rep.tail_bound = std::isfinite(R.radius)
                       ? std::pow(std::abs(sol.a1 * std::exp(-B * rep.delta) / R.radius), sol.order() + 1)
                       : 0.0;

  const double sign = profile_sign(sol.mode) * sol.coeffs.scale;
  const auto eta = weighted_series(sol, [](int) { return 1.0; }, opts.pade);
  const auto d_eta = weighted_series(sol, [B](int n) { return -n * B; }, opts.pade);
  const auto dd_eta = weighted_series(sol, [B](int n) { return n * n * B * B; }, opts.pade);
  const auto sin_eta = weighted_series(sol, [theta](int n) { return -std::sin(n * theta); }, opts.pade);
  const auto cos_eta = weighted_series(sol, [theta](int n) { return std::cos(n * theta); }, opts.pade);
  const auto cos_d_eta = weighted_series(sol, [B, theta](int n) { return -n * B * std::cos(n * theta); }, opts.pade);

  const double w = sol.a1 / sol.coeffs.scale;
  const double a_kdv1 = theta * theta / 6.0;

  auto residual_at = [&](double X, bool accelerated, double& scale_out, bool& ok) {
    const double z = w * std::exp(-B * X);
    auto get = [&](const SeriesEvaluator& e) {
      if (!accelerated) return sign * e.partial_sum(z);
      const auto v = e(z);
      ok = ok && v.converged;
      return sign * v.value;
    };
    if (which == SteadyEquation::gkdv_steady) {
      const double e0 = get(eta), e1 = get(d_eta), s0 = get(sin_eta), c0 = get(cos_eta), c1 = get(cos_d_eta);
      const double t1 = sol.A * h * e1, t2 = s0, t3 = e1 * c0, t4 = e0 * c1;
      scale_out = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
      return t1 + t2 + t3 + t4;
    }
    const double e0 = get(eta), e2 = get(dd_eta);
    const double t1 = a_kdv1 * e0, t2 = -(h * h / 6.0) * e2, t3 = e0 * e0 / h;
    scale_out = std::abs(t1) + std::abs(t2) + std::abs(t3);
    return t1 + t2 + t3;
  };

  const int n = std::max(opts.points, 2);
  const double dx = (rep.x_max - rep.delta) / (n - 1);
  double sup_scale = 0.0, l2_scale = 0.0, trunc_sup = 0.0;
  bool ok = true;
  for (int i = 0; i < n; ++i) {
    const double X = rep.delta + dx * i;
    double s = 0.0, s_trunc = 0.0;
    bool ignored = true;
    const double r = residual_at(X, true, s, ok);
    const double rt = residual_at(X, false, s_trunc, ignored);
    const double wgt = (i == 0 || i == n - 1) ? 0.5 * dx : dx;
    rep.sup = std::max(rep.sup, std::abs(r));
    rep.l2 += wgt * r * r;
    sup_scale = std::max(sup_scale, s);
    l2_scale += wgt * s * s;
    trunc_sup = std::max(trunc_sup, std::abs(rt));
  }
  rep.l2 = std::sqrt(rep.l2);
  l2_scale = std::sqrt(l2_scale);
  rep.evaluation_converged = ok;
  rep.scaled_sup = sup_scale > 0.0 ? rep.sup / sup_scale : 0.0;
  rep.scaled_l2 = l2_scale > 0.0 ? rep.l2 / l2_scale : 0.0;
  rep.truncated_scaled_sup = sup_scale > 0.0 ? trunc_sup / sup_scale : 0.0;
  rep.pass = ok && rep.scaled_sup <= opts.pass_factor * rep.tail_bound;
  return rep;
}

/// Full construction pipeline: recursion, smoothness root, amplitude.
struct Soliton {
  SeriesSolution solution;
  SmoothMatching matching;
  RadiusEstimate radius;
};

inline Soliton build_soliton(double B, double h, int K, RecursionMode mode, DepthModel depth,
                             const SolveA1Options& opts = {}) {
  auto sol = build_series(B, h, K, mode, depth);
  const auto match = solve_a1(sol, opts);
  const auto radius = radius_estimate(sol);
  return {sol.with_amplitude(match.a1), match, radius};
}

}  // namespace gkdv
