#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gkdv/error.hpp"
#include "gkdv/field.hpp"
#include "gkdv/params.hpp"
#include "gkdv/spectral_ops.hpp"
#include "gkdv/traveling_wave.hpp"

namespace gkdv {

enum class Model { gkdv, kdv };

inline std::string_view to_string(Model m) { return m == Model::gkdv ? "gkdv" : "kdv"; }

inline std::optional<Model> parse_model(std::string_view s) {
  if (s == "gkdv") return Model::gkdv;
  if (s == "kdv") return Model::kdv;
  return std::nullopt;
}

/// eta_t = -(c0/h) sin(h d) eta - (c0/h) d(eta cos(h d) eta)
inline SpectralField rhs_gkdv(const SpectralField& eta, const PhysicalParams& p, const OperatorOptions& opts = {}) {
  const double s = p.c0() / p.h();
  const auto lin = apply_sin_h_dx(eta, p.h(), opts);
  const auto flux = eta.pointwise_product(apply_cos_h_dx(eta, p.h(), opts));
  return lin.combine(derivative(flux, 1), -s, -s);
}

/// eta_t = -c0 eta_x + (c0 h^2/6) eta_xxx - (c0/h) d(eta^2)
inline SpectralField rhs_kdv(const SpectralField& eta, const PhysicalParams& p) {
  const double c0 = p.c0(), h = p.h();
  const auto lin = derivative(eta, 1).combine(derivative(eta, 3), -c0, c0 * h * h / 6.0);
  return lin.combine(derivative(eta.pointwise_product(eta), 1), 1.0, -c0 / h);
}

struct IntegratorConfig {
  double dt = 0.01;
  double dealias = 2.0 / 3.0;
  std::optional<bool> filter;  // unset: on for gKdV, off for KdV
  double filter_strength = 36.0;
  int filter_order = 16;
  double max_kh = 20.0;          // guard on the highest retained mode
  double stability_limit = 2.5;  // dt * (nonlinear Lipschitz estimate) must stay below this
  bool nonlinear = true;

  bool filter_on(Model m) const { return filter.value_or(m == Model::gkdv); }
};

/// Surface elevation with its clock. Coefficients are kept masked to the
/// dealias cutoff so the mean mode is carried exactly.
class EvolutionState {
 public:
  EvolutionState(const SpectralField& eta, const PhysicalParams& params, Model model, IntegratorConfig config,
                 double t = 0.0)
      : field_(dealiased(eta, config.dealias)), params_(params), model_(model), config_(config), t_(t) {
    if (!(std::isfinite(config_.dt) && config_.dt != 0.0)) throw InvalidArgument("time step dt must be finite and nonzero");
    if (config_.filter_order < 2 || config_.filter_strength < 0.0)
      throw InvalidArgument("filter order must be >= 2 and strength >= 0");
    if (model_ == Model::gkdv) {
      const std::size_t cut = dealias_cutoff(field_.grid(), config_.dealias);
      const double kh = field_.grid().wavenumber(cut) * params_.h();
      if (kh > config_.max_kh) throw BandLimitError(cut, field_.grid().wavenumber(cut), kh, config_.max_kh);
    }
  }

  const SpectralField& field() const noexcept { return field_; }
  double time() const noexcept { return t_; }
  const PhysicalParams& params() const noexcept { return params_; }
  Model model() const noexcept { return model_; }
  const IntegratorConfig& config() const noexcept { return config_; }

  EvolutionState with_field(SpectralField f, double t) const {
    EvolutionState s = *this;
    s.field_ = std::move(f);
    s.t_ = t;
    return s;
  }
  EvolutionState with_dt(double dt) const {
    EvolutionState s = *this;
    s.config_.dt = dt;
    return s;
  }

 private:
  SpectralField field_;
  PhysicalParams params_;
  Model model_;
  IntegratorConfig config_;
  double t_;
};

/// Linear frequency of each retained mode: (c0/h) sinh(kh) or c0 (k + h^2 k^3 / 6).
inline double linear_frequency(Model m, double k, const PhysicalParams& p) {
  if (m == Model::gkdv) return p.c0() / p.h() * std::sinh(k * p.h());
  return p.c0() * (k + p.h() * p.h() * k * k * k / 6.0);
}

namespace detail {

/// Integrating-factor RK4 on unnormalized half-spectrum coefficients.
class IfRk4 {
 public:
  IfRk4(const EvolutionState& s, double dt)
      : grid_(s.field().grid()),
        model_(s.model()),
        nonlinear_(s.config().nonlinear),
        h_(s.params().h()),
        scale_(s.params().c0() / s.params().h()),
        cut_(dealias_cutoff(grid_, s.config().dealias)),
        half_(cut_ + 1),
        full_(cut_ + 1),
        cosh_(cut_ + 1),
        ik_(cut_ + 1),
        filter_(cut_ + 1, 1.0),
        vals_(grid_.size()),
        aux_(grid_.size()),
        spec_(grid_.mode_count()) {
    for (std::size_t j = 0; j <= cut_; ++j) {
      const double k = grid_.wavenumber(j);
      const Complex L(0.0, -linear_frequency(model_, k, s.params()));
      half_[j] = std::exp(L * (0.5 * dt));
      full_[j] = half_[j] * half_[j];
      cosh_[j] = model_ == Model::gkdv ? std::cosh(k * h_) : 1.0;
      ik_[j] = Complex(0.0, k);
      if (s.config().filter_on(model_))
        filter_[j] = std::exp(-s.config().filter_strength * std::pow(k / grid_.k_max(), s.config().filter_order));
    }
  }

  std::size_t cut() const noexcept { return cut_; }

  /// Nonlinear term -(c0/h) ik FFT(eta * C eta), masked; C = cosh(kh) or identity.
  void nonlinear(const std::vector<Complex>& v, std::vector<Complex>& out) {
    std::fill(out.begin(), out.end(), Complex{});
    if (!nonlinear_) return;
    std::fill(spec_.begin(), spec_.end(), Complex{});
    std::copy(v.begin(), v.end(), spec_.begin());
    grid_.fft().inverse(spec_, vals_);
    for (std::size_t j = 0; j <= cut_; ++j) spec_[j] = v[j] * cosh_[j];
    grid_.fft().inverse(spec_, aux_);
    for (std::size_t i = 0; i < vals_.size(); ++i) aux_[i] *= vals_[i];
    grid_.fft().forward(aux_, spec_);
    for (std::size_t j = 0; j <= cut_; ++j) out[j] = -scale_ * ik_[j] * spec_[j];
    if (cut_ == grid_.nyquist()) out[cut_] = {};
  }

  void step(std::vector<Complex>& v, double dt) {
    const std::size_t n = v.size();
    a_.resize(n), b_.resize(n), c_.resize(n), d_.resize(n), w_.resize(n);
    nonlinear(v, a_);
    for (std::size_t j = 0; j < n; ++j) w_[j] = half_[j] * (v[j] + 0.5 * dt * a_[j]);
    nonlinear(w_, b_);
    for (std::size_t j = 0; j < n; ++j) w_[j] = half_[j] * v[j] + 0.5 * dt * b_[j];
    nonlinear(w_, c_);
    for (std::size_t j = 0; j < n; ++j) w_[j] = full_[j] * v[j] + dt * half_[j] * c_[j];
    nonlinear(w_, d_);
    for (std::size_t j = 0; j < n; ++j)
      v[j] = filter_[j] * (full_[j] * v[j] + dt / 6.0 * (full_[j] * a_[j] + 2.0 * half_[j] * (b_[j] + c_[j]) + d_[j]));
    v[0].imag(0.0);
    if (cut_ == grid_.nyquist()) v[cut_].imag(0.0);
  }

 private:
  PeriodicGrid grid_;
  Model model_;
  bool nonlinear_;
  double h_, scale_;
  std::size_t cut_;
  std::vector<Complex> half_, full_;
  std::vector<double> cosh_;
  std::vector<Complex> ik_;
  std::vector<double> filter_;
  std::vector<double> vals_, aux_;
  std::vector<Complex> spec_;
  std::vector<Complex> a_, b_, c_, d_, w_;
};

inline std::vector<Complex> unnormalized(const SpectralField& f, std::size_t cut) {
  const double n = static_cast<double>(f.grid().size());
  std::vector<Complex> v(cut + 1);
  for (std::size_t j = 0; j <= cut; ++j) v[j] = f.coeffs()[j] * n;
  return v;
}

inline SpectralField from_unnormalized(const PeriodicGrid& grid, const std::vector<Complex>& v) {
  const double inv = 1.0 / static_cast<double>(grid.size());
  std::vector<Complex> c(grid.mode_count());
  for (std::size_t j = 0; j < v.size(); ++j) c[j] = v[j] * inv;
  return SpectralField::from_coeffs(grid, std::move(c));
}

}  // namespace detail

/// Lipschitz-type bound of the explicit nonlinear term, (c0/h) k_cut (|eta| cosh(k_cut h) + |C eta|).
inline double nonlinear_lipschitz(const EvolutionState& s) {
  const auto& grid = s.field().grid();
  const std::size_t cut = dealias_cutoff(grid, s.config().dealias);
  const double k = grid.wavenumber(cut);
  const double m = s.field().max_abs();
  const double c = s.model() == Model::gkdv ? std::cosh(k * s.params().h()) : 1.0;
  return s.params().c0() / s.params().h() * k * 2.0 * m * c;
}

inline void check_stability(const EvolutionState& s) {
  if (!s.config().nonlinear) return;
  const double lip = nonlinear_lipschitz(s);
  if (std::abs(s.config().dt) * lip > s.config().stability_limit)
    throw StabilityError("time step too large: dt * L = " + std::to_string(std::abs(s.config().dt) * lip) +
                             " exceeds " + std::to_string(s.config().stability_limit),
                         s.time());
}

/// One integrating-factor RK4 step of size config().dt.
inline EvolutionState step(const EvolutionState& s) {
  check_stability(s);
  const double dt = s.config().dt;
  detail::IfRk4 rk(s, dt);
  auto v = detail::unnormalized(s.field(), rk.cut());
  rk.step(v, dt);
  auto f = detail::from_unnormalized(s.field().grid(), v);
  if (!f.all_finite()) throw BlowUpError("non-finite values after step at t = " + std::to_string(s.time()), 1, s.time());
  return s.with_field(std::move(f), s.time() + dt);
}

struct Observation {
  double t = 0.0;
  double mass = 0.0;       // integral of eta
  double energy = 0.0;     // integral of eta^2
  double peak_x = 0.0;     // unwrapped location of the extremum of eta - mean
  double peak_value = 0.0;
  double spectral_tail = 0.0;  // max |c| over the top tenth of retained modes / max |c|
};

struct Snapshot {
  double t = 0.0;
  SpectralField field;
};

struct EvolveOptions {
  int observe_every = 0;             // 0: choose so that about 500 observations are taken
  std::vector<double> snapshot_times;
};

struct TrajectorySummary {
  EvolutionState final_state;
  std::vector<Observation> observations;
  std::vector<Snapshot> snapshots;
  std::size_t steps = 0;
  double dt = 0.0;
  double mass_drift = 0.0;    // max |mass - mass0| / max(|mass0|, L2 scale)
  double energy_drift = 0.0;  // (energy_end - energy_0) / energy_0
  double speed = 0.0;         // least-squares slope of peak_x(t)
  double displacement = 0.0;  // peak_x(end) - peak_x(0)
};

namespace detail {

/// Extremum of eta - mean, refined by a parabola through the three samples around it.
inline std::pair<double, double> locate_peak(const SpectralField& f) {
  const auto v = f.values();
  const double mean = f.mean();
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i] - mean) > std::abs(v[best] - mean)) best = i;
  const std::size_t n = v.size();
  const double ym = v[(best + n - 1) % n], y0 = v[best], yp = v[(best + 1) % n];
  const double den = ym - 2.0 * y0 + yp;
  double off = 0.0, val = y0;
  if (den != 0.0) {
    off = std::clamp(0.5 * (ym - yp) / den, -0.5, 0.5);
    val = y0 - 0.25 * (ym - yp) * off;
  }
  return {f.grid().x(best) + off * f.grid().dx(), val};
}

inline double spectral_tail(const SpectralField& f, std::size_t cut) {
  const auto c = f.coeffs();
  double top = 0.0, all = 0.0;
  const std::size_t from = cut - cut / 10;
  for (std::size_t j = 0; j <= cut; ++j) {
    all = std::max(all, std::abs(c[j]));
    if (j >= from) top = std::max(top, std::abs(c[j]));
  }
  return all > 0.0 ? top / all : 0.0;
}

}  // namespace detail

/// Runs ceil(T/dt) equal steps (dt shrunk so they land exactly on T) and
/// records observations and the snapshots closest to the requested times.
inline TrajectorySummary evolve(const EvolutionState& initial, double T, const EvolveOptions& opts = {}) {
  if (!(T > 0.0 && std::isfinite(T))) throw InvalidArgument("evolution time T must be finite and > 0");
  const double dt0 = std::abs(initial.config().dt);
  const auto nsteps = static_cast<std::size_t>(std::max(1.0, std::ceil(T / dt0 - 1e-9)));
  const double dt = T / static_cast<double>(nsteps);
  EvolutionState state = initial.with_dt(dt);
  check_stability(state);

  const auto& grid = state.field().grid();
  detail::IfRk4 rk(state, dt);
  auto v = detail::unnormalized(state.field(), rk.cut());
  const std::size_t every =
      opts.observe_every > 0 ? static_cast<std::size_t>(opts.observe_every) : std::max<std::size_t>(1, nsteps / 500);

  std::vector<std::size_t> snap_steps;
  for (double ts : opts.snapshot_times) {
    if (!(ts >= 0.0 && ts <= T * (1.0 + 1e-12))) throw InvalidArgument("snapshot time outside [0, T]");
    snap_steps.push_back(static_cast<std::size_t>(std::llround(ts / dt)));
  }

  TrajectorySummary out{state, {}, {}, nsteps, dt};
  const double t0 = state.time();
  double unwrapped = 0.0, last_raw = 0.0;
  auto observe = [&](const SpectralField& f, double t, bool first) {
    const auto [x, val] = detail::locate_peak(f);
    if (first)
      unwrapped = x;
    else
      unwrapped += grid.separation(x, last_raw);
    last_raw = x;
    const double e = f.l2_norm();
    out.observations.push_back({t, f.integral(), e * e, unwrapped, val, detail::spectral_tail(f, rk.cut())});
  };
  auto snapshot = [&](std::size_t i, const SpectralField& f, double t) {
    for (std::size_t s : snap_steps)
      if (s == i) out.snapshots.push_back({t, f});
  };

  observe(state.field(), t0, true);
  snapshot(0, state.field(), t0);
  double last_good = t0;
  for (std::size_t i = 1; i <= nsteps; ++i) {
    rk.step(v, dt);
    const double t = t0 + dt * static_cast<double>(i);
    const bool want_obs = i % every == 0 || i == nsteps;
    const bool want_snap = std::find(snap_steps.begin(), snap_steps.end(), i) != snap_steps.end();
    bool finite = true;
    for (const auto& c : v) finite = finite && std::isfinite(c.real()) && std::isfinite(c.imag());
    if (!finite) throw BlowUpError("non-finite values at step " + std::to_string(i), i, last_good);
    if (want_obs || want_snap) {
      const auto f = detail::from_unnormalized(grid, v);
      if (want_obs) observe(f, t, false);
      if (want_snap) snapshot(i, f, t);
    }
    last_good = t;
  }
  out.final_state = state.with_field(detail::from_unnormalized(grid, v), t0 + T);

  const auto& obs = out.observations;
  const double m0 = obs.front().mass;
  const double ref = std::max(std::abs(m0), std::sqrt(obs.front().energy * grid.length()));
  for (const auto& o : obs) out.mass_drift = std::max(out.mass_drift, ref > 0.0 ? std::abs(o.mass - m0) / ref : 0.0);
  out.energy_drift = obs.front().energy > 0.0 ? (obs.back().energy - obs.front().energy) / obs.front().energy : 0.0;
  out.displacement = obs.back().peak_x - obs.front().peak_x;
  double st = 0, sx = 0, stt = 0, stx = 0;
  for (const auto& o : obs) {
    st += o.t;
    sx += o.peak_x;
    stt += o.t * o.t;
    stx += o.t * o.peak_x;
  }
  const double n = static_cast<double>(obs.size());
  const double den = n * stt - st * st;
  out.speed = den != 0.0 ? (n * stx - st * sx) / den : 0.0;
  return out;
}

/// Periodized soliton eta(separation(x, center)) on the grid, optionally filtered.
inline SpectralField soliton_field(const SeriesSolution& sol, const PeriodicGrid& grid, double center = 0.0,
                                   bool filter = false, double strength = 36.0, int order = 16) {
  std::vector<double> X(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) X[j] = grid.separation(grid.x(j), center);
  const auto prof = reconstruct_profile(sol, X);
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = prof[j].eta;
  auto f = SpectralField::from_values(grid, std::move(v));
  return filter ? filtered(f, strength, order) : f;
}

/// ||shifted(reference, d) - f|| / ||reference|| in L2.
inline double shape_error(const SpectralField& reference, const SpectralField& f, double displacement) {
  const auto moved = shifted(reference, displacement);
  const double norm = reference.l2_norm();
  return norm > 0.0 ? (moved - f).l2_norm() / norm : (moved - f).l2_norm();
}

}  // namespace gkdv
