#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "gkdv/series.hpp"
#include "gkdv/verify/oracles.hpp"

using namespace gkdv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Recomputes beta_k from beta_1..beta_(k-1) with the textbook formulas.
double resubstitute(RecursionMode mode, DepthModel depth, double B, double h, const ScaledCoefficients& c, int k) {
  const double t = B * h, r = c.scale, b2h3 = B * B * h * h * h;
  double sum = 0;
  for (int n = 1; n < k; ++n) {
    double w = 1.0;
    if (mode == RecursionMode::paper_printed)
      w = depth == DepthModel::full ? n * std::cos(t * (2.0 * k - n - 1) / 2.0) : n;
    else if (depth == DepthModel::full)
      w = std::cos(n * t);
    sum += w * c.scaled(n) * c.scaled(k - n);
  }
  const double D = k * std::sin(t) - std::sin(k * t);
  double pre;
  if (mode == RecursionMode::paper_printed)
    pre = depth == DepthModel::full ? 2 * B * std::cos(t * (k - 1) / 2.0) / D : 6.0 / (b2h3 * k * (k * k - 1.0));
  else
    pre = depth == DepthModel::full ? k * B / D : 6.0 / (b2h3 * (k * k - 1.0));
  return r * pre * sum;
}

}  // namespace

TEST_CASE("velocity constraint", "[series]") {
  CHECK_THAT(velocity_constraint(1e-9, 1.0), WithinAbs(-1.0, 1e-15));
  CHECK(velocity_constraint(2.0, 0.0) == -1.0);
  CHECK_THAT(velocity_constraint(std::numbers::pi / 2, 1.0), WithinAbs(-2.0 / std::numbers::pi, 1e-15));
  CHECK_THAT(-2.0 / std::numbers::pi, WithinAbs(-0.63662, 5e-6));
  CHECK_THROWS_AS(velocity_constraint(std::numbers::pi, 1.0), ResonanceError);
  CHECK_THROWS_AS(velocity_constraint(1.0, 2.0 * std::numbers::pi + 1e-10), ResonanceError);
  CHECK_NOTHROW(velocity_constraint(1.0, std::numbers::pi + 1e-6));
  CHECK_THROWS_AS(velocity_constraint(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(velocity_constraint(1.0, -1.0), InvalidArgument);
  for (int i = 1; i < 100; ++i) {
    const double t = std::numbers::pi * i / 100.0;
    const double A = velocity_constraint(t, 1.0);
    CHECK(A > -1.0);
    CHECK(A < 1.0);
    CHECK(A != 0.0);
    CHECK_THAT(A, WithinAbs(-std::sin(t) / t, 1e-14));
  }
}

TEST_CASE("printed recursion examples", "[series]") {
  const auto one = recursion_paper_printed(1.0, 1.0, 1);
  CHECK(one.order() == 1);
  CHECK(one.alpha(1) == 1.0);

  const auto s = recursion_shallow_printed(1.0, 1.0, 10);
  CHECK_THAT(s.alpha(2), WithinRel(1.0, 1e-15));
  CHECK_THAT(s.alpha(3), WithinRel(0.75, 1e-15));
  CHECK(s.alpha(1) == 1.0);

  const auto full = recursion_paper_printed(1.0, 1.0, 4);
  const double direct = 2 * std::cos(0.5) * std::cos(1.0) / (2 * std::sin(1.0) - std::sin(2.0));
  CHECK_THAT(full.alpha(2), WithinRel(direct, 1e-14));
  // its shallow side: the gap to the printed shallow value 1 is order one at Bh = 1
  CHECK(std::abs(full.alpha(2) - 1.0) > 0.1);
}

TEST_CASE("printed shallow recursion equals its closed form", "[series]") {
  for (auto [B, h] : {std::pair{1.0, 1.0}, std::pair{0.3, 2.0}, std::pair{2.0, 0.4}}) {
    const auto c = recursion_shallow_printed(B, h, 200);
    for (int k = 1; k <= 200; ++k)
      CHECK_THAT(c.scaled(k), WithinRel(oracle::shallow_beta(true, B, h, k, c.scale), 1e-12));
  }
}

TEST_CASE("derived recursion examples", "[series]") {
  const auto s = recursion_shallow_derived(1.0, 1.0, 10);
  CHECK(s.alpha(1) == 1.0);
  CHECK_THAT(s.alpha(2), WithinRel(2.0, 1e-15));
  CHECK_THAT(s.alpha(3), WithinRel(3.0, 1e-15));
  const auto c = recursion_shallow_derived(0.4, 1.5, 200);
  for (int k = 1; k <= 200; ++k)
    CHECK_THAT(c.scaled(k), WithinRel(oracle::shallow_beta(false, 0.4, 1.5, k, c.scale), 1e-12));

  // shallow derived vs printed: factor 2^(k-1)
  const auto p = recursion_shallow_printed(1.0, 1.0, 10);
  for (int k = 1; k <= 10; ++k) CHECK_THAT(s.alpha(k) / p.alpha(k), WithinRel(std::pow(2.0, k - 1), 1e-13));

  // full derived at k = 2: (2 sin t - sin 2t) a_2 = 2B cos t
  const auto f = recursion_steady_derived(0.8, 1.1, 3);
  const double t = 0.88;
  CHECK_THAT(f.alpha(2), WithinRel(2 * 0.8 * std::cos(t) / (2 * std::sin(t) - std::sin(2 * t)), 1e-13));
}

TEST_CASE("full derived recursion approaches the shallow one as (Bh)^2", "[series]") {
  const std::vector<double> thetas = {0.2, 0.1, 0.05, 0.025};
  for (int k = 2; k <= 6; ++k) {
    std::vector<double> gaps;
    for (double t : thetas)
      gaps.push_back(std::abs(recursion_steady_derived(t, 1.0, 6).alpha(k) / recursion_shallow_derived(t, 1.0, 6).alpha(k) - 1));
    CHECK_THAT(oracle::loglog_slope(thetas, gaps), WithinAbs(2.0, 0.2));
  }
}

TEST_CASE("every mode reproduces its own recursion", "[series][property]") {
  for (auto mode : {RecursionMode::paper_printed, RecursionMode::steady_derived})
    for (auto depth : {DepthModel::full, DepthModel::shallow})
      for (auto [B, h] : {std::pair{1.0, 1.0}, std::pair{0.2, 1.0}, std::pair{0.7, 2.0}}) {
        const auto c = run_recursion(mode, depth, B, h, 80);
        CHECK(c.alpha(1) == 1.0);
        for (int k = 2; k <= 80; ++k)
          CHECK_THAT(c.scaled(k), WithinRel(resubstitute(mode, depth, B, h, c, k), 1e-12));
      }
}

TEST_CASE("scaled coefficients stay in range at K = 200", "[series][property]") {
  for (auto mode : {RecursionMode::paper_printed, RecursionMode::steady_derived})
    for (auto depth : {DepthModel::full, DepthModel::shallow})
      for (auto [B, h] : {std::pair{1.0, 1.0}, std::pair{0.05, 1.0}, std::pair{2.0, 1.3}, std::pair{0.3, 0.1}}) {
        const auto c = run_recursion(mode, depth, B, h, 200);
        CHECK(c.well_scaled());
        for (int k = 1; k <= 200; ++k) {
          CHECK(std::abs(c.scaled(k)) >= 1e-12);
          CHECK(std::abs(c.scaled(k)) <= 1e12);
        }
      }
}

TEST_CASE("recursion denominators reject resonance", "[series]") {
  CHECK_THROWS_AS(recursion_steady_derived(std::numbers::pi, 1.0, 5), ResonanceError);
  CHECK_THROWS_AS(recursion_paper_printed(2 * std::numbers::pi, 1.0, 5), ResonanceError);
  CHECK_THROWS_AS(build_series(std::numbers::pi, 1.0, 10, RecursionMode::steady_derived, DepthModel::full),
                  ResonanceError);
  CHECK_THROWS_AS(build_series(1.0, 1.0, 1, RecursionMode::steady_derived, DepthModel::full), InvalidArgument);
  // small k theta uses the series form of k sin t - sin kt
  CHECK_THAT(resonance_denominator(3, 1e-3), WithinRel(3 * std::sin(1e-3) - std::sin(3e-3), 1e-6));
}

TEST_CASE("series solution metadata", "[series]") {
  const auto s = build_series(0.9, 1.2, 20, RecursionMode::steady_derived, DepthModel::full);
  CHECK(s.order() == 20);
  CHECK(s.alpha(1) == 1.0);
  CHECK_THAT(s.A, WithinAbs(-std::sin(1.08) / 1.08, 1e-14));
  CHECK_FALSE(s.has_amplitude());
  CHECK(s.with_amplitude(-0.3).a1 == -0.3);
}

TEST_CASE("radius estimates", "[series]") {
  const auto printed = build_series(1.0, 1.0, 200, RecursionMode::paper_printed, DepthModel::shallow);
  CHECK_THAT(radius_estimate(printed).radius, WithinRel(2.0, 0.02));
  CHECK(radius_estimate(printed).geometric);
  const auto derived = build_series(1.0, 1.0, 200, RecursionMode::steady_derived, DepthModel::shallow);
  CHECK_THAT(radius_estimate(derived).radius, WithinRel(1.0, 0.02));
  std::vector<double> alphas;
  for (int k = 1; k <= 100; ++k) alphas.push_back(std::pow(3.0, k - 1));
  CHECK_THAT(radius_estimate(ScaledCoefficients::from_alphas(alphas)).radius, WithinRel(1.0 / 3.0, 1e-6));
  std::vector<double> lone(20, 0.0);
  lone[0] = 1.0;
  const auto flat = radius_estimate(ScaledCoefficients::from_alphas(lone));
  CHECK(std::isinf(flat.radius));
  CHECK_FALSE(flat.geometric);
}

TEST_CASE("Koebe diagnostic", "[series]") {
  for (auto mode : {RecursionMode::paper_printed, RecursionMode::steady_derived}) {
    const auto rep = koebe_diagnostic(build_series(0.8, 1.3, 30, mode, DepthModel::shallow));
    CHECK(rep.max_deviation <= 1e-12);
    CHECK(rep.bieberbach_bound);
    const double b2h3 = 0.64 * std::pow(1.3, 3);
    CHECK_THAT(rep.radius, WithinRel(mode == RecursionMode::paper_printed ? 2 * b2h3 : b2h3, 1e-15));
  }
  const auto five = koebe_diagnostic(build_series(1.0, 1.0, 5, RecursionMode::paper_printed, DepthModel::shallow));
  REQUIRE(five.normalized.size() == 5);
  for (int n = 1; n <= 5; ++n) CHECK_THAT(five.normalized[static_cast<std::size_t>(n - 1)], WithinAbs(n, 1e-14));
}

TEST_CASE("mode names round-trip", "[series]") {
  CHECK(parse_recursion_mode(to_string(RecursionMode::paper_printed)) == RecursionMode::paper_printed);
  CHECK(parse_recursion_mode("steady_derived") == RecursionMode::steady_derived);
  CHECK_FALSE(parse_recursion_mode("printed").has_value());
  CHECK(parse_depth_model("shallow") == DepthModel::shallow);
  CHECK_FALSE(parse_depth_model("deep").has_value());
}
