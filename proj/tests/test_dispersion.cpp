#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gkdv/dispersion.hpp"
#include "gkdv/verify/oracles.hpp"

using namespace gkdv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("omega^2 examples", "[dispersion]") {
  const PhysicalParams water(1.0, 9.81, 1000.0, 0.0);
  CHECK(omega_squared(0.0, water) == 0.0);
  for (double kh : {0.001, 0.01, 0.03, 0.05}) {
    const double k = kh / water.h();
    CHECK(std::abs(omega_squared(k, water) / (water.c0() * water.c0() * k * k) - 1.0) <= 1e-3);
  }
  const PhysicalParams film(0.002, 0.0, 1000.0, 0.072);
  for (double kh : {0.001, 0.01, 0.05}) {
    const double k = kh / film.h();
    CHECK(std::abs(omega_squared(k, film) / (film.h() * film.sigma() / film.rho() * std::pow(k, 4)) - 1.0) <= 1e-2);
  }
  CHECK_THROWS_AS(omega_squared(-1.0, water), InvalidArgument);
}

TEST_CASE("model frequency", "[dispersion]") {
  const auto unit = PhysicalParams::unit();
  CHECK(model_dispersion_gkdv(0.0, unit) == 0.0);
  CHECK_THAT(model_dispersion_gkdv(1.0, unit), WithinAbs(1.17520, 5e-6));
  const PhysicalParams p(0.5, 9.81, 1.0, 0.0);
  for (double kh : {0.01, 0.05}) {
    const double k = kh / p.h();
    // sinh x = x (1 + x^2/6 + ...)
    CHECK(std::abs(model_dispersion_gkdv(k, p) / (p.c0() * k) - 1.0) <= 1e-3);
    CHECK_THAT(model_dispersion_gkdv(k, p), WithinRel(p.c0() * k * (1 + kh * kh / 6 + std::pow(kh, 4) / 120), 1e-9));
  }
  CHECK_THROWS_AS(model_dispersion_gkdv(31.0, unit), BandLimitError);
}

TEST_CASE("group velocity", "[dispersion]") {
  const PhysicalParams water(1.0, 9.81, 1000.0, 0.0);
  CHECK(group_velocity(0.0, water) == water.c0());
  CHECK_THAT(group_velocity(1e-6, water), WithinRel(water.c0(), 1e-9));

  const PhysicalParams mixed(0.7, 9.81, 1000.0, 0.072);
  for (const auto& p : {water, mixed}) {
    for (double k : {0.05, 0.3, 1.0, 4.0, 25.0}) {
      const auto omega = [&p](double kk) { return std::sqrt(omega_squared(kk, p)); };
      const double fd = oracle::central_difference(omega, k, 1e-6 * k);
      CHECK_THAT(group_velocity(k, p), WithinRel(fd, 1e-5));
    }
  }
  const double k = 20.0 / water.h();
  CHECK_THAT(group_velocity(k, water), WithinRel(0.5 * std::sqrt(water.g() / k), 1e-3));
}

TEST_CASE("sample bundle and phase velocity", "[dispersion]") {
  const PhysicalParams p(1.0, 9.81, 1000.0, 0.0);
  const auto s = sample_dispersion(0.5, p);
  CHECK(s.k == 0.5);
  CHECK(s.omega2 == omega_squared(0.5, p));
  CHECK_THAT(s.phase_velocity * s.phase_velocity * 0.25, WithinRel(s.omega2, 1e-14));
  CHECK(phase_velocity(0.0, p) == p.c0());
}

TEST_CASE("omega^2 is non-negative and increasing", "[dispersion][property]") {
  const std::vector<PhysicalParams> ps = {PhysicalParams(1.0, 9.81, 1000.0, 0.0),
                                          PhysicalParams(0.01, 9.81, 1000.0, 0.072),
                                          PhysicalParams(0.5, 0.0, 1.0, 1.0)};
  for (const auto& p : ps) {
    double prev = -1.0;
    for (int i = 0; i <= 2000; ++i) {
      const double k = 0.01 * i;
      const double w2 = omega_squared(k, p);
      CHECK(w2 >= 0.0);
      CHECK(w2 > prev);
      prev = w2;
    }
  }
}

TEST_CASE("nondimensional curves collapse", "[dispersion][property]") {
  // two layers sharing sigma/(rho g h^2) = 0.25
  const PhysicalParams a(1.0, 9.81, 1000.0, 0.25 * 1000.0 * 9.81);
  const PhysicalParams b(0.2, 2.0, 10.0, 0.25 * 10.0 * 2.0 * 0.04);
  for (double kh : {0.01, 0.3, 1.0, 3.0, 10.0}) {
    const double wa = omega_squared(kh / a.h(), a) * a.h() / a.g();
    const double wb = omega_squared(kh / b.h(), b) * b.h() / b.g();
    CHECK_THAT(wa, WithinRel(wb, 1e-13));
    CHECK_THAT(wa, WithinRel((kh + 0.25 * kh * kh * kh) * std::tanh(kh), 1e-13));
  }
}

TEST_CASE("model / linear frequency -> 1 at order (kh)^2", "[dispersion][property]") {
  const PhysicalParams p(1.0, 9.81, 1.0, 0.0);
  std::vector<double> khs = {0.1, 0.05, 0.025, 0.0125}, gaps;
  for (double kh : khs) gaps.push_back(std::abs(model_dispersion_gkdv(kh, p) / std::sqrt(omega_squared(kh, p)) - 1.0));
  CHECK_THAT(oracle::loglog_slope(khs, gaps), WithinAbs(2.0, 0.05));
}
