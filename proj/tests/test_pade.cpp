#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gkdv/pade.hpp"
#include "gkdv/traveling_wave.hpp"

using namespace gkdv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("exactly rational series come back in lowest terms", "[pade]") {
  // z / (1 - z)^2 = sum n z^n
  std::vector<double> c(41);
  for (int n = 0; n <= 40; ++n) c[static_cast<std::size_t>(n)] = n;
  const auto r = robust_pade(c, 20, 20);
  CHECK(r.denominator_degree() == 2);
  CHECK(r.numerator_degree() == 1);
  for (double z : {-3.0, -1.0, -0.5, 0.3, 2.5}) CHECK_THAT(r(z), WithinRel(z / ((1 - z) * (1 - z)), 1e-12));
}

TEST_CASE("geometric series", "[pade]") {
  std::vector<double> c(21, 1.0);
  const auto r = robust_pade(c, 10, 10);
  CHECK(r.denominator_degree() == 1);
  CHECK_THAT(r(-5.0), WithinRel(1.0 / 6.0, 1e-13));
  CHECK_THAT(r.derivative(0.5), WithinRel(4.0, 1e-12));
}

TEST_CASE("exp is approximated beyond its partial sums", "[pade]") {
  std::vector<double> c(21);
  double f = 1.0;
  for (int n = 0; n <= 20; ++n) {
    if (n) f *= n;
    c[static_cast<std::size_t>(n)] = 1.0 / f;
  }
  const auto r = robust_pade(c, 10, 10);
  double partial = 0, term = 1;
  for (int n = 0; n <= 20; ++n, term *= -8.0 / n) partial += term;
  CHECK(std::abs(r(-8.0) - std::exp(-8.0)) < 1e-2 * std::abs(partial - std::exp(-8.0)));
  CHECK_THAT(r(-8.0), WithinRel(std::exp(-8.0), 0.05));
  CHECK_THAT(r(3.0), WithinRel(std::exp(3.0), 1e-8));
}

TEST_CASE("zero series gives the zero function", "[pade]") {
  std::vector<double> c(11, 0.0);
  const auto r = robust_pade(c, 5, 5);
  CHECK(r(1.7) == 0.0);
}

TEST_CASE("series evaluator switches to Padé outside the disk", "[pade]") {
  // log(1 + z) = sum (-1)^(n+1) z^n / n, radius 1
  std::vector<double> c(71, 0.0);
  for (int n = 1; n <= 70; ++n) c[static_cast<std::size_t>(n)] = (n % 2 ? 1.0 : -1.0) / n;
  const SeriesEvaluator eval(c);
  const auto inside = eval(0.1);
  CHECK_FALSE(inside.accelerated);
  CHECK_THAT(inside.value, WithinRel(std::log1p(0.1), 1e-15));
  const auto edge = eval(1.0);
  CHECK(edge.accelerated);
  CHECK(edge.converged);
  CHECK_THAT(edge.value, WithinRel(std::log(2.0), 1e-10));
  CHECK_THAT(eval(2.0).value, WithinRel(std::log(3.0), 1e-8));
}
