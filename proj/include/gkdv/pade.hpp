#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gkdv {

/// p(x)/q(x) with q(0) = 1.
struct RationalFunction {
  std::vector<double> numerator{0.0};
  std::vector<double> denominator{1.0};

  std::size_t numerator_degree() const noexcept { return numerator.size() - 1; }
  std::size_t denominator_degree() const noexcept { return denominator.size() - 1; }

  double operator()(double x) const noexcept { return horner(numerator, x) / horner(denominator, x); }

  double derivative(double x) const noexcept {
    const double p = horner(numerator, x);
    const double q = horner(denominator, x);
    return (horner_derivative(numerator, x) * q - p * horner_derivative(denominator, x)) / (q * q);
  }

  static double horner(const std::vector<double>& c, double x) noexcept {
    double s = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) s = s * x + c[i];
    return s;
  }

  static double horner_derivative(const std::vector<double>& c, double x) noexcept {
    double s = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) s = s * x + static_cast<double>(i) * c[i];
    return s;
  }
};

/// Type-[m/n] Padé approximant of the Taylor coefficients c_0, c_1, ...
///
/// Rank-revealing variant: the Toeplitz block whose null vector gives the
/// denominator is inspected with an SVD and (m, n) are reduced until it has
/// full rank, so exactly rational inputs (e.g. z/(1-z)^2) come back in lowest
/// terms instead of with spurious pole/zero pairs.
inline RationalFunction robust_pade(std::span<const double> taylor, int m, int n, double tol = 1e-14) {
  const std::size_t need = static_cast<std::size_t>(m + n + 1);
  std::vector<double> c(need, 0.0);
  std::copy_n(taylor.begin(), std::min(need, taylor.size()), c.begin());

  double norm = 0.0;
  for (double v : c) norm += v * v;
  norm = std::sqrt(norm);
  const double ts = tol * norm;

  double head = 0.0;
  for (int i = 0; i <= m; ++i) head += c[i] * c[i];
  if (std::sqrt(head) <= ts) return {};

  auto entry = [&c](int i, int j) { return i >= j ? c[static_cast<std::size_t>(i - j)] : 0.0; };

  Eigen::VectorXd b;
  while (true) {
    if (n == 0) {
      b = Eigen::VectorXd::Ones(1);
      break;
    }
    Eigen::MatrixXd block(n, n + 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= n; ++j) block(i, j) = entry(m + 1 + i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > ts) ++rank;
    if (rank == n) {
      b = svd.matrixV().col(n);
      break;
    }
    m -= n - rank;
    n = rank;
  }

  std::vector<double> den(b.data(), b.data() + b.size());
  std::vector<double> num(static_cast<std::size_t>(m + 1), 0.0);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= std::min(i, n); ++j) num[i] += entry(i, j) * den[j];

  // Common leading zeros of numerator and denominator cancel.
  std::size_t lead = 0;
  while (lead + 1 < den.size() && std::abs(den[lead]) <= tol) ++lead;
  den.erase(den.begin(), den.begin() + static_cast<std::ptrdiff_t>(lead));
  num.erase(num.begin(), num.begin() + static_cast<std::ptrdiff_t>(std::min(lead, num.size() - 1)));
  while (den.size() > 1 && std::abs(den.back()) <= tol) den.pop_back();
  while (num.size() > 1 && std::abs(num.back()) <= ts) num.pop_back();

  const double q0 = den.front();
  for (auto& v : num) v /= q0;
  for (auto& v : den) v /= q0;
  return {std::move(num), std::move(den)};
}

}  // namespace gkdv
