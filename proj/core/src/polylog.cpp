#include "synthdim/polylog.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace synthdim {
namespace {

constexpr int kTerms = 72;
constexpr double kPi = std::numbers::pi;

double zeta_even(int m) {
  const double pi2 = kPi * kPi;
  switch (m) {
    case 1: return pi2 / 6.0;
    case 2: return pi2 * pi2 / 90.0;
    case 3: return pi2 * pi2 * pi2 / 945.0;
    case 4: return pi2 * pi2 * pi2 * pi2 / 9450.0;
    default: break;
  }
  double sum = 0.0;
  for (int n = 48; n >= 1; --n) sum += std::pow(static_cast<double>(n), -2.0 * m);
  return sum;
}

// c_k = zeta(s - k) / k! for the expansion of Li_s(e^mu) about mu = 0. The
// k = s - 1 slot belongs to the logarithmic term and is left at zero.
using Coefficients = std::array<double, kTerms>;

Coefficients make_coefficients(int s) {
  constexpr double zeta3 = 1.2020569031595942854;
  Coefficients c{};
  if (s == 2) c[0] = zeta_even(1);
  if (s == 3) {
    c[0] = zeta3;
    c[1] = zeta_even(1);
  }
  double s_factorial = 1.0;
  for (int i = 2; i <= s; ++i) s_factorial *= i;
  c[s] = -0.5 / s_factorial;
  // zeta(1 - 2m) = (-1)^m 2 (2m-1)! zeta(2m) / (2 pi)^{2m}, at k = s + 2m - 1.
  for (int m = 1;; ++m) {
    const int k = s + 2 * m - 1;
    if (k >= kTerms) break;
    double ratio = 1.0;  // (2m-1)! / k!
    for (int i = 2 * m; i <= k; ++i) ratio /= i;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    c[k] = sign * 2.0 * zeta_even(m) * ratio / std::pow(2.0 * kPi, 2 * m);
  }
  return c;
}

const Coefficients& coefficients(int s) {
  static const std::array<Coefficients, 3> table = {make_coefficients(1), make_coefficients(2),
                                                    make_coefficients(3)};
  return table[s - 1];
}

}  // namespace

cplx polylog_unit_circle(int s, double theta) {
  if (s < 1 || s > 3) throw std::domain_error("polylog order must be 1, 2 or 3");
  if (!std::isfinite(theta)) throw std::domain_error("polylog argument must be finite");
  const double t = std::remainder(theta, 2.0 * kPi);
  if (s == 1 && t == 0.0) throw std::domain_error("Li_1 diverges at theta = 0 mod 2pi");

  const cplx mu(0.0, t);
  const Coefficients& c = coefficients(s);
  cplx series = 0.0;
  for (int k = kTerms - 1; k >= 0; --k) series = series * mu + c[k];

  if (t != 0.0) {
    // ln(-mu) with mu = i t on the principal branch.
    const cplx log_minus_mu(std::log(std::abs(t)), t > 0.0 ? -kPi / 2.0 : kPi / 2.0);
    double harmonic = 0.0;
    for (int j = 1; j < s; ++j) harmonic += 1.0 / j;
    cplx lead = 1.0;
    for (int j = 1; j < s; ++j) lead *= mu / static_cast<double>(j);
    series += lead * (harmonic - log_minus_mu);
  }
  return series;
}

}  // namespace synthdim
