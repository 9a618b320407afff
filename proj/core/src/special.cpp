#include "arraycap/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace arraycap::special {

namespace {

constexpr double kSeriesLimit = 12.0;

double j0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

// Hankel expansion: J0(x) ~ sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)),
// chi = x - pi/4. The series is divergent; stop at the smallest term.
double j0_asymptotic(double x) {
  double p = 1.0;
  double q = 0.0;
  double a = 1.0;  // a_k / x^k, sign included
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= -(odd * odd) / (8.0 * k * x);
    const double mag = std::abs(a);
    if (mag >= last || mag < 1e-18) break;
    last = mag;
    // k odd feeds Q with sign (-1)^((k-1)/2); k even feeds P with (-1)^(k/2).
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? a : -a);
    } else {
      p += ((k / 2) % 2 == 0 ? a : -a);
    }
  }
  const double chi = x - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double sinc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double bessel_j0(double x) {
  const double ax = std::abs(x);
  return ax < kSeriesLimit ? j0_series(ax) : j0_asymptotic(ax);
}

}  // namespace arraycap::special
