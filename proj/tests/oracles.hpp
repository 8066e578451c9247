#pragma once

// Reference values for the nonlocal functionals on the unit square, from the
// covariogram g(r, φ) = (1 - r cos φ)(1 - r sin φ) of [0, 1]^2 integrated in
// closed form along r and numerically along φ.

#include <cmath>
#include <functional>

namespace foamlab::testing {

// Composite Simpson rule on [a, b] with 2n panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
  const double h = (b - a) / (2 * n);
  double sum = f(a) + f(b);
  for (int i = 1; i < 2 * n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// ∫_Q ∫_{R^2 \ Q} |x - y|^{-(2+s)} for Q the unit square.
inline double square_fractional_perimeter(double s) {
  const double pi = std::acos(-1.0);
  auto f = [s](double phi) {
    const double c = std::cos(phi);
    const double t = std::sin(phi);
    return (c + t) * std::pow(c, s - 1) / (1 - s) - c * t * std::pow(c, s - 2) / (2 - s) + std::pow(c, s) / s;
  };
  return 8.0 * simpson(f, 0.0, pi / 4);
}

// ∫_Q ∫_Q |x - y|^{α - 2} for Q the unit square, α = 1.
inline double square_riesz_alpha1() {
  const double pi = std::acos(-1.0);
  auto f = [](double phi) {
    const double c = std::cos(phi);
    const double t = std::sin(phi);
    return 1.0 / c - (c + t) / (2 * c * c) + t / (3 * c * c);
  };
  return 8.0 * simpson(f, 0.0, pi / 4);
}

}  // namespace foamlab::testing
