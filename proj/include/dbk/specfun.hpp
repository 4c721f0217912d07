#pragma once

#include <functional>

#include "dbk/complex.hpp"

// Special functions used by the kernel families: Gamma on the positive axis,
// the entire Bessel-type series j_s(sqrt t), Bessel J of real order, and
// complex-step differentiation for removable singularities.
namespace dbk::specfun {

struct SeriesParams {
  int max_terms = 400;
  /// Terms are dropped once |term| <= tail_tolerance * (1 + |partial sum|)
  /// past the peak of the term sequence.
  double tail_tolerance = 1e-16;
};

/// Gamma(x) for x in (0, 60], relative error below 1e-12.
double gamma_real(double x);

/// j_s(sqrt t) = J_s(sqrt t) * t^{-s/2}, entire in t, evaluated by
///   2^{-s} sum_k (-t/4)^k / (k! Gamma(k+s+1)).
/// The partial sums are accumulated in extended precision: for |t| in the
/// thousands the terms reach ~1e19 while the sum is O(1).
/// Throws ConvergenceError when max_terms is exhausted.
Complex entire_bessel(double s, Complex t, const SeriesParams& params = {});

/// J_s(x) for x > 0, s > -1, through x^s * entire_bessel(s, x^2).
double bessel_j(double s, double x);

/// Im f(x + ih) / h.
double complex_step_derivative(const std::function<Complex(Complex)>& f, double x, double h);

/// Same with the default step h = 1e-8 * max(1, |x|).
double complex_step_derivative(const std::function<Complex(Complex)>& f, double x);

inline double default_complex_step(double x) { return 1e-8 * std::max(1.0, std::abs(x)); }

}  // namespace dbk::specfun
