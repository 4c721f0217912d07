#pragma once

#include <span>
#include <vector>

#include "dbk/complex.hpp"

namespace dbk {

/// Complex polynomial in Chebyshev form over a local variable
/// u = (x - center) / scale:
///   p(x) = sum_k coeffs[k] * T_k(u).
/// With u of order one on the data, the Chebyshev coefficients stay of the
/// size of the values, which the monomial basis does not achieve beyond
/// degree ~8 (coefficient sums reach 1e6 times max |p|).
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::vector<Complex> coeffs, double center = 0.0, double scale = 1.0);

  static Polynomial constant(Complex c, double center = 0.0, double scale = 1.0);
  /// prod (x - r) over the given roots, monic in x.
  static Polynomial from_roots(std::span<const Complex> roots, double center = 0.0,
                               double scale = 1.0);

  Complex operator()(Complex x) const;
  Complex operator()(double x) const { return (*this)(Complex{x, 0.0}); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  double center() const { return center_; }
  double scale() const { return scale_; }

  /// Coefficient of x^degree in the original variable.
  Complex leading_coefficient_x() const;
  /// d/dx, same variable map.
  Polynomial derivative() const;
  /// Coefficients of x^k in the original variable, for display; the
  /// conversion loses accuracy as the degree grows.
  std::vector<Complex> monomial_coeffs() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(Complex c) const;
  /// Multiply by (x - r).
  Polynomial times_linear(Complex r) const;

  /// Largest |coeff|.
  double coefficient_norm() const;
  /// max |Im coeff| / coefficient_norm().
  double imaginary_ratio() const;
  Polynomial real_part() const;

  /// Drops trailing coefficients with |a_k| <= rel_tol * coefficient_norm().
  Polynomial trimmed(double rel_tol = 0.0) const;

  /// Roots in x through the eigenvalues of the colleague matrix in u.
  std::vector<Complex> roots() const;

 private:
  void require_same_map(const Polynomial& o) const;

  std::vector<Complex> coeffs_{Complex{0.0, 0.0}};
  double center_ = 0.0;
  double scale_ = 1.0;
};

}  // namespace dbk
