#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "dbk/krein.hpp"

namespace dbk::krein {

namespace {

Complex sinc(Complex z) {
  if (std::abs(z) < 1e-4) {
    const Complex z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

void require_band(double b) {
  if (!(b > 0.0 && b < std::numbers::pi / 2))
    throw DomainError("discrete sine: b must lie in (0, pi/2)");
}

}  // namespace

Complex FiniteSequence::at(long n) const {
  const long k = n - first;
  if (k < 0 || k >= static_cast<long>(values.size())) return {0.0, 0.0};
  return values[static_cast<std::size_t>(k)];
}

Complex discrete_sine_xi(double b, Complex w, long n) {
  require_band(b);
  require_finite(w, "discrete_sine_xi");
  return (b / std::numbers::pi) * sinc(b * (std::conj(w) - static_cast<double>(n)));
}

Complex discrete_sine_project(double b, const FiniteSequence& f, long m) {
  require_band(b);
  Complex s{0.0, 0.0};
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    const long n = f.first + static_cast<long>(k);
    s += f.values[k] * (b / std::numbers::pi) * sinc(Complex{b * static_cast<double>(m - n), 0.0});
  }
  return s;
}

DiscreteSineTransform discrete_sine_fxi(double b, Complex w, const FiniteSequence& f, Complex lambda) {
  require_band(b);
  require_finite(w, "discrete_sine_fxi");
  require_finite(lambda, "discrete_sine_fxi");
  if (w.imag() == 0.0) throw DomainError("discrete_sine_fxi: w must be nonreal");
  for (Complex a : f.values) require_finite(a, "discrete_sine_fxi");

  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto integrand = [&](double x) {
    Complex s{0.0, 0.0};
    for (std::size_t k = 0; k < f.values.size(); ++k) {
      const double n = static_cast<double>(f.first + static_cast<long>(k));
      s += f.values[k] * std::exp(kI * (n - lambda) * x);
    }
    return s * inv_sqrt_2pi;
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  double err_re = 0.0, err_im = 0.0;
  const double re = Quad::integrate([&](double x) { return integrand(x).real(); }, -b, b, 15, 1e-14, &err_re);
  const double im = Quad::integrate([&](double x) { return integrand(x).imag(); }, -b, b, 15, 1e-14, &err_im);

  DiscreteSineTransform out;
  out.fourier = {re, im};
  const double size = std::abs(out.fourier) + 1e-300;
  if (std::hypot(err_re, err_im) > 1e-10 * std::max(size, 1.0))
    throw ConvergenceError("discrete_sine_fxi: quadrature did not converge");

  Complex closed{0.0, 0.0};
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    const double n = static_cast<double>(f.first + static_cast<long>(k));
    closed += f.values[k] * 2.0 * b * sinc(b * (n - lambda));
  }
  out.fourier_closed = closed * inv_sqrt_2pi;

  const Complex den = 2.0 * b * sinc(b * (std::conj(w) - lambda));
  if (std::abs(den) < 1e-14 * b) throw PoleError("discrete_sine_fxi: lambda is a zero of sin(b(conj w - lambda))");
  const double root_2pi = std::sqrt(2.0 * std::numbers::pi);
  out.fxi = root_2pi * out.fourier / den;
  out.fxi_closed = root_2pi * out.fourier_closed / den;
  out.r_fxi = std::sqrt(std::numbers::pi / 2.0) * out.fourier_closed / b;
  return out;
}

}  // namespace dbk::krein
