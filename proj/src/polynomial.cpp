#include "dbk/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace dbk {

Polynomial::Polynomial(std::vector<Complex> coeffs, double center, double scale)
    : coeffs_(std::move(coeffs)), center_(center), scale_(scale) {
  if (coeffs_.empty()) coeffs_.assign(1, Complex{0.0, 0.0});
  if (!(scale_ > 0.0) || !std::isfinite(center_) || !std::isfinite(scale_))
    throw DomainError("Polynomial: invalid affine map");
}

Polynomial Polynomial::constant(Complex c, double center, double scale) {
  return Polynomial({c}, center, scale);
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots, double center, double scale) {
  Polynomial p = constant(1.0, center, scale);
  for (Complex r : roots) p = p.times_linear(r);
  return p;
}

Complex Polynomial::operator()(Complex x) const {
  // Clenshaw
  const Complex u = (x - center_) / scale_;
  Complex b1{0.0, 0.0}, b2{0.0, 0.0};
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
    const Complex b0 = coeffs_[k] + 2.0 * u * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs_[0] + u * b1 - b2;
}

Complex Polynomial::leading_coefficient_x() const {
  const int n = degree();
  if (n == 0) return coeffs_[0];
  return coeffs_.back() * std::pow(2.0, n - 1) / std::pow(scale_, n);
}

Polynomial Polynomial::derivative() const {
  const int n = degree();
  if (n == 0) return constant(0.0, center_, scale_);
  // d_k = d_{k+2} + 2 (k+1) c_{k+1}, with d_0 halved
  std::vector<Complex> d(n + 2, Complex{0.0, 0.0});
  for (int k = n - 1; k >= 0; --k) d[k] = d[k + 2] + 2.0 * (k + 1) * coeffs_[k + 1];
  d[0] *= 0.5;
  d.resize(n);
  for (auto& v : d) v /= scale_;
  return Polynomial(std::move(d), center_, scale_);
}

std::vector<Complex> Polynomial::monomial_coeffs() const {
  // T_{k+1} = 2u T_k - T_{k-1}
  const std::size_t n = coeffs_.size();
  std::vector<Complex> out(n, Complex{0.0, 0.0});
  std::vector<double> prev(n, 0.0), cur(n, 0.0);
  prev[0] = 1.0;
  out[0] += coeffs_[0];
  if (n > 1) {
    cur[1] = 1.0;
    out[1] += coeffs_[1];
  }
  for (std::size_t k = 2; k < n; ++k) {
    std::vector<double> next(n, 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) next[j + 1] += 2.0 * cur[j];
    for (std::size_t j = 0; j < n; ++j) next[j] -= prev[j];
    for (std::size_t j = 0; j < n; ++j) out[j] += coeffs_[k] * next[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  // substitute u = (x - center) / scale by Horner in x
  std::vector<Complex> x_coeffs(n, Complex{0.0, 0.0});
  for (std::size_t k = n; k-- > 0;) {
    std::vector<Complex> next(n, Complex{0.0, 0.0});
    for (std::size_t j = 0; j + 1 < n; ++j) {
      next[j + 1] += x_coeffs[j] / scale_;
      next[j] -= x_coeffs[j] * (center_ / scale_);
    }
    next[0] += out[k];
    x_coeffs = std::move(next);
  }
  return x_coeffs;
}

void Polynomial::require_same_map(const Polynomial& o) const {
  if (o.center_ != center_ || o.scale_ != scale_)
    throw DomainError("Polynomial: operands use different variable maps");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  require_same_map(o);
  std::vector<Complex> c(std::max(coeffs_.size(), o.coeffs_.size()), Complex{0.0, 0.0});
  for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) c[k] += o.coeffs_[k];
  return Polynomial(std::move(c), center_, scale_);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  require_same_map(o);
  // T_i T_j = (T_{i+j} + T_{|i-j|}) / 2
  std::vector<Complex> c(coeffs_.size() + o.coeffs_.size() - 1, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
      const Complex h = 0.5 * coeffs_[i] * o.coeffs_[j];
      c[i + j] += h;
      c[i > j ? i - j : j - i] += h;
    }
  }
  return Polynomial(std::move(c), center_, scale_);
}

Polynomial Polynomial::operator*(Complex s) const {
  std::vector<Complex> c = coeffs_;
  for (auto& v : c) v *= s;
  return Polynomial(std::move(c), center_, scale_);
}

Polynomial Polynomial::times_linear(Complex r) const {
  // x - r = scale * (u - u_r);  u T_0 = T_1,  u T_k = (T_{k+1} + T_{k-1}) / 2
  const Complex ur = (r - center_) / scale_;
  std::vector<Complex> c(coeffs_.size() + 1, Complex{0.0, 0.0});
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const Complex a = scale_ * coeffs_[k];
    if (k == 0) {
      c[1] += a;
    } else {
      c[k + 1] += 0.5 * a;
      c[k - 1] += 0.5 * a;
    }
    c[k] -= ur * a;
  }
  return Polynomial(std::move(c), center_, scale_);
}

double Polynomial::coefficient_norm() const {
  double m = 0.0;
  for (const auto& v : coeffs_) m = std::max(m, std::abs(v));
  return m;
}

double Polynomial::imaginary_ratio() const {
  const double norm = coefficient_norm();
  if (norm == 0.0) return 0.0;
  double m = 0.0;
  for (const auto& v : coeffs_) m = std::max(m, std::abs(v.imag()));
  return m / norm;
}

Polynomial Polynomial::real_part() const {
  std::vector<Complex> c;
  c.reserve(coeffs_.size());
  for (const auto& v : coeffs_) c.emplace_back(v.real(), 0.0);
  return Polynomial(std::move(c), center_, scale_);
}

Polynomial Polynomial::trimmed(double rel_tol) const {
  const double cut = rel_tol * coefficient_norm();
  std::vector<Complex> c = coeffs_;
  while (c.size() > 1 && std::abs(c.back()) <= cut) c.pop_back();
  return Polynomial(std::move(c), center_, scale_);
}

std::vector<Complex> Polynomial::roots() const {
  const Polynomial p = trimmed(0.0);
  const int n = p.degree();
  if (n < 1) return {};
  const auto& c = p.coeffs_;
  std::vector<Complex> us;
  if (n == 1) {
    us.push_back(-c[0] / c[1]);
  } else {
    // colleague matrix: tridiagonal u-multiplication on T_0..T_{n-1}, last row corrected
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    m(0, 1) = 1.0;
    for (int k = 1; k < n; ++k) {
      m(k, k - 1) = 0.5;
      if (k + 1 < n) m(k, k + 1) = 0.5;
    }
    for (int j = 0; j < n; ++j) m(n - 1, j) -= c[j] / (2.0 * c[n]);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    if (solver.info() != Eigen::Success) throw ConvergenceError("Polynomial::roots: eigensolver failed");
    for (int i = 0; i < n; ++i) us.push_back(solver.eigenvalues()[i]);
  }
  std::vector<Complex> out;
  out.reserve(n);
  for (Complex u : us) out.push_back(center_ + scale_ * u);
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

}  // namespace dbk
