#include <algorithm>
#include <vector>

#include "dbk/polynomial.hpp"
#include "doctest.h"

using namespace dbk;

namespace {
Complex horner(const std::vector<Complex>& mono, Complex x) {
  Complex acc = 0.0;
  for (auto it = mono.rbegin(); it != mono.rend(); ++it) acc = acc * x + *it;
  return acc;
}
}  // namespace

TEST_CASE("polynomial: roots product agrees with direct product") {
  const std::vector<Complex> roots{{1.0, 2.0}, {-0.5, 0.1}, {3.0, 0.0}, {0.2, -1.0}};
  const Polynomial p = Polynomial::from_roots(roots, 0.7, 2.5);
  CHECK(p.degree() == 4);
  for (Complex x : {Complex{0.3, 0.0}, Complex{-2.0, 1.0}, Complex{5.0, -3.0}}) {
    Complex direct = 1.0;
    for (Complex r : roots) direct *= x - r;
    CHECK(std::abs(p(x) - direct) <= 1e-12 * std::abs(direct));
  }
  CHECK(std::abs(p.leading_coefficient_x() - 1.0) < 1e-12);
}

TEST_CASE("polynomial: colleague-matrix roots") {
  const std::vector<Complex> roots{{1.0, 2.0}, {-0.5, 0.1}, {3.0, 0.0}, {0.2, -1.0}, {-2.0, -0.3}};
  const Polynomial p = Polynomial::from_roots(roots, 0.0, 3.0);
  auto found = p.roots();
  REQUIRE(found.size() == roots.size());
  for (Complex r : roots) {
    double best = 1e300;
    for (Complex f : found) best = std::min(best, std::abs(f - r));
    CHECK(best < 1e-10);
  }
}

TEST_CASE("polynomial: monomial view, derivative, product") {
  const Polynomial p({Complex{1.0}, Complex{-2.0}, Complex{0.5}, Complex{3.0}}, 0.4, 1.7);
  const Polynomial q({Complex{0.0, 1.0}, Complex{2.0}}, 0.4, 1.7);
  const auto mono = p.monomial_coeffs();
  const Polynomial dp = p.derivative();
  const Polynomial pq = p * q;
  const Polynomial pl = p.times_linear(Complex{0.3, -0.2});
  for (double x : {-1.0, 0.0, 0.9, 2.2}) {
    CHECK(std::abs(horner(mono, x) - p(x)) < 1e-12);
    const double h = 1e-6;
    const Complex fd = (p(x + h) - p(x - h)) / (2 * h);
    CHECK(std::abs(dp(x) - fd) < 1e-6);
    CHECK(std::abs(pq(x) - p(x) * q(x)) < 1e-12);
    CHECK(std::abs(pl(x) - (x - Complex{0.3, -0.2}) * p(x)) < 1e-12);
  }
}

TEST_CASE("polynomial: real part and imaginary ratio") {
  const Polynomial p({Complex{1.0, 0.0}, Complex{2.0, 0.0}}, 0.0, 1.0);
  CHECK(p.imaginary_ratio() == 0.0);
  const Polynomial q = p * Complex{0.0, 1.0};
  CHECK(q.imaginary_ratio() > 0.99);
  CHECK(std::abs(q.real_part()(0.5)) < 1e-15);
}
