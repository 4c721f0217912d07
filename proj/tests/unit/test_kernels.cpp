#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "dbk/kernels.hpp"
#include "doctest.h"

using namespace dbk;
constexpr double pi = std::numbers::pi;

TEST_CASE("discrete sine: values and band") {
  CHECK(discrete_sine_eval(pi / 3, 0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(discrete_sine_eval(pi / 3, 0, 1) == doctest::Approx(std::sqrt(3.0) / (2 * pi)).epsilon(1e-15));
  CHECK(std::abs(discrete_sine_eval(pi / 4, 0, 4)) < 1e-16);
  CHECK_THROWS_AS(KernelSpec::discrete_sine(2.0), DomainError);
  CHECK_THROWS_AS(KernelSpec::discrete_sine(0.0), DomainError);
  CHECK_NOTHROW(KernelSpec::discrete_sine(2.0, BandRange::extended));
  CHECK_THROWS_AS(KernelSpec::discrete_sine(3.5, BandRange::extended), DomainError);
  CHECK_THROWS_AS(KernelSpec::discrete_sine(pi / 3)(0.5, 1.0), DomainError);
}

TEST_CASE("discrete sine: trace density") {
  const double b = 1.1;
  for (long N : {0L, 5L, 40L}) {
    double tr = 0.0;
    for (long m = -N; m <= N; ++m) tr += discrete_sine_eval(b, m, m);
    CHECK(tr / (2 * N + 1) == doctest::Approx(b / pi).epsilon(1e-15));
  }
}

TEST_CASE("continuous sine") {
  CHECK(continuous_sine_eval(pi, 1.3, 1.3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(continuous_sine_eval(pi, 0.0, 0.5) == doctest::Approx(2.0 / pi).epsilon(1e-15));
  CHECK(std::abs(continuous_sine_eval(1.0, 0.0, pi)) < 1e-16);
  CHECK_THROWS_AS(KernelSpec::continuous_sine(-1.0), DomainError);
}

TEST_CASE("bessel kernel: frozen values and zeros") {
  CHECK(std::abs(bessel_eval(0.5, pi * pi, 4 * pi * pi)) < 1e-15);
  CHECK(bessel_eval(0.0, 1.0, 2.0) == doctest::Approx(0.1715723369389569134562228193122430383248).epsilon(1e-13));
  CHECK(bessel_eval(2.5, 3.0, 17.0) == doctest::Approx(0.008267048139233981086637302635789608389587).epsilon(1e-12));
  // diagonal: removable value through the complex-step path
  CHECK(bessel_eval(0.0, 1.0, 1.0) == doctest::Approx(0.1947930043820307772260075471781861829943).epsilon(1e-9));
  CHECK_THROWS_AS(bessel_eval(0.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(KernelSpec::bessel(-1.0), DomainError);
}

TEST_CASE("bessel kernel: continuity at the diagonal") {
  for (double s : {-0.5, 0.0, 2.5}) {
    for (double x : {0.3, 4.0, 25.0}) {
      const double d = bessel_eval(s, x, x);
      double last = 1e300;
      for (double eps : {1e-3, 1e-5, 1e-7}) {
        const double gap = std::abs(bessel_eval(s, x, x + eps) - d);
        CHECK(gap < last);
        last = gap;
      }
      // the gap is first order in eps
      CHECK(last < 1e-5 * std::max(1.0, std::abs(d)));
    }
  }
}

TEST_CASE("kernel symmetry and diagonal positivity") {
  const KernelSpec specs[] = {KernelSpec::continuous_sine(2.0), KernelSpec::discrete_sine(1.0), KernelSpec::bessel(0.5)};
  for (const auto& k : specs) {
    for (double x : {1.0, 2.0, 7.0})
      for (double y : {1.0, 3.0, 10.0}) CHECK(k(x, y) == k(y, x));
    for (double x : {1.0, 4.0, 9.0}) CHECK(k(x, x) > 0.0);
  }
}

TEST_CASE("kernel_grid: entries and parallel = serial") {
  const auto K = kernel_grid(KernelSpec::discrete_sine(pi / 3), {0.0, 1.0});
  CHECK(K.entries(0, 0) == doctest::Approx(1.0 / 3));
  CHECK(K.entries(0, 1) == doctest::Approx(std::sqrt(3.0) / (2 * pi)));
  CHECK(K.entries(1, 0) == K.entries(0, 1));
  const auto one = kernel_grid(KernelSpec::bessel(1.0), {2.0});
  CHECK(one.entries(0, 0) == bessel_eval(1.0, 2.0, 2.0));

  const std::vector<double> pts{1.0, 2.0, 3.0};
  const auto B = kernel_grid(KernelSpec::bessel(0.0), pts);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(B.entries(i, j) == bessel_eval(0.0, pts[i], pts[j]));

  std::vector<double> grid;
  for (int i = 1; i <= 60; ++i) grid.push_back(0.37 * i);
  const KernelSpec spec = KernelSpec::bessel(1.5);
  const auto par = kernel_grid(spec, grid);
  const auto ser = kernel_grid_serial(spec, grid);
  CHECK((par.entries.array() == ser.entries.array()).all());
  CHECK_THROWS_AS(kernel_grid(spec, {1.0, 1.0}), DomainError);
}

TEST_CASE("psd_check") {
  const auto two = kernel_grid(KernelSpec::discrete_sine(pi / 3), {0.0, 1.0});
  CHECK(psd_check(two).pass);
  KernelMatrix I{{0.0, 1.0, 2.0}, Eigen::MatrixXd::Identity(3, 3), std::nullopt};
  const auto r = psd_check(I);
  CHECK(r.pass);
  CHECK(r.min_eigenvalue == doctest::Approx(1.0));
  KernelMatrix bad{{0.0, 1.0}, (Eigen::MatrixXd(2, 2) << 1, 2, 2, 1).finished(), std::nullopt};
  CHECK_FALSE(psd_check(bad).pass);
  // truncated projections are contractions
  std::vector<double> window;
  for (int m = -20; m <= 20; ++m) window.push_back(m);
  const auto rep = psd_check(kernel_grid(KernelSpec::discrete_sine(pi / 3), window));
  CHECK(rep.pass);
  CHECK(rep.contraction_checked);
  CHECK(rep.max_eigenvalue <= 1.0 + 1e-10);
}

TEST_CASE("normality witness") {
  for (int n : {2, 5}) {
    const auto r = normality_witness(n);
    CHECK(std::abs(r.norm_ratio - (n - 1)) < 1e-6);
    CHECK(r.pointwise_ratio_bound <= 1.0 + 1e-12);
  }
  // e_2(0) = 0 = e_0(0) * 0
  CHECK(std::sin(pi * 0.0) / (0.0 - 2.0) == 0.0);
  CHECK_THROWS_AS(normality_witness(1), DomainError);
  const auto par = normality_witness(3), ser = normality_witness_serial(3);
  CHECK(par.norm_ratio == ser.norm_ratio);
  CHECK(par.pointwise_ratio_bound == ser.pointwise_ratio_bound);
}

TEST_CASE("family names") {
  CHECK(parse_family("discrete-sine") == KernelFamily::discrete_sine);
  CHECK(parse_family("continuous_sine") == KernelFamily::continuous_sine);
  CHECK(to_string(KernelFamily::bessel) == "bessel");
  CHECK_THROWS_AS(parse_family("airy"), DomainError);
}
