#include <Eigen/QR>
#include <cmath>
#include <numbers>

#include "dbk/dpp.hpp"
#include "dbk/rng.hpp"
#include "doctest.h"

using namespace dbk;
using namespace dbk::dpp;
constexpr double pi = std::numbers::pi;

namespace {

KernelMatrix matrix(const Eigen::MatrixXd& M) {
  KernelMatrix K;
  for (int i = 0; i < M.rows(); ++i) K.points.push_back(i);
  K.entries = M;
  return K;
}

KernelMatrix rank_one_third() { return matrix(Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0)); }

// random orthogonal projection of rank r on n points
KernelMatrix projection(int n, int r, std::uint64_t seed) {
  CounterRng rng(seed, 99);
  Eigen::MatrixXd G(n, r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) G(i, j) = rng.uniform() - 0.5;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
  return matrix(Q * Q.transpose());
}

}  // namespace

TEST_CASE("rng: counter streams") {
  CounterRng a(5, 0), b(5, 0), c(5, 1), d(6, 0);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs_c |= x != c.next();
    differs_d |= x != d.next();
  }
  CHECK(differs_c);
  CHECK(differs_d);
  CounterRng u(1, 2);
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    CHECK_FALSE((v < 0.0 || v >= 1.0));
    mean += v;
  }
  CHECK(std::abs(mean / 100000 - 0.5) < 4 * std::sqrt(1.0 / 12 / 100000));
}

TEST_CASE("truncate: discrete sine windows") {
  const auto k0 = truncate(KernelSpec::discrete_sine(pi / 3), Window::integers(0));
  REQUIRE(k0.size() == 1);
  CHECK(k0.K.entries(0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  const auto k20 = truncate(KernelSpec::discrete_sine(pi / 3), Window::integers(20));
  CHECK(k20.eigenvalues.minCoeff() >= 0.0);
  CHECK(k20.eigenvalues.maxCoeff() <= 1.0);
  const auto k200 = truncate(KernelSpec::discrete_sine(1.2), Window::integers(200));
  CHECK(k200.trace() == doctest::Approx(401 * 1.2 / pi).epsilon(1e-13));
  CHECK_THROWS_AS(Window::integers(-1), DomainError);
  CHECK_THROWS_AS(Window::grid({}), DomainError);
}

TEST_CASE("prepare: contraction repair and rejection") {
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2, 2);
  M(0, 0) = 1.0 + 5e-11;
  const auto k = prepare(matrix(M));
  CHECK(k.eigenvalues.maxCoeff() == 1.0);
  CHECK(k.clamp_shift == doctest::Approx(5e-11).epsilon(1e-3));
  CHECK_THROWS_AS(prepare(matrix((Eigen::MatrixXd(2, 2) << 1, 2, 2, 1).finished())), DomainError);
  M(0, 0) = 1.0 + 1e-8;
  CHECK_THROWS_AS(prepare(matrix(M)), DomainError);
}

TEST_CASE("dpp_sample: trivial kernels and determinism") {
  const auto zero = prepare(matrix(Eigen::MatrixXd::Zero(4, 4)));
  const auto ident = prepare(matrix(Eigen::MatrixXd::Identity(5, 5)));
  for (std::uint64_t t = 0; t < 50; ++t) {
    CHECK(dpp_sample(zero, 1, t).points.empty());
    CHECK(dpp_sample(ident, 1, t).points.size() == 5);
  }
  const auto k = truncate(KernelSpec::discrete_sine(1.0), Window::integers(10));
  const auto a = dpp_sample(k, 42, 7), b = dpp_sample(k, 42, 7);
  CHECK(a.points == b.points);
  CHECK(std::is_sorted(a.points.begin(), a.points.end()));
  CHECK(dpp_sample(rank_one_third(), 3).points.size() == 1);
}

TEST_CASE("dpp_sample: rank-one law is uniform over three points") {
  const auto k = prepare(rank_one_third());
  const long T = 30000;
  const auto samples = sample_trials(k, T, 5);
  long count[3] = {0, 0, 0};
  for (const auto& s : samples) {
    REQUIRE(s.indices.size() == 1);
    ++count[s.indices[0]];
  }
  const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / T);
  for (long c : count) CHECK(std::abs(static_cast<double>(c) / T - 1.0 / 3) < 4 * se);
}

TEST_CASE("cardinality: projections give rank points, general K gives trace on average") {
  const auto P = prepare(projection(10, 4, 1));
  for (const auto& s : sample_trials(P, 2000, 3)) CHECK(s.points.size() == 4);

  const auto k = truncate(KernelSpec::discrete_sine(1.0), Window::integers(10));
  const auto st = sample_size_statistic(sample_trials(k, 10000, 9));
  CHECK(std::abs(st.mean - k.trace()) <= 3 * st.std_error);
}

TEST_CASE("expectation_product: closed forms") {
  const auto K = rank_one_third();
  CHECK(expectation_product(K, TestFunction::one()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(expectation_product(K, TestFunction::at_points({0.0}, 1.7)) == doctest::Approx(1.0 + 0.7 / 3).epsilon(1e-14));
  const auto P = projection(8, 3, 2);
  CHECK(std::abs(expectation_product(P, TestFunction::interval(-1, 100, 0.0))) < 1e-14);
  TestFunction bad = TestFunction::one();
  bad.bumps.push_back({{}, std::make_pair(2.0, 1.0), 1.5});
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(TestFunction::interval(0, 1, -1.0), DomainError);
}

TEST_CASE("mc_estimate: identity g, rank-one check, minimum trials") {
  const auto k = prepare(rank_one_third());
  const auto one = mc_estimate(k, TestFunction::one(), 1000, 1);
  CHECK(one.mean == 1.0);
  CHECK(one.std_error == 0.0);
  const auto g = TestFunction::at_points({0.0}, 1.5);
  const auto e = mc_estimate(k, g, 20000, 2);
  CHECK(std::abs(e.mean - (1.0 + 0.5 / 3)) <= 3 * e.std_error);
  CHECK_THROWS_AS(mc_estimate(k, g, 999, 1), DomainError);
}

TEST_CASE("mc_estimate: discrete sine determinant identity") {
  const auto k = truncate(KernelSpec::discrete_sine(pi / 3), Window::integers(20));
  const auto g = TestFunction::interval(-5, 5, 1.5);
  const auto e = mc_estimate(k, g, 20000, 17);
  CHECK(std::abs(e.mean - expectation_product(k.K, g)) <= 3 * e.std_error);
}

TEST_CASE("parallel sampling equals the serial reference") {
  const auto k = truncate(KernelSpec::discrete_sine(1.3), Window::integers(12));
  const auto par = sample_trials(k, 3000, 21);
  const auto ser = sample_trials_serial(k, 3000, 21);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i].points == ser[i].points);
  const auto g = TestFunction::interval(-2, 2, 0.6);
  const auto a = mc_estimate(k, g, 3000, 21), b = mc_estimate_serial(k, g, 3000, 21);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("empirical_intensity") {
  const auto w = Window::integers(2);
  const auto ident = prepare(matrix(Eigen::MatrixXd::Identity(5, 5)));
  // identity kernel on points 0..4 does not live on -2..2, so rebuild on the window
  KernelMatrix I = matrix(Eigen::MatrixXd::Identity(5, 5));
  I.points = w.points;
  const auto full = empirical_intensity(sample_trials(prepare(I), 1000, 1), w);
  for (double p : full.frequency) CHECK(p == 1.0);
  I.entries.setZero();
  const auto none = empirical_intensity(sample_trials(prepare(I), 1000, 1), w);
  for (double p : none.frequency) CHECK(p == 0.0);
  CHECK_THROWS_AS(empirical_intensity(sample_trials(ident, 10, 1), w), DomainError);
  CHECK_THROWS_AS(empirical_intensity(sample_trials(ident, 1000, 1), Window::integers(1)), DomainError);

  const auto k = truncate(KernelSpec::discrete_sine(pi / 3), Window::integers(20));
  const auto rep = empirical_intensity(sample_trials(k, 20000, 4), Window::integers(20));
  for (std::size_t i = 0; i < rep.points.size(); ++i)
    CHECK(std::abs(rep.frequency[i] - 1.0 / 3) <= 4 * rep.std_error[i]);
}
