#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "dbk/krein.hpp"
#include "dbk/rng.hpp"
#include "dbk/suite.hpp"
#include "doctest.h"

using namespace dbk;
using namespace dbk::krein;

namespace {

FiniteRankSpace three_point() { return make_polynomial_space({-1, 0, 1}, {1, 1, 1}, 2); }

KreinModel model_of(const FiniteRankSpace& sp, double theta = 0.0, Complex w = kI) {
  auto op = mult_domain(sp);
  auto xi = deficiency_subspace(sp, op, w);
  return KreinModel(sp, op, xi, theta);
}

Eigen::VectorXcd random_coords(int n, CounterRng& rng) {
  Eigen::VectorXcd f(n);
  for (int k = 0; k < n; ++k) f[k] = Complex{2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
  return f;
}

// [xi, (A - lambda) D] applied to (c, g) gives c xi + (t - lambda) g.
Eigen::MatrixXcd defining_system(const KreinModel& m, Complex lambda) {
  const auto& op = m.op();
  const int n = m.space().dim();
  Eigen::MatrixXcd M(n, n);
  M.col(0) = m.deficiency().xi;
  M.rightCols(n - 1) = op.action.cast<Complex>() - lambda * op.domain_basis.cast<Complex>();
  return M;
}

}  // namespace

TEST_CASE("polynomial space: hand example and orthonormality") {
  const auto sp = three_point();
  // rows are +-1/sqrt3 and +-t/sqrt2
  CHECK(std::abs(std::abs(sp.basis(0, 0)) - 1 / std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(sp.basis(0, 0) - sp.basis(0, 2)) < 1e-15);
  CHECK(std::abs(std::abs(sp.basis(1, 2)) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(sp.basis(1, 1)) < 1e-15);

  const auto sp4 = make_polynomial_space({0, 1, 2, 3}, {1, 1, 1, 1}, 3);
  const Eigen::MatrixXd W = sp4.weighted_basis();
  CHECK((W.transpose() * W - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  const auto v = validate_space(sp4);
  CHECK(v.pass);
  CHECK(v.nondegenerate);
  CHECK(v.min_indicator_residual > 1e-10);

  const auto sym = make_polynomial_space({-2, -1, 0, 1, 2}, {1, 2, 3, 2, 1}, 2);
  CHECK(std::abs(sym.basis(1, 2)) < 1e-15);

  CHECK_THROWS_AS(make_polynomial_space({0, 1, 1}, {1, 1, 1}, 2), DomainError);
  CHECK_THROWS_AS(make_polynomial_space({0, 1}, {1, 1}, 2), DomainError);
  CHECK_THROWS_AS(make_polynomial_space({0, 1, 2}, {1, -1, 1}, 2), DomainError);
}

TEST_CASE("division_check") {
  const auto sp = make_polynomial_space({-1, 0, 1, 2}, {1, 1, 1, 1}, 3);
  Eigen::VectorXcd vals(4);
  for (int i = 0; i < 4; ++i) {
    const double t = sp.points[i];
    vals[i] = t * (t - 1);
  }
  const Eigen::VectorXcd f = sp.project(vals);
  const auto at0 = division_check(sp, f, 1);  // t_1 = 0
  CHECK(at0.pass);
  CHECK(at0.unique);
  CHECK(at0.residual <= 1e-12);
  const Eigen::VectorXcd g0 = sp.values(at0.g);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(g0[i] - (sp.points[i] - 1)) < 1e-12);
  const auto at1 = division_check(sp, f, 2);  // t_2 = 1
  CHECK(at1.pass);
  const Eigen::VectorXcd g1 = sp.values(at1.g);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(g1[i] - sp.points[i]) < 1e-12);
  CHECK(division_property_check(sp).pass);

  // span{1, t^2} lacks t + 1
  Eigen::MatrixXd rows(2, 4);
  rows << 1, 1, 1, 1, 1, 0, 1, 4;
  const auto nd = make_explicit_space({-1, 0, 1, 2}, {1, 1, 1, 1}, rows);
  Eigen::VectorXcd q(4);
  for (int i = 0; i < 4; ++i) q[i] = nd.points[i] * nd.points[i] - 1.0;
  const auto r = division_check(nd, nd.project(q), 2);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(division_property_check(nd).pass);
}

TEST_CASE("mult_domain and the extension on the three-point space") {
  const auto sp = three_point();
  const auto op = mult_domain(sp);
  CHECK(op.dim_domain() == 1);
  CHECK(op.symmetry_error < 1e-12);
  // A (1/sqrt3) = t/sqrt3 = sqrt(2/3) p1
  CHECK(std::abs(op.action.norm() - std::sqrt(2.0 / 3.0)) < 1e-14);
  for (double theta : {0.0, 1.0, -0.7}) {
    const Eigen::MatrixXd X = selfadjoint_extension(op, theta);
    // extension is [[0, sqrt(2/3)], [sqrt(2/3), theta]] up to basis signs
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
    const double disc = std::sqrt(theta * theta + 8.0 / 3.0);
    CHECK(es.eigenvalues()[0] == doctest::Approx((theta - disc) / 2).epsilon(1e-14));
    CHECK(es.eigenvalues()[1] == doctest::Approx((theta + disc) / 2).epsilon(1e-14));
  }
}

TEST_CASE("mult_domain: dim D is n - 1 for polynomial spaces; {t, t^3} is rejected") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sh = random_suite_shape(seed);
    const auto sp = random_polynomial_space(sh.m, sh.n, seed);
    CHECK(mult_domain(sp).dim_domain() == sh.n - 1);
  }
  Eigen::MatrixXd rows(2, 5);
  for (int i = 0; i < 5; ++i) {
    rows(0, i) = i + 1.0;
    rows(1, i) = std::pow(i + 1.0, 3);
  }
  const auto odd = make_explicit_space({1, 2, 3, 4, 5}, {1, 1, 1, 1, 1}, rows);
  CHECK_THROWS_AS(mult_domain(odd), StructuralError);
}

TEST_CASE("deficiency vector: hand example") {
  const auto sp = three_point();
  const auto op = mult_domain(sp);
  for (double s : {1.0, -1.0}) {
    const auto xi = deficiency_subspace(sp, op, Complex{0.0, s});
    CHECK(xi.dim_w == 1);
    CHECK(xi.dim_wbar == 1);
    CHECK(std::abs(xi.xi.norm() - 1.0) < 1e-14);
    const Eigen::VectorXcd v = sp.values(xi.xi);
    // xi proportional to 2 - 3 i s t
    const Complex ratio = v[0] / Complex{2.0, 3.0 * s};
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(v[i] - ratio * Complex{2.0, -3.0 * s * sp.points[i]}) < 1e-14);
    CHECK(xi.min_value_ratio > 1e-10);
  }
  CHECK_THROWS_AS(deficiency_subspace(sp, op, Complex{1.0, 0.0}), DomainError);
}

TEST_CASE("spectral measure: unit mass, simple atoms, interlacing extensions") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sh = random_suite_shape(seed);
    const auto sp = random_polynomial_space(sh.m, sh.n, seed);
    const auto op = mult_domain(sp);
    const auto xi = deficiency_subspace(sp, op);
    const auto m0 = spectral_measure(selfadjoint_extension(op, 0.0), xi.xi);
    const auto m1 = spectral_measure(selfadjoint_extension(op, 1.0), xi.xi);
    CHECK(std::abs(m0.masses.sum() - 1.0) < 1e-12);
    for (int j = 0; j + 1 < m0.atoms.size(); ++j) {
      CHECK(m0.atoms[j] < m1.atoms[j]);
      CHECK(m1.atoms[j] < m0.atoms[j + 1]);
    }
    CHECK(m0.atoms[m0.atoms.size() - 1] < m1.atoms[m1.atoms.size() - 1]);
  }
}

TEST_CASE("transform: definitional solve, xi maps to 1, f/xi on U") {
  CounterRng rng(3, 0);
  for (std::uint64_t seed : {2ULL, 5ULL, 9ULL}) {
    const auto sh = random_suite_shape(seed);
    const auto sp = random_polynomial_space(sh.m, sh.n, seed);
    const auto model = model_of(sp, 0.4);
    const int n = sp.dim();
    const Eigen::VectorXcd xi_vals = sp.values(model.deficiency().xi);
    for (int trial = 0; trial < 4; ++trial) {
      const Eigen::VectorXcd f = random_coords(n, rng);
      const Eigen::VectorXcd fv = sp.values(f);
      for (Complex lambda : {Complex{0.3, 0.8}, Complex{-1.2, -0.4}, Complex{sp.points[1] + 0.01, 0.0}}) {
        const Eigen::VectorXcd sol = defining_system(model, lambda).fullPivLu().solve(f);
        CHECK(std::abs(model.transform(f, lambda) - sol[0]) <= 1e-10 * std::max(1.0, std::abs(sol[0])));
      }
      for (int i = 0; i < sp.size(); ++i) {
        const Complex expect = fv[i] / xi_vals[i];
        CHECK(std::abs(model.transform(f, sp.points[i]) - expect) <= 1e-9 * std::max(1.0, std::abs(expect)));
      }
    }
    for (Complex lambda : {Complex{0.1, 0.2}, Complex{2.0, -1.0}})
      CHECK(std::abs(model.transform(model.deficiency().xi, lambda) - 1.0) < 1e-12);
  }
}

TEST_CASE("zeros of Psi: count, non-real, singular defining system") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto sh = random_suite_shape(seed);
    const auto sp = random_polynomial_space(sh.m, sh.n, seed);
    const auto model = model_of(sp);
    const auto S = find_S(model);
    int count = 0;
    for (const auto& z : S) {
      count += z.multiplicity;
      CHECK(std::abs(z.z.imag()) > 1e-8);
      CHECK(std::abs(model.psi(z.z)) < 1e-9);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(defining_system(model, z.z));
      const auto& sv = svd.singularValues();
      CHECK(sv[sv.size() - 1] <= 1e-9 * sv[0]);
      // f_xi for f not proportional to xi blows up at a zero of Psi
      const Eigen::VectorXcd f = Eigen::VectorXcd::Unit(sh.n, 0);
      const double scale = std::abs(z.z.imag());
      double at_pole = 1e300;
      try {
        at_pole = std::abs(model.transform(f, z.z));
      } catch (const PoleError&) {
      }
      CHECK(at_pole > 1e4 * std::abs(model.transform(f, z.z + Complex{0.0, 0.5 * scale})));
    }
    CHECK(count == sh.n - 1);
    Eigen::JacobiSVD<Eigen::MatrixXcd> away(defining_system(model, Complex{0.123, 0.456}));
    CHECK(away.singularValues()[sh.n - 1] > 1e-6 * away.singularValues()[0]);
  }
}

TEST_CASE("Parseval over random pairs") {
  CounterRng rng(11, 0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sh = random_suite_shape(seed);
    const auto sp = random_polynomial_space(sh.m, sh.n, seed);
    const auto model = model_of(sp);
    for (int k = 0; k < 10; ++k) {
      const Eigen::VectorXcd f = random_coords(sh.n, rng), g = random_coords(sh.n, rng);
      CHECK(parseval_check(model, f, g) <= 1e-10 * f.norm() * g.norm());
    }
  }
}

TEST_CASE("Christoffel-Darboux form of the space kernel") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto sh = random_suite_shape(seed);
    const auto big = random_polynomial_space(sh.m, sh.n, seed);
    const auto next = make_polynomial_space(big.points, big.weights, sh.n + 1 <= sh.m - 1 ? sh.n + 1 : sh.n);
    if (next.dim() == big.dim()) continue;
    const int n = big.dim();
    const Eigen::MatrixXd K = big.kernel();
    const Eigen::VectorXd pn = next.basis.row(n).transpose();
    const Eigen::VectorXd pm = next.basis.row(n - 1).transpose();
    // a_n = <t p_{n-1}, p_n>
    double a = 0.0;
    for (int i = 0; i < big.size(); ++i) a += big.weights[i] * big.points[i] * pm[i] * pn[i];
    for (int i = 0; i < big.size(); ++i)
      for (int j = 0; j < big.size(); ++j) {
        if (i == j) continue;
        const double cd = a * (pn[i] * pm[j] - pm[i] * pn[j]) / (big.points[i] - big.points[j]);
        CHECK(std::abs(K(i, j) - cd) <= 1e-10 * std::sqrt(K(i, i) * K(j, j)));
      }
  }
}

TEST_CASE("pipeline: three-point example end to end") {
  const auto rep = run_pipeline(three_point());
  REQUIRE(rep.pass);
  CHECK(rep.artifacts.dim_domain == 1);
  CHECK(rep.artifacts.S.size() == 1);
  CHECK(std::abs(std::abs(rep.artifacts.symmetrized->omega) - 1.0) < 1e-14);
  CHECK(rep.artifacts.factorization_residual <= 1e-12);
  CHECK(rep.artifacts.assembled->hb.pass);
  for (double v : rep.artifacts.assembled->phi_values) CHECK(v != 0.0);
  CHECK(rep.stages.size() == 12);
}

TEST_CASE("pipeline: non-division space stops at division") {
  Eigen::MatrixXd rows(2, 4);
  rows << 1, 1, 1, 1, 1, 0, 1, 4;
  const auto rep = run_pipeline(make_explicit_space({-1, 0, 1, 2}, {1, 1, 1, 1}, rows));
  CHECK_FALSE(rep.pass);
  CHECK(rep.first_failure == "division");
}

TEST_CASE("pipeline: random spaces, phi formula, gauge between extensions") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto sh = random_suite_shape(seed);
    const auto sp = random_polynomial_space(sh.m, sh.n, seed);
    const auto r0 = run_pipeline(sp);
    PipelineOptions o;
    o.theta = 1.0;
    const auto r1 = run_pipeline(sp, o);
    REQUIRE(r0.pass);
    REQUIRE(r1.pass);
    CHECK(r0.artifacts.factorization_residual <= 1e-9);
    // Phi = xi / (R Omega) up to the removed constant phase
    const auto& a = r0.artifacts;
    const Complex phase = std::exp(Complex{0.0, a.assembled->phi_phase});
    for (int i = 0; i < sp.size(); ++i) {
      const Complex direct = a.xi_values[i] / ((*a.R)(sp.points[i]) * a.symmetrized->omega);
      const Complex ours = a.assembled->phi_values[i] * phase;
      CHECK(std::abs(direct - ours) <= 1e-8 * std::abs(direct));
    }
    const auto g = gauge_check(r0.artifacts.assembled->E, r1.artifacts.assembled->E, sp.points);
    CHECK(g.zero_free);
    CHECK(g.constancy_residual <= 1e-8);
  }
}

TEST_CASE("discrete sine space: closed form, quadrature and f_xi xi = P_H a") {
  const double b = std::numbers::pi / 3;
  const Complex w = kI;
  const FiniteSequence f{-2, {Complex{1, 0}, Complex{0.5, -0.25}, Complex{-0.3, 0.0}, Complex{0.0, 2.0}}};
  for (Complex lambda : {Complex{0.3, 0.0}, Complex{-4.7, 0.0}, Complex{1.5, 0.5}, Complex{10.2, -0.1}}) {
    const auto t = discrete_sine_fxi(b, w, f, lambda);
    CHECK(std::abs(t.fxi - t.fxi_closed) <= 1e-8 * std::abs(t.fxi_closed));
  }
  for (long m = -6; m <= 6; ++m) {
    const auto t = discrete_sine_fxi(b, w, f, static_cast<double>(m));
    const Complex lhs = t.fxi_closed * discrete_sine_xi(b, w, m);
    const Complex rhs = discrete_sine_project(b, f, m);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1e-3, std::abs(rhs)));
  }
  CHECK_THROWS_AS(discrete_sine_fxi(2.0, w, f, 0.5), DomainError);
  CHECK_THROWS_AS(discrete_sine_fxi(b, Complex{1.0, 0.0}, f, 0.5), DomainError);
}
