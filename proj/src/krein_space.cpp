#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "dbk/krein.hpp"
#include "krein_detail.hpp"

namespace dbk::krein {

namespace {

void require_measure(const std::vector<double>& points, const std::vector<double>& weights) {
  if (points.size() != weights.size()) throw DomainError("space: points and weights differ in length");
  for (double t : points) require_finite(t, "space");
  for (double w : weights)
    if (!std::isfinite(w) || !(w > 0.0)) throw DomainError("space: weights must be positive");
  auto sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("space: points must be distinct");
}

double point_scale(const std::vector<double>& points) {
  double s = 1.0;
  for (double t : points) s = std::max(s, std::abs(t));
  return s;
}

}  // namespace

Eigen::MatrixXd FiniteRankSpace::weighted_basis() const {
  Eigen::MatrixXd y = basis.transpose();
  for (int i = 0; i < size(); ++i) y.row(i) *= std::sqrt(weights[i]);
  return y;
}

Eigen::VectorXcd FiniteRankSpace::values(const Eigen::VectorXcd& coords) const {
  return basis.transpose().cast<Complex>() * coords;
}

Eigen::VectorXcd FiniteRankSpace::project(const Eigen::VectorXcd& vals) const {
  Eigen::VectorXcd weighted = vals;
  for (int i = 0; i < size(); ++i) weighted[i] *= weights[i];
  return basis.cast<Complex>() * weighted;
}

Eigen::MatrixXd FiniteRankSpace::kernel() const { return basis.transpose() * basis; }

int FiniteRankSpace::index_of(double t) const {
  for (int i = 0; i < size(); ++i)
    if (points[i] == t) return i;
  throw DomainError("space: point not in U");
}

FiniteRankSpace make_polynomial_space(std::vector<double> points, std::vector<double> weights, int n) {
  require_measure(points, weights);
  const int m = static_cast<int>(points.size());
  if (n < 2) throw DomainError("make_polynomial_space: n must be >= 2");
  if (m < n + 1) throw DomainError("make_polynomial_space: need at least n + 1 points");

  // Krylov vectors in weighted coordinates: q_k = t q_{k-1}, orthogonalized twice
  Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(points.data(), m);
  Eigen::MatrixXd q(m, n);
  for (int i = 0; i < m; ++i) q(i, 0) = std::sqrt(weights[i]);
  q.col(0).normalize();
  const double tscale = point_scale(points);
  for (int k = 1; k < n; ++k) {
    Eigen::VectorXd v = t.cwiseProduct(q.col(k - 1));
    for (int pass = 0; pass < 2; ++pass) v -= q.leftCols(k) * (q.leftCols(k).transpose() * v);
    const double norm = v.norm();
    if (norm <= 1e-12 * tscale) throw DomainError("make_polynomial_space: degenerate measure");
    q.col(k) = v / norm;
  }

  FiniteRankSpace s;
  s.basis = q.transpose();
  for (int i = 0; i < m; ++i) s.basis.col(i) /= std::sqrt(weights[i]);
  s.points = std::move(points);
  s.weights = std::move(weights);
  return s;
}

FiniteRankSpace make_explicit_space(std::vector<double> points, std::vector<double> weights,
                                    const Eigen::MatrixXd& rows) {
  require_measure(points, weights);
  const int m = static_cast<int>(points.size());
  if (rows.cols() != m) throw DomainError("make_explicit_space: basis rows must have one value per point");
  const int n = static_cast<int>(rows.rows());
  if (n < 1) throw DomainError("make_explicit_space: empty basis");

  Eigen::MatrixXd q = rows.transpose();
  for (int i = 0; i < m; ++i) q.row(i) *= std::sqrt(weights[i]);
  const double scale = q.norm();
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd v = q.col(k);
    for (int pass = 0; pass < 2; ++pass) v -= q.leftCols(k) * (q.leftCols(k).transpose() * v);
    const double norm = v.norm();
    if (norm <= 1e-12 * scale) throw DomainError("make_explicit_space: basis rows are linearly dependent");
    q.col(k) = v / norm;
  }
  FiniteRankSpace s;
  s.basis = q.transpose();
  for (int i = 0; i < m; ++i) s.basis.col(i) /= std::sqrt(weights[i]);
  s.points = std::move(points);
  s.weights = std::move(weights);
  return s;
}

SpaceValidation validate_space(const FiniteRankSpace& space) {
  SpaceValidation v;
  const Eigen::MatrixXd y = space.weighted_basis();
  const int n = space.dim();
  const int m = space.size();
  v.gram_error = (y.transpose() * y - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();

  v.nondegenerate = true;
  v.min_indicator_residual = 1.0;
  for (int i = 0; i < m; ++i) {
    // y.row(i) is the projection of the unit indicator of point i
    const double captured = y.row(i).norm();
    if (!(captured > 1e-12)) v.nondegenerate = false;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[i] = 1.0;
    const double residual = (e - y * y.row(i).transpose()).norm();
    v.min_indicator_residual = std::min(v.min_indicator_residual, residual);
  }
  v.pass = v.gram_error <= 1e-12 && v.nondegenerate && v.min_indicator_residual > 1e-10;
  return v;
}

// ---------------------------------------------------------------------------

DivisionResult division_check(const FiniteRankSpace& space, const Eigen::VectorXcd& f, int k) {
  const int m = space.size();
  const int n = space.dim();
  if (f.size() != n) throw DomainError("division_check: coordinate length mismatch");
  if (k < 0 || k >= m) throw DomainError("division_check: point index out of range");
  const Eigen::VectorXcd fv = space.values(f);
  const double fnorm = f.norm();
  if (std::abs(fv[k]) > 1e-10 * std::max(fnorm, 1e-300))
    throw DomainError("division_check: f does not vanish at the division point");

  const double tk = space.points[k];
  Eigen::MatrixXd design(m, n);
  Eigen::VectorXcd rhs(m);
  for (int i = 0; i < m; ++i) {
    const double sw = std::sqrt(space.weights[i]);
    design.row(i) = sw * (space.points[i] - tk) * space.basis.col(i).transpose();
    rhs[i] = sw * fv[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();

  DivisionResult r;
  r.unique = sv.size() > 0 && sv[sv.size() - 1] > 1e-10 * sv[0];
  const Eigen::VectorXd g_re = svd.solve(rhs.real());
  const Eigen::VectorXd g_im = svd.solve(rhs.imag());
  r.g = g_re.cast<Complex>() + kI * g_im.cast<Complex>();
  r.residual = (design.cast<Complex>() * r.g - rhs).norm();
  r.pass = r.unique && r.residual <= 1e-10 * fnorm;
  return r;
}

DivisionSweep division_property_check(const FiniteRankSpace& space) {
  DivisionSweep sweep;
  const int n = space.dim();
  for (int k = 0; k < space.size(); ++k) {
    // coordinates c with <c, basis(:,k)> = 0 span {f : f(t_k) = 0}
    Eigen::MatrixXd row = space.basis.col(k).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(row, Eigen::ComputeFullV);
    for (int c = 1; c < n; ++c) {
      const Eigen::VectorXcd f = svd.matrixV().col(c).cast<Complex>();
      const DivisionResult r = division_check(space, f, k);
      if (r.residual > sweep.worst_residual) {
        sweep.worst_residual = r.residual;
        sweep.worst_point = k;
      }
      if (!r.pass) {
        sweep.pass = false;
        sweep.worst_point = k;
      }
    }
  }
  return sweep;
}

// ---------------------------------------------------------------------------

MultiplicationOperator mult_domain(const FiniteRankSpace& space) {
  const int n = space.dim();
  const Eigen::MatrixXd y = space.weighted_basis();
  const auto split = detail::split_domain<double>(y, space.points, point_scale(space.points));

  MultiplicationOperator op;
  op.outside_singular_values = split.singular_values;
  op.compression = split.compression;
  op.complement = split.complement;
  op.domain_basis = split.domain;
  op.action = op.compression * op.domain_basis;
  const Eigen::MatrixXd gram = op.action.transpose() * op.domain_basis;
  op.symmetry_error = op.dim_domain() > 0 ? (gram - gram.transpose()).cwiseAbs().maxCoeff() : 0.0;

  if (n - op.dim_domain() > 1) {
    throw StructuralError("mult_domain", "dim D-perp = " + std::to_string(n - op.dim_domain()) +
                                             " exceeds 1 (division property fails)");
  }
  return op;
}

DeficiencyVector deficiency_subspace(const FiniteRankSpace& space, const MultiplicationOperator& op,
                                     Complex w) {
  require_finite(w, "deficiency_subspace");
  if (w.imag() == 0.0) throw DomainError("deficiency_subspace: w must be nonreal");
  const double scale = point_scale(space.points) + std::abs(w);

  DeficiencyVector out;
  out.w = w;
  // xi is orthogonal to (T - w) N c for all c  <=>  N^T (T - conj w) xi = 0
  out.xi = detail::deficiency_vector<double>(op.compression, op.domain_basis, w, scale, out.dim_w,
                                             out.dim_wbar);
  if (out.dim_w != 1 || out.dim_wbar != 1) {
    throw StructuralError("deficiency", "deficiency indices (" + std::to_string(out.dim_w) + ", " +
                                            std::to_string(out.dim_wbar) + "), expected (1, 1)");
  }
  const Eigen::VectorXcd vals = space.values(out.xi);
  const double vmax = vals.cwiseAbs().maxCoeff();
  out.min_value_ratio = vals.cwiseAbs().minCoeff() / vmax;
  if (!(out.min_value_ratio > 1e-10))
    throw StructuralError("deficiency", "xi vanishes at a point of U");
  return out;
}

Eigen::MatrixXd selfadjoint_extension(const MultiplicationOperator& op, double theta) {
  require_finite(theta, "selfadjoint_extension");
  if (op.complement.cols() != 1)
    throw StructuralError("extension", "requires dim D = n - 1");
  const int n = static_cast<int>(op.compression.rows());
  const Eigen::MatrixXd ext =
      detail::extension_matrix<double>(op.compression, op.domain_basis, op.complement, theta);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ext, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 1; i < n; ++i) {
    if (ev[i] - ev[i - 1] < 1e-10 * scale)
      throw DomainError("selfadjoint_extension: repeated eigenvalue; perturb theta");
  }
  return ext;
}

SpectralMeasure spectral_measure(const Eigen::MatrixXd& extension, const Eigen::VectorXcd& xi) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(extension);
  if (es.info() != Eigen::Success) throw ConvergenceError("spectral_measure: eigensolver failed");
  SpectralMeasure sm;
  sm.atoms = es.eigenvalues();
  sm.eigvecs = es.eigenvectors();
  sm.overlaps = sm.eigvecs.transpose().cast<Complex>() * xi;
  sm.masses = sm.overlaps.cwiseAbs2();
  return sm;
}

}  // namespace dbk::krein
