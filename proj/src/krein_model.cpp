#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "dbk/krein.hpp"
#include "krein_detail.hpp"

namespace dbk::krein {

namespace {

// (A(x) conj B(y) - B(x) conj A(y)) / (x - y) on the reals, with the
// derivative form on the diagonal.
Complex integrable_form(const Polynomial& A, const Polynomial& B, const Polynomial& dA,
                        const Polynomial& dB, double x, double y) {
  if (x == y) return dA(x) * std::conj(B(y)) - dB(x) * std::conj(A(y));
  return (A(x) * std::conj(B(y)) - B(x) * std::conj(A(y))) / (x - y);
}

double spread_scale(const std::vector<double>& v) {
  double s = 1.0;
  for (double t : v) s = std::max(s, std::abs(t));
  return s;
}

}  // namespace

KreinModel::KreinModel(const FiniteRankSpace& space, MultiplicationOperator op, DeficiencyVector xi,
                       double theta)
    : space_(space), op_(std::move(op)), xi_(std::move(xi)), theta_(theta) {
  using detail::Mat;
  using detail::Vec;
  extension_ = selfadjoint_extension(op_, theta_);  // validates theta (simple spectrum)
  const int n = space_.dim();
  const double pscale = spread_scale(space_.points);

  const Mat<Real> y = detail::orthonormal_weighted_basis<Real>(space_.basis, space_.weights, &coord_map_);
  const auto split = detail::split_domain<Real>(y, space_.points, pscale);
  if (split.domain.cols() != n - 1) throw StructuralError("extension", "requires dim D = n - 1");
  int dim_w = 0, dim_wbar = 0;
  Vec<Cplx> xi_ext = detail::deficiency_vector<Real>(split.compression, split.domain, xi_.w,
                                                     pscale + std::abs(xi_.w), dim_w, dim_wbar);
  if (dim_w != 1 || dim_wbar != 1) throw StructuralError("deficiency", "extended-precision indices differ");
  // align the phase with the double xi
  const Vec<Cplx> xi_ref = coord_map_.cast<Cplx>() * xi_.xi.cast<Cplx>();
  const Cplx align = xi_ext.dot(xi_ref);
  xi_ext *= align / std::abs(align);

  const Mat<Real> ext = detail::extension_matrix<Real>(split.compression, split.domain, split.complement, theta_);
  Eigen::SelfAdjointEigenSolver<Mat<Real>> es(ext);
  if (es.info() != Eigen::Success) throw ConvergenceError("KreinModel: eigensolver failed");
  eigvecs_ext_ = es.eigenvectors();
  w_ext_ = Cplx(xi_.w.real(), xi_.w.imag());
  const Vec<Cplx> c = eigvecs_ext_.transpose().cast<Cplx>() * xi_ext;

  measure_.atoms.resize(n);
  measure_.masses.resize(n);
  measure_.overlaps.resize(n);
  // eigenvectors back in the caller's coordinates
  const Mat<Real> back = coord_map_.template triangularView<Eigen::Upper>().solve(eigvecs_ext_);
  measure_.eigvecs = back.cast<double>();
  Cplx sum{0, 0};
  for (int j = 0; j < n; ++j) {
    atoms_ext_.push_back(es.eigenvalues()[j]);
    overlaps_ext_.push_back(c[j]);
    masses_ext_.push_back(std::norm(c[j]));
    measure_.atoms[j] = static_cast<double>(atoms_ext_[j]);
    measure_.overlaps[j] = Complex(static_cast<double>(c[j].real()), static_cast<double>(c[j].imag()));
    measure_.masses[j] = static_cast<double>(masses_ext_[j]);
    sum += masses_ext_[j] * (atoms_ext_[j] - w_ext_);
  }
  const Real sign = (n - 1) % 2 == 0 ? 1 : -1;
  lead_ext_ = sign * sum;
  lead_ = Complex(static_cast<double>(lead_ext_.real()), static_cast<double>(lead_ext_.imag()));

  // map fitted to the data hull: atoms may sit far outside U (theta is free),
  // and the polynomials grow steeply there
  const auto [plo, phi] = std::minmax_element(space_.points.begin(), space_.points.end());
  center_ = 0.5 * (*plo + *phi);
  scale_ = std::max(0.5 * (*phi - *plo), 1e-12 * std::max(1.0, std::abs(center_)));

  cofactor_polys_.reserve(n);
  kernel_weights_.reserve(n);
  for (int j = 0; j < n; ++j) {
    std::vector<Complex> roots;
    for (int l = 0; l < n; ++l)
      if (l != j) roots.emplace_back(measure_.atoms[l], 0.0);
    cofactor_polys_.push_back(Polynomial::from_roots(roots, center_, scale_) * Complex{static_cast<double>(sign), 0.0});
    kernel_weights_ext_.push_back(masses_ext_[j] * std::norm(atoms_ext_[j] - w_ext_) / std::norm(lead_ext_));
    kernel_weights_.push_back(static_cast<double>(kernel_weights_ext_[j]));
  }
}

namespace {

using Real = long double;
using Cplx = std::complex<Real>;

Cplx ext(Complex z) { return {z.real(), z.imag()}; }
Complex rnd(Cplx z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

}  // namespace

KreinModel::Cplx KreinModel::cofactor_ext(int j, Cplx lambda) const {
  Cplx p{1, 0};
  for (int l = 0; l < static_cast<int>(atoms_ext_.size()); ++l)
    if (l != j) p *= atoms_ext_[l] - lambda;
  return p;
}

Eigen::Matrix<KreinModel::Cplx, Eigen::Dynamic, 1> KreinModel::eigen_coordinates(const Eigen::VectorXcd& f) const {
  if (f.size() != space_.dim()) throw DomainError("KreinModel: coordinate length mismatch");
  for (Eigen::Index k = 0; k < f.size(); ++k) require_finite(f[k], "KreinModel");
  const Eigen::Matrix<Cplx, Eigen::Dynamic, 1> q =
      coord_map_.template cast<Cplx>() * f.cast<Cplx>();
  return eigvecs_ext_.transpose().cast<Cplx>() * q;
}

Complex KreinModel::cofactor(int j, Complex lambda) const { return rnd(cofactor_ext(j, ext(lambda))); }

Complex KreinModel::psi(Complex lambda) const {
  const Cplx l = ext(lambda);
  Cplx s{0, 0};
  for (std::size_t j = 0; j < atoms_ext_.size(); ++j)
    s += masses_ext_[j] * (atoms_ext_[j] - w_ext_) / (atoms_ext_[j] - l);
  return rnd(s);
}

Complex KreinModel::psi_derivative(Complex lambda) const {
  const Cplx l = ext(lambda);
  Cplx s{0, 0};
  for (std::size_t j = 0; j < atoms_ext_.size(); ++j) {
    const Cplx d = atoms_ext_[j] - l;
    s += masses_ext_[j] * (atoms_ext_[j] - w_ext_) / (d * d);
  }
  return rnd(s);
}

Polynomial KreinModel::psi_numerator() const {
  Polynomial p = Polynomial::constant(0.0, center_, scale_);
  for (int j = 0; j < measure_.atoms.size(); ++j)
    p = p + cofactor_polys_[j] * (measure_.masses[j] * (measure_.atoms[j] - xi_.w));
  return p;
}

Complex KreinModel::psi_numerator_lead() const { return lead_; }

Complex KreinModel::transform(const Eigen::VectorXcd& f, Complex lambda) const {
  require_finite(lambda, "transform");
  return transform_ext(f, ext(lambda));
}

Complex KreinModel::transform_at_atom(const Eigen::VectorXcd& f, int j) const {
  if (j < 0 || j >= static_cast<int>(atoms_ext_.size())) throw DomainError("transform_at_atom: index out of range");
  return transform_ext(f, Cplx(atoms_ext_[j], 0));
}

Complex KreinModel::transform_ext(const Eigen::VectorXcd& f, Cplx l) const {
  const auto fj = eigen_coordinates(f);
  const int n = static_cast<int>(atoms_ext_.size());

  Real nearest = std::numeric_limits<Real>::infinity();
  for (int j = 0; j < n; ++j) nearest = std::min(nearest, std::abs(atoms_ext_[j] - l));

  Cplx num{0, 0}, den{0, 0};
  Real den_size = 0;
  if (nearest < 1e-6L * scale_) {
    // cleared denominators: removable at the atoms
    for (int j = 0; j < n; ++j) {
      const Cplx cof = cofactor_ext(j, l);
      num += fj[j] * std::conj(overlaps_ext_[j]) * (atoms_ext_[j] - w_ext_) * cof;
      const Cplx term = masses_ext_[j] * (atoms_ext_[j] - w_ext_) * cof;
      den += term;
      den_size += std::abs(term);
    }
  } else {
    for (int j = 0; j < n; ++j) {
      const Cplx r = (atoms_ext_[j] - w_ext_) / (atoms_ext_[j] - l);
      num += fj[j] * std::conj(overlaps_ext_[j]) * r;
      den += masses_ext_[j] * r;
      den_size += std::abs(masses_ext_[j] * r);
    }
  }
  if (!(std::abs(den) > 1e-14L * den_size)) throw PoleError("transform: lambda is a zero of Psi");
  return rnd(num / den);
}

Complex KreinModel::r_transform(const Eigen::VectorXcd& f, Complex x) const {
  const auto fj = eigen_coordinates(f);
  const Cplx l = ext(x);
  Cplx num{0, 0};
  for (std::size_t j = 0; j < atoms_ext_.size(); ++j)
    num += fj[j] * std::conj(overlaps_ext_[j]) * (atoms_ext_[j] - w_ext_) * cofactor_ext(static_cast<int>(j), l);
  return rnd(num / lead_ext_);
}

Complex KreinModel::canonical_product(Complex lambda) const {
  const Cplx l = ext(lambda);
  Cplx s{0, 0};
  for (std::size_t j = 0; j < atoms_ext_.size(); ++j)
    s += masses_ext_[j] * (atoms_ext_[j] - w_ext_) * cofactor_ext(static_cast<int>(j), l);
  return rnd(s / lead_ext_);
}

Complex KreinModel::x_kernel(Complex x, Complex y) const {
  const Cplx a = ext(x), b = ext(y);
  Cplx s{0, 0};
  for (std::size_t j = 0; j < atoms_ext_.size(); ++j) {
    const int k = static_cast<int>(j);
    s += kernel_weights_ext_[j] * cofactor_ext(k, a) * std::conj(cofactor_ext(k, b));
  }
  return rnd(s);
}

Complex krein_transform(const KreinModel& model, const Eigen::VectorXcd& f, Complex lambda) {
  return model.transform(f, lambda);
}

// ---------------------------------------------------------------------------

std::vector<Zero> find_S(const KreinModel& model) {
  const Polynomial num = model.psi_numerator();
  const double scale = model.poly_scale() + std::abs(model.poly_center());
  std::vector<Complex> roots = num.roots();

  for (Complex& z : roots) {
    // Newton on Psi; keep a step only when it reduces |Psi|
    for (int it = 0; it < 8; ++it) {
      const Complex p = model.psi(z);
      const Complex dp = model.psi_derivative(z);
      if (std::abs(dp) == 0.0) break;
      const Complex next = z - p / dp;
      if (!is_finite(next) || std::abs(model.psi(next)) >= std::abs(p)) break;
      z = next;
    }
  }

  std::vector<Zero> out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    Complex acc = roots[i];
    int mult = 1;
    used[i] = true;
    for (std::size_t k = i + 1; k < roots.size(); ++k) {
      if (!used[k] && std::abs(roots[k] - roots[i]) < 1e-7 * scale) {
        used[k] = true;
        acc += roots[k];
        ++mult;
      }
    }
    out.push_back({acc / static_cast<double>(mult), mult});
  }
  for (const Zero& z : out) {
    if (std::abs(z.z.imag()) <= 1e-8 * scale)
      throw StructuralError("find_S", "zero of Psi within 1e-8 of the real axis");
  }
  return out;
}

double parseval_check(const KreinModel& model, const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) {
  // true inner product of l^2(weights); the coordinate dot product carries the
  // basis' orthonormality error
  const auto& sp = model.space();
  const Eigen::VectorXcd fv = sp.values(f), gv = sp.values(g);
  std::complex<long double> acc{0, 0};
  for (int i = 0; i < sp.size(); ++i)
    acc += static_cast<long double>(sp.weights[i]) * std::complex<long double>(fv[i].real(), fv[i].imag()) *
           std::conj(std::complex<long double>(gv[i].real(), gv[i].imag()));
  const Complex direct{static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  const auto& ms = model.measure();
  Complex spectral{0.0, 0.0};
  for (int j = 0; j < ms.atoms.size(); ++j) {
    spectral += model.transform_at_atom(f, j) * std::conj(model.transform_at_atom(g, j)) * ms.masses[j];
  }
  return std::abs(direct - spectral);
}

Polynomial canonical_R(const std::vector<Zero>& S, double center, double scale) {
  std::vector<Complex> roots;
  for (const Zero& z : S)
    for (int k = 0; k < z.multiplicity; ++k) roots.push_back(z.z);
  return Polynomial::from_roots(roots, center, scale);
}

// ---------------------------------------------------------------------------

std::pair<double, double> choose_probes(const KreinModel& model, int skip) {
  const auto& pts = model.space().points;
  const int m = static_cast<int>(pts.size());
  if (m < 2) throw DomainError("choose_probes: need two points");
  if (skip < 0 || skip >= m * (m - 1)) throw DomainError("choose_probes: no probe pairs left");

  std::vector<double> diag(m);
  for (int i = 0; i < m; ++i) diag[i] = model.x_kernel(pts[i], pts[i]).real();
  std::vector<int> order1(m);
  std::iota(order1.begin(), order1.end(), 0);
  std::stable_sort(order1.begin(), order1.end(), [&](int a, int b) { return diag[a] > diag[b]; });

  const int i1 = order1[skip / (m - 1)];
  const double y1 = pts[i1];
  std::vector<std::pair<double, int>> score;
  for (int i = 0; i < m; ++i) {
    if (i == i1) continue;
    const double v = std::abs((pts[i] - y1) * model.x_kernel(pts[i], y1)) / std::sqrt(diag[i] * diag[i1]);
    score.emplace_back(-v, i);
  }
  std::stable_sort(score.begin(), score.end());
  return {y1, pts[score[skip % (m - 1)].second]};
}

namespace {

// Degree-`degree` Chebyshev interpolant on [center - scale, center + scale].
Polynomial chebyshev_interpolant(const std::function<Complex(double)>& f, int degree, double center,
                                 double scale) {
  const int N = degree + 1;
  std::vector<Complex> values(N);
  for (int k = 0; k < N; ++k) values[k] = f(center + scale * std::cos(M_PI * (k + 0.5) / N));
  std::vector<Complex> c(N, Complex{0.0, 0.0});
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < N; ++k) c[j] += values[k] * std::cos(M_PI * j * (k + 0.5) / N);
    c[j] *= (j == 0 ? 1.0 : 2.0) / N;
  }
  return Polynomial(std::move(c), center, scale);
}

}  // namespace

ExtractedPair extract_AB(const KreinModel& model, double y1, double y2) {
  require_finite(y1, "extract_AB");
  require_finite(y2, "extract_AB");
  if (y1 == y2) throw DomainError("extract_AB: probes must differ");
  const auto& pts = model.space().points;
  const int n = static_cast<int>(model.measure().atoms.size());

  auto F = [&](double x, double y) { return (x - y) * model.x_kernel(x, y); };

  Eigen::MatrixXcd cols(pts.size(), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    cols(i, 0) = F(pts[i], y1);
    cols(i, 1) = F(pts[i], y2);
  }
  Eigen::MatrixXcd unit = cols;
  for (int k = 0; k < 2; ++k) {
    const double nrm = unit.col(k).norm();
    if (nrm > 0.0) unit.col(k) /= nrm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(unit);
  const auto& sv = svd.singularValues();
  const double cond = sv[1] > 0.0 ? sv[0] / sv[1] : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e8)) throw IllConditionedError("extract_AB: probe columns nearly collinear");

  const Complex kappa = F(y2, y1);
  if (!(std::abs(kappa) > 0.0)) throw IllConditionedError("extract_AB: K(y2, y1) vanishes");
  const double root = std::sqrt(std::abs(kappa));
  const Complex ca = 1.0 / root;
  const Complex cb = -root / std::conj(kappa);

  // The kernel is unchanged under (A, B) -> (A, B) M for real M with det 1.
  // Pick M making A and B orthogonal and equally sized on U: the raw pair is
  // localized around the probes, and a localized polynomial loses digits far
  // from its peak in any global coefficient representation.
  Eigen::MatrixXcd raw(pts.size(), 2);
  raw.col(0) = ca * cols.col(0);
  raw.col(1) = cb * cols.col(1);
  const Eigen::Matrix2d gram = (raw.adjoint() * raw).real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gram);
  if (!(es.eigenvalues()[0] > 0.0)) throw IllConditionedError("extract_AB: degenerate probe pair");
  Eigen::Matrix2d M = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                      es.eigenvectors().transpose();
  M *= std::sqrt(std::sqrt(gram.determinant()));

  auto balanced = [&](int col) {
    return [&, col](double x) {
      const Complex a = ca * F(x, y1);
      const Complex b = cb * F(x, y2);
      return M(0, col) * a + M(1, col) * b;
    };
  };

  ExtractedPair out;
  out.A = chebyshev_interpolant(balanced(0), n, model.poly_center(), model.poly_scale());
  out.B = chebyshev_interpolant(balanced(1), n, model.poly_center(), model.poly_scale());
  out.y1 = y1;
  out.y2 = y2;
  out.condition = cond;
  out.residual = integrable_residual(model, out.A, out.B, pts);
  return out;
}

void require_independent(const Polynomial& A, const Polynomial& B, const std::vector<double>& samples) {
  Eigen::MatrixXcd m(samples.size(), 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    m(i, 0) = A(samples[i]);
    m(i, 1) = B(samples[i]);
  }
  for (int k = 0; k < 2; ++k) {
    const double nrm = m.col(k).norm();
    if (nrm == 0.0) throw StructuralError("extract_AB", "A or B vanishes on the samples");
    m.col(k) /= nrm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  if (!(svd.singularValues()[1] > 1e-10))
    throw StructuralError("extract_AB", "A is proportional to B");
}

double integrable_residual(const KreinModel& model, const Polynomial& A, const Polynomial& B,
                           const std::vector<double>& grid) {
  const Polynomial dA = A.derivative();
  const Polynomial dB = B.derivative();
  std::vector<double> diag(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) diag[i] = model.x_kernel(grid[i], grid[i]).real();
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Complex k = model.x_kernel(grid[i], grid[j]);
      const Complex mdl = integrable_form(A, B, dA, dB, grid[i], grid[j]);
      const double floor = kResidualFloor * std::sqrt(std::abs(diag[i] * diag[j]));
      worst = std::max(worst, std::abs(k - mdl) / std::max(std::abs(k), floor));
    }
  }
  return worst;
}

Symmetrized omega_symmetrize(const Polynomial& A, const Polynomial& B) {
  const auto& ca = A.coeffs();
  std::size_t dom = 0;
  for (std::size_t k = 0; k < ca.size(); ++k)
    if (std::abs(ca[k]) > std::abs(ca[dom])) dom = k;
  const Complex c = ca[dom];
  if (std::abs(c) == 0.0) throw StructuralError("omega", "A vanishes identically");

  const std::vector<Complex> ra = A.roots();
  const std::vector<Complex> rb = B.roots();
  for (Complex r : ra) {
    const double tol = 1e-6 * std::max(1.0, std::abs(r));
    const bool paired = std::any_of(ra.begin(), ra.end(),
                                    [&](Complex q) { return std::abs(q - std::conj(r)) <= tol; });
    if (!paired) throw StructuralError("omega", "zeros of A are not closed under conjugation");
    for (Complex q : rb) {
      if (std::abs(q - r) < 1e-8 * std::max(1.0, std::abs(r)))
        throw StructuralError("omega", "A and B share a zero");
    }
  }

  Symmetrized out;
  out.omega = std::sqrt(std::conj(c) / c);
  out.A = A * out.omega;
  out.B = B * out.omega;
  out.imaginary_residual = std::max(out.A.imaginary_ratio(), out.B.imaginary_ratio());
  return out;
}

AssembledModel assemble_E_phi(const KreinModel& model, const Polynomial& R, const Symmetrized& sym) {
  const FiniteRankSpace& space = model.space();
  const std::vector<double>& pts = space.points;

  // xi / R on U through f_xi = f / xi with f = K(., t):
  //   xi(t) / R(t) = K(t, t) / (R (k_t)_xi)(t),
  // a sum whose terms share one phase. The direct quotient loses digits where
  // xi and R are both small.
  (void)R;
  const Eigen::MatrixXd K = space.kernel();
  std::vector<Complex> phi(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Eigen::VectorXcd kt = space.basis.col(static_cast<Eigen::Index>(i)).cast<Complex>();
    const Complex rk = model.r_transform(kt, pts[i]);
    if (std::abs(rk) == 0.0) throw StructuralError("assemble", "R f_xi vanishes on U");
    phi[i] = K(i, i) / (rk * sym.omega);
  }

  AssembledModel out{HermiteBiehler{RealEntireFunction::polynomial(sym.A.real_part()),
                                    RealEntireFunction::polynomial(sym.B.real_part())},
                     Multiplier::constant(1.0), {}, 0.0, 0.0, HbReport{}, 0.0};
  out.phi_phase = std::arg(phi[0]);
  const Complex unphase = std::polar(1.0, -out.phi_phase);
  std::map<double, double> table;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Complex v = phi[i] * unphase;
    out.phi_imaginary = std::max(out.phi_imaginary, std::abs(v.imag()) / std::abs(v));
    out.phi_values.push_back(v.real());
    table[pts[i]] = v.real();
  }
  out.phi = Multiplier::table(std::move(table));

  const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end());
  out.hb = hb_check(out.E, default_hb_samples(*lo, *hi), pts);

  KernelEvaluator kh = [&](double x, double y) { return K(space.index_of(x), space.index_of(y)); };
  out.factorization_residual = factorization_check(kh, out.phi, out.E, pts, false).max_relative_residual;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct StageFailure {
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

PipelineReport run_pipeline(const FiniteRankSpace& space, const PipelineOptions& options) {
  PipelineReport report;
  KreinArtifacts& art = report.artifacts;
  art.w = options.w;
  art.theta = options.theta;
  const int n = space.dim();
  const double scale = spread_scale(space.points);

  std::optional<MultiplicationOperator> op;
  std::optional<DeficiencyVector> xi;
  std::optional<KreinModel> model;

  auto stage = [&](const std::string& name, auto&& body) {
    StageResult r{name, false, {}};
    try {
      r.detail = body();
      r.pass = true;
    } catch (const StageFailure& e) {
      r.detail = e.detail;
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    report.stages.push_back(r);
    if (!r.pass && report.first_failure.empty()) report.first_failure = name;
    return r.pass;
  };

  const bool ok =
      stage("space",
            [&] {
              const SpaceValidation v = validate_space(space);
              if (!v.pass)
                throw StageFailure{"gram error " + fmt(v.gram_error) + ", indicator residual " +
                                   fmt(v.min_indicator_residual)};
              return "gram error " + fmt(v.gram_error);
            }) &&
      stage("division",
            [&] {
              const DivisionSweep d = division_property_check(space);
              if (!d.pass)
                throw StageFailure{"division fails at point index " + std::to_string(d.worst_point) +
                                   ", residual " + fmt(d.worst_residual)};
              return "worst residual " + fmt(d.worst_residual);
            }) &&
      stage("mult_domain",
            [&] {
              op = mult_domain(space);
              if (op->dim_domain() != n - 1)
                throw StageFailure{"dim D = " + std::to_string(op->dim_domain()) + ", expected n - 1"};
              if (op->symmetry_error > 1e-12 * scale)
                throw StageFailure{"symmetry error " + fmt(op->symmetry_error)};
              art.dim_domain = op->dim_domain();
              return "dim D = " + std::to_string(art.dim_domain);
            }) &&
      stage("deficiency",
            [&] {
              xi = deficiency_subspace(space, *op, options.w);
              art.xi = xi->xi;
              const Eigen::VectorXcd v = space.values(xi->xi);
              art.xi_values.assign(v.data(), v.data() + v.size());
              return "min |xi| ratio " + fmt(xi->min_value_ratio);
            }) &&
      stage("extension",
            [&] {
              model.emplace(space, *op, *xi, options.theta);
              return "theta " + fmt(options.theta);
            }) &&
      stage("spectral_measure",
            [&] {
              art.measure = model->measure();
              const double mass = art.measure.masses.sum();
              if (std::abs(mass - 1.0) > 1e-12) throw StageFailure{"total mass " + fmt(mass)};
              const Complex psi_w = model->psi(options.w);
              if (std::abs(psi_w - 1.0) > 1e-10) throw StageFailure{"Psi(w) != 1"};
              return "total mass " + fmt(mass);
            }) &&
      stage("find_S",
            [&] {
              art.S = find_S(*model);
              int count = 0;
              for (const Zero& z : art.S) count += z.multiplicity;
              if (count != n - 1)
                throw StageFailure{"|S| = " + std::to_string(count) + ", expected n - 1"};
              return "|S| = " + std::to_string(count);
            }) &&
      stage("parseval",
            [&] {
              double worst = 0.0;
              for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                  worst = std::max(worst, parseval_check(*model, Eigen::VectorXcd::Unit(n, k),
                                                         Eigen::VectorXcd::Unit(n, l)));
              art.parseval_residual = worst;
              if (worst > 1e-10) throw StageFailure{"residual " + fmt(worst)};
              return "residual " + fmt(worst);
            }) &&
      stage("canonical_R",
            [&] {
              art.R = canonical_R(art.S, model->poly_center(), model->poly_scale());
              double worst = 0.0;
              for (double t : space.points) {
                const Complex direct = model->canonical_product(t);
                if (std::abs(direct) == 0.0) throw StageFailure{"R vanishes on U"};
                worst = std::max(worst, std::abs((*art.R)(t) - direct) / std::abs(direct));
              }
              if (worst > 1e-6) throw StageFailure{"root product deviates from Psi numerator: " + fmt(worst)};
              return "degree " + std::to_string(art.R->degree()) + ", root product deviation " + fmt(worst);
            }) &&
      stage("extract_AB",
            [&] {
              const int m = space.size();
              std::string last;
              for (int skip = 0; skip < std::min(8, m * (m - 1)); ++skip) {
                const auto [y1, y2] = choose_probes(*model, skip);
                try {
                  ExtractedPair ab = extract_AB(*model, y1, y2);
                  require_independent(ab.A, ab.B, space.points);
                  if (ab.residual > 1e-9) {
                    last = "identity residual " + fmt(ab.residual);
                    continue;
                  }
                  art.AB = std::move(ab);
                  return "residual " + fmt(art.AB->residual) + ", condition " + fmt(art.AB->condition);
                } catch (const IllConditionedError& e) {
                  last = e.what();
                }
              }
              throw StageFailure{"no admissible probe pair: " + last};
            }) &&
      stage("omega",
            [&] {
              art.symmetrized = omega_symmetrize(art.AB->A, art.AB->B);
              if (art.symmetrized->imaginary_residual > 1e-11)
                throw StageFailure{"imaginary coefficients " + fmt(art.symmetrized->imaginary_residual)};
              return "imaginary residual " + fmt(art.symmetrized->imaginary_residual);
            }) &&
      stage("assemble", [&] {
        art.assembled = assemble_E_phi(*model, *art.R, *art.symmetrized);
        art.factorization_residual = art.assembled->factorization_residual;
        if (!art.assembled->hb.pass) throw StageFailure{"Hermite-Biehler check fails"};
        if (art.assembled->phi_imaginary > 1e-9)
          throw StageFailure{"Phi not real after phase removal: " + fmt(art.assembled->phi_imaginary)};
        if (art.factorization_residual > 1e-9)
          throw StageFailure{"factorization residual " + fmt(art.factorization_residual)};
        return "factorization residual " + fmt(art.factorization_residual);
      });

  report.pass = ok;
  return report;
}

}  // namespace dbk::krein
