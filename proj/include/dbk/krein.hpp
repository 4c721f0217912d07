#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dbk/complex.hpp"
#include "dbk/debranges.hpp"
#include "dbk/polynomial.hpp"

// Finite-rank model of the Krein construction: a reproducing-kernel space H
// spanned by n functions on m points with a discrete measure, the
// multiplication operator A f = t f on D = {f : t f in H}, its deficiency
// vector xi, a self-adjoint extension, the transform f -> f_xi, and the
// extraction of a Hermite-Biehler function E with multiplier Phi such that
// K_H(x, y) = Phi(x) K_E(x, y) Phi(y) on the points.
namespace dbk::krein {

/// Functions on `points`, orthonormal in l^2(points, weights). Row k of
/// `basis` holds the values of the k-th basis function; coordinates of an
/// element f are its inner products with the rows.
struct FiniteRankSpace {
  std::vector<double> points;
  std::vector<double> weights;
  Eigen::MatrixXd basis;  // n x m

  int dim() const { return static_cast<int>(basis.rows()); }
  int size() const { return static_cast<int>(points.size()); }

  /// m x n matrix diag(sqrt w) * basis^T with orthonormal columns.
  Eigen::MatrixXd weighted_basis() const;
  /// Values at the points from coordinates.
  Eigen::VectorXcd values(const Eigen::VectorXcd& coords) const;
  /// Coordinates of the orthogonal projection of a value vector.
  Eigen::VectorXcd project(const Eigen::VectorXcd& values) const;
  /// K(t_i, t_j) = sum_k basis(k,i) basis(k,j).
  Eigen::MatrixXd kernel() const;
  int index_of(double t) const;
};

/// First n orthonormal polynomials of the discrete measure, generated by
/// Gram-Schmidt on the Krylov sequence q, tq, ... (same span as 1, t, ...,
/// t^{n-1}, stable in floating point). Requires m >= n + 1, n >= 2.
FiniteRankSpace make_polynomial_space(std::vector<double> points, std::vector<double> weights, int n);

/// Orthonormalizes the given rows (values on the points) in l^2(weights).
FiniteRankSpace make_explicit_space(std::vector<double> points, std::vector<double> weights,
                                    const Eigen::MatrixXd& rows);

struct SpaceValidation {
  double gram_error = 0.0;
  bool nondegenerate = false;
  double min_indicator_residual = 0.0;  ///< min_i dist(delta_i, H) / ||delta_i||
  bool pass = false;
};

SpaceValidation validate_space(const FiniteRankSpace& space);

// ---------------------------------------------------------------------------

struct DivisionResult {
  Eigen::VectorXcd g;     ///< coordinates of the least-squares quotient
  double residual = 0.0;  ///< weighted l^2 residual of f - (t - k) g
  bool unique = false;    ///< normal system nonsingular
  bool pass = false;
};

/// Least-squares g in H with f(t) = (t - t_k) g(t) on the points.
/// Requires |f(t_k)| <= 1e-10 ||f||.
DivisionResult division_check(const FiniteRankSpace& space, const Eigen::VectorXcd& f, int k);

struct DivisionSweep {
  bool pass = true;
  double worst_residual = 0.0;
  int worst_point = -1;
};

/// division_check for a basis of {f : f(t_k) = 0} at every point t_k.
DivisionSweep division_property_check(const FiniteRankSpace& space);

// ---------------------------------------------------------------------------

struct MultiplicationOperator {
  Eigen::MatrixXd compression;    ///< n x n, P_H t restricted to H
  Eigen::MatrixXd domain_basis;   ///< n x d orthonormal coordinates spanning D
  Eigen::MatrixXd complement;     ///< n x (n-d) orthonormal coordinates spanning D-perp
  Eigen::MatrixXd action;         ///< n x d, coordinates of t f for the domain basis
  std::vector<double> outside_singular_values;
  double symmetry_error = 0.0;

  int dim_domain() const { return static_cast<int>(domain_basis.cols()); }
};

/// D as the null space of (I - P_H) t on H. Throws IllConditionedError when
/// a singular value falls in [1e-10, 1e-6] (relative to max(1, max|t|)) and
/// StructuralError when dim D-perp > 1.
MultiplicationOperator mult_domain(const FiniteRankSpace& space);

struct DeficiencyVector {
  Eigen::VectorXcd xi;  ///< unit coordinates spanning Ran(A - w)-perp
  Complex w;
  int dim_w = 0;
  int dim_wbar = 0;
  double min_value_ratio = 0.0;  ///< min_i |xi(t_i)| / max_i |xi(t_i)|
};

DeficiencyVector deficiency_subspace(const FiniteRankSpace& space, const MultiplicationOperator& op,
                                     Complex w = kI);

/// Real symmetric matrix agreeing with A on D; theta is the diagonal entry
/// on the unit vector spanning D-perp. Rejects repeated eigenvalues.
Eigen::MatrixXd selfadjoint_extension(const MultiplicationOperator& op, double theta);

/// Spectral data of an extension at xi.
struct SpectralMeasure {
  Eigen::VectorXd atoms;       ///< eigenvalues x_j, ascending
  Eigen::MatrixXd eigvecs;     ///< columns e_j
  Eigen::VectorXcd overlaps;   ///< c_j = <xi, e_j>
  Eigen::VectorXd masses;      ///< |c_j|^2
};

SpectralMeasure spectral_measure(const Eigen::MatrixXd& extension, const Eigen::VectorXcd& xi);

/// Everything needed to evaluate f_xi, Psi and the kernel of the model space.
/// The constructor reruns the operator stages in long double; evaluations use
/// that copy and round at the interface. The double artifacts passed in fix
/// w and the phase of xi.
class KreinModel {
 public:
  KreinModel(const FiniteRankSpace& space, MultiplicationOperator op, DeficiencyVector xi,
             double theta);

  const FiniteRankSpace& space() const { return space_; }
  const MultiplicationOperator& op() const { return op_; }
  const DeficiencyVector& deficiency() const { return xi_; }
  const SpectralMeasure& measure() const { return measure_; }
  const Eigen::MatrixXd& extension() const { return extension_; }
  double theta() const { return theta_; }
  Complex w() const { return xi_.w; }

  /// Psi(lambda) = sum_j nu_j (x_j - w) / (x_j - lambda).
  Complex psi(Complex lambda) const;
  Complex psi_derivative(Complex lambda) const;
  /// Numerator of Psi over prod_j (x_j - lambda), degree n - 1.
  Polynomial psi_numerator() const;
  /// Coefficient of lambda^{n-1} in psi_numerator, in the original variable.
  Complex psi_numerator_lead() const;

  /// f_xi(lambda) for coordinates f. Throws PoleError at zeros of Psi.
  Complex transform(const Eigen::VectorXcd& f, Complex lambda) const;
  /// f_xi at the j-th atom, evaluated at the unrounded atom.
  Complex transform_at_atom(const Eigen::VectorXcd& f, int j) const;

  /// (R f_xi)(x) with R monic over the zeros of Psi; a polynomial of
  /// degree <= n - 1 in x.
  Complex r_transform(const Eigen::VectorXcd& f, Complex x) const;

  /// Monic polynomial with zeros S, evaluated as Psi(l) prod_j (x_j - l) / lead
  /// (cleared-denominator sum); needs no root finding.
  Complex canonical_product(Complex lambda) const;

  /// Reproducing kernel of the model space: sum over an orthonormal basis of
  /// (R f_xi)(x) conj((R f_xi)(y)).
  Complex x_kernel(Complex x, Complex y) const;

  /// Polynomial map shared by every polynomial the pipeline produces.
  double poly_center() const { return center_; }
  double poly_scale() const { return scale_; }

  // prod_{l != j} (x_l - lambda)
  Complex cofactor(int j, Complex lambda) const;
  const Polynomial& cofactor_polynomial(int j) const { return cofactor_polys_[j]; }

  /// |lead|^-2 nu_j |x_j - w|^2: weight of cofactor_j(x) conj cofactor_j(y) in x_kernel.
  double kernel_weight(int j) const { return kernel_weights_[j]; }

 private:
  using Real = long double;
  using Cplx = std::complex<Real>;

  Cplx cofactor_ext(int j, Cplx lambda) const;
  Complex transform_ext(const Eigen::VectorXcd& f, Cplx lambda) const;
  Eigen::Matrix<Cplx, Eigen::Dynamic, 1> eigen_coordinates(const Eigen::VectorXcd& f) const;

  FiniteRankSpace space_;
  MultiplicationOperator op_;
  DeficiencyVector xi_;
  double theta_;
  Eigen::MatrixXd extension_;
  SpectralMeasure measure_;
  double center_ = 0.0;
  double scale_ = 1.0;
  Complex lead_{};
  std::vector<Polynomial> cofactor_polys_;
  std::vector<double> kernel_weights_;

  // extended-precision copy
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> coord_map_;  // original -> orthonormal coords
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> eigvecs_ext_;
  std::vector<Real> atoms_ext_;
  std::vector<Real> masses_ext_;
  std::vector<Real> kernel_weights_ext_;
  std::vector<Cplx> overlaps_ext_;
  Cplx w_ext_{};
  Cplx lead_ext_{};
};

Complex krein_transform(const KreinModel& model, const Eigen::VectorXcd& f, Complex lambda);

struct Zero {
  Complex z;
  int multiplicity = 1;
};

/// Zeros of Psi: companion-matrix roots of its numerator, Newton-polished on
/// Psi, clustered at radius 1e-7. Throws StructuralError for a root within
/// 1e-8 of the real axis.
std::vector<Zero> find_S(const KreinModel& model);

/// |<f, g> - sum_j f_xi(x_j) conj g_xi(x_j) nu_j|.
double parseval_check(const KreinModel& model, const Eigen::VectorXcd& f, const Eigen::VectorXcd& g);

/// prod (lambda - z) over S with multiplicities.
Polynomial canonical_R(const std::vector<Zero>& S, double center, double scale);

struct ExtractedPair {
  Polynomial A;
  Polynomial B;
  double y1 = 0.0;
  double y2 = 0.0;
  double condition = 0.0;  ///< condition number of the sampled [F1 F2] columns
  double residual = 0.0;   ///< max relative residual of the integrable identity
};

/// Probe pair: y1 maximizes the model-kernel diagonal over the points; y2
/// maximizes the normalized |(t - y1) K(t, y1)|. `skip` excludes pairs
/// already rejected.
std::pair<double, double> choose_probes(const KreinModel& model, int skip = 0);

/// Solves K(x,y) = (A(x) conj B(y) - B(x) conj A(y)) / (x - y) with A, B in
/// the span of (. - y1) K(., y1) and (. - y2) K(., y2). Throws
/// IllConditionedError for near-collinear probe columns (condition > 1e8).
ExtractedPair extract_AB(const KreinModel& model, double y1, double y2);

/// Rejects A proportional to B on the sample points.
void require_independent(const Polynomial& A, const Polynomial& B, const std::vector<double>& samples);

/// Max relative residual of the integrable identity against model.x_kernel
/// on the grid.
double integrable_residual(const KreinModel& model, const Polynomial& A, const Polynomial& B,
                           const std::vector<double>& grid);

struct Symmetrized {
  Complex omega;
  Polynomial A;  ///< real coefficients
  Polynomial B;
  double imaginary_residual = 0.0;
};

/// Omega = sqrt(conj(c)/c) for the dominant coefficient c of A (principal
/// branch); checks the zeros of A are closed under conjugation and that A,
/// B share no zero.
Symmetrized omega_symmetrize(const Polynomial& A, const Polynomial& B);

struct AssembledModel {
  HermiteBiehler E;
  Multiplier phi;
  std::vector<double> phi_values;
  double phi_phase = 0.0;      ///< argument removed from xi / (R Omega)
  double phi_imaginary = 0.0;  ///< max |Im Phi| / |Phi| after the phase removal
  HbReport hb;
  double factorization_residual = 0.0;
};

AssembledModel assemble_E_phi(const KreinModel& model, const Polynomial& R, const Symmetrized& sym);

// ---------------------------------------------------------------------------

struct PipelineOptions {
  Complex w = kI;
  double theta = 0.0;
};

struct StageResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct KreinArtifacts {
  Complex w;
  double theta = 0.0;
  int dim_domain = 0;
  Eigen::VectorXcd xi;              ///< coordinates
  std::vector<Complex> xi_values;   ///< xi(t_i)
  SpectralMeasure measure;
  std::vector<Zero> S;
  std::optional<Polynomial> R;
  std::optional<ExtractedPair> AB;
  std::optional<Symmetrized> symmetrized;
  std::optional<AssembledModel> assembled;
  double parseval_residual = 0.0;
  double factorization_residual = 0.0;
};

struct PipelineReport {
  KreinArtifacts artifacts;
  std::vector<StageResult> stages;
  bool pass = false;
  std::string first_failure;  ///< empty when pass
};

/// Runs every stage with its invariant checks; stops at the first failure.
PipelineReport run_pipeline(const FiniteRankSpace& space, const PipelineOptions& options = {});

// ---------------------------------------------------------------------------

/// Finitely supported sequence: values a_n for n = first, first+1, ...
struct FiniteSequence {
  long first = 0;
  std::vector<Complex> values;

  Complex at(long n) const;
};

struct DiscreteSineTransform {
  Complex fourier;         ///< (W f)^(lambda) by adaptive quadrature
  Complex fourier_closed;  ///< same integral in closed form
  Complex fxi;             ///< f_xi from the quadrature value
  Complex fxi_closed;      ///< f_xi from the closed-form integral
  Complex r_fxi;           ///< (1/b) sqrt(pi/2) (W f)^(lambda)
};

/// f_xi(lambda) = (conj w - lambda) / (2 sin(b (conj w - lambda))) sqrt(2 pi) (W f)^(lambda)
/// for the discrete sine space, where W f = chi_[-b,b] sum_n a_n e^{inx} is
/// the image of the projection of the sequence onto H.
DiscreteSineTransform discrete_sine_fxi(double b, Complex w, const FiniteSequence& f, Complex lambda);

/// Coordinates of xi: Fourier coefficients of e^{i conj(w) x} chi_[-b,b].
Complex discrete_sine_xi(double b, Complex w, long n);

/// (P_H a)(m) = sum_n a_n sin(b(m - n)) / (pi (m - n)).
Complex discrete_sine_project(double b, const FiniteSequence& f, long m);

}  // namespace dbk::krein
