#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dbk/complex.hpp"
#include "dbk/polynomial.hpp"

namespace dbk {

/// Entire function that is real on the real axis, evaluable at complex points.
class RealEntireFunction {
 public:
  using Evaluator = std::function<Complex(Complex)>;

  struct ClosedForm {
    std::string name;
    std::vector<double> params;
  };
  using Descriptor = std::variant<ClosedForm, Polynomial>;

  static RealEntireFunction closed_form(std::string name, std::vector<double> params,
                                        Evaluator evaluator);
  /// Throws DomainError unless the coefficients are real.
  static RealEntireFunction polynomial(Polynomial p);

  Complex operator()(Complex z) const { return eval_(z); }
  double operator()(double x) const { return eval_(Complex{x, 0.0}).real(); }

  const Descriptor& descriptor() const { return descriptor_; }
  const Evaluator& evaluator() const { return eval_; }

  /// Pointwise product with another real entire function.
  RealEntireFunction times(const RealEntireFunction& g) const;
  RealEntireFunction scaled(double c) const;

 private:
  RealEntireFunction(Evaluator eval, Descriptor d) : eval_(std::move(eval)), descriptor_(std::move(d)) {}

  Evaluator eval_;
  Descriptor descriptor_;
};

/// E = A + iB.
struct HermiteBiehler {
  RealEntireFunction A;
  RealEntireFunction B;

  Complex E(Complex z) const { return A(z) + kI * B(z); }
};

/// Nonzero function on the evaluation set: either a closed form on the
/// reals or a table of sampled values.
class Multiplier {
 public:
  static Multiplier closed_form(std::string name, std::function<double(double)> f);
  static Multiplier constant(double c);
  /// x^{power}, x > 0.
  static Multiplier power(double power);
  static Multiplier table(std::map<double, double> values);

  double operator()(double x) const;
  const std::string& name() const { return name_; }
  const std::map<double, double>& values() const { return values_; }

 private:
  std::string name_;
  std::function<double(double)> f_;
  std::map<double, double> values_;
};

// ---------------------------------------------------------------------------

struct HbReport {
  double min_gap = 0.0;  ///< min over samples of |E(z)| - |E(conj z)|
  Complex worst_sample{};
  double min_real_modulus = 0.0;  ///< min |E(t)| over the real probe grid (if any)
  bool pass = false;
};

/// |E(z)| > |E(conj z)| at every sample (Im z > 0 required), and |E(t)| > 0
/// on the optional real grid.
HbReport hb_check(const HermiteBiehler& E, const std::vector<Complex>& samples,
                  const std::vector<double>& real_grid = {});

/// Upper-half-plane probe set over [lo - pad, hi + pad] with several heights.
std::vector<Complex> default_hb_samples(double lo, double hi);

/// (A(x)B(y) - B(x)A(y)) / (x - y); removable diagonal value
/// A'(y)B(y) - B'(y)A(y) by complex-step when |x - y| < 1e-6 max(1,|x|,|y|).
double db_kernel_eval(const HermiteBiehler& E, double x, double y);

/// Conjugate-extended form (A(x) conj B(y) - B(x) conj A(y)) / (x - conj y).
Complex db_kernel_complex(const HermiteBiehler& E, Complex x, Complex y);

/// A(t) = (pi/sqrt2) t j_{s+1}(sqrt t), B(t) = (pi/sqrt2) j_s(sqrt t).
HermiteBiehler bessel_hb(double s);

/// E(z) = exp(-i b z): A = cos(bz), B = -sin(bz).
HermiteBiehler sine_hb(double b);

// ---------------------------------------------------------------------------

using KernelEvaluator = std::function<double(double, double)>;

/// Relative residual |K - M| / max(|K|, floor) with
/// floor = kResidualFloor * sqrt(|K(x,x) K(y,y)|).
inline constexpr double kResidualFloor = 1e-3;
double relative_residual(double k_xy, double model_xy, double k_xx, double k_yy);

struct FactorizationReport {
  double c = 1.0;
  double max_relative_residual = 0.0;
  double worst_x = 0.0;
  double worst_y = 0.0;
};

/// Max over grid pairs of the relative residual of K(x,y) = c Phi(x) K_E(x,y) Phi(y).
/// With fit_constant, c comes from the first off-diagonal pair with a
/// non-vanishing model value; otherwise c = 1.
FactorizationReport factorization_check(const KernelEvaluator& K, const Multiplier& phi,
                                        const HermiteBiehler& E, const std::vector<double>& grid,
                                        bool fit_constant);

struct GaugeReport {
  std::vector<double> grid;
  std::vector<double> W;  ///< W(y) with K_E1(x,y) = W(x) K_E2(x,y) W(y)
  double constancy_residual = 0.0;
  bool zero_free = false;
};

GaugeReport gauge_check(const HermiteBiehler& E1, const HermiteBiehler& E2,
                        const std::vector<double>& grid);

}  // namespace dbk
