#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dbk/debranges.hpp"

namespace dbk {

enum class KernelFamily { continuous_sine, discrete_sine, bessel, debranges_derived };

std::string to_string(KernelFamily f);
/// Accepts "continuous-sine", "discrete-sine", "bessel", "debranges" (and
/// underscore spellings). Throws DomainError otherwise.
KernelFamily parse_family(const std::string& name);

/// Admissible band for the discrete sine kernel. `strict` is (0, pi/2);
/// `extended` is (0, pi), where the formula still defines a projection.
enum class BandRange { strict, extended };

/// Validated parameter set for one kernel family.
class KernelSpec {
 public:
  static KernelSpec continuous_sine(double b);
  static KernelSpec discrete_sine(double b, BandRange range = BandRange::strict);
  static KernelSpec bessel(double s);
  static KernelSpec debranges_derived(HermiteBiehler E, Multiplier phi, double c = 1.0);

  KernelFamily family() const { return family_; }
  double b() const { return b_; }
  double s() const { return s_; }

  /// K(x, y) for the chosen family. Discrete sine requires integer points.
  double operator()(double x, double y) const;

 private:
  KernelFamily family_ = KernelFamily::continuous_sine;
  double b_ = 0.0;
  double s_ = 0.0;
  double c_ = 1.0;
  std::shared_ptr<const HermiteBiehler> E_;
  std::shared_ptr<const Multiplier> phi_;
};

/// Points plus the symmetric matrix of pairwise kernel values.
struct KernelMatrix {
  std::vector<double> points;
  Eigen::MatrixXd entries;
  std::optional<KernelFamily> family;
};

double discrete_sine_eval(double b, long m, long n, BandRange range = BandRange::strict);
double continuous_sine_eval(double b, double x, double y);
/// (sqrt x J_{s+1}(sqrt x) J_s(sqrt y) - sqrt y J_{s+1}(sqrt y) J_s(sqrt x)) / (2 (x - y)),
/// with the diagonal limit by complex-step when |x-y| < 1e-6 max(1,|x|,|y|).
double bessel_eval(double s, double x, double y);

/// Parallel over rows (OpenMP); values independent of thread count.
KernelMatrix kernel_grid(const KernelSpec& spec, const std::vector<double>& points);
/// Serial reference for kernel_grid.
KernelMatrix kernel_grid_serial(const KernelSpec& spec, const std::vector<double>& points);

struct PsdReport {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double spectral_radius = 0.0;
  bool contraction_checked = false;
  bool pass = false;
};

/// min eigenvalue >= -1e-10 * spectral radius; for sine families also
/// max eigenvalue <= 1 + 1e-10.
PsdReport psd_check(const KernelMatrix& K);

struct NormalityReport {
  int n = 0;
  double pointwise_ratio_bound = 0.0;  ///< max over [-1,1] of (n-1)|e_n| / |e_0|
  double norm_ratio = 0.0;             ///< ||(n-1) e_n|| / ||e_0||
  double norm_e0 = 0.0;
  double norm_en = 0.0;
};

/// e_n(x) = sin(pi x)/(x - n). Norms by the trapezoid rule on [-1e4, 1e4]
/// with step 1e-2, summed in fixed blocks in parallel.
NormalityReport normality_witness(int n);
NormalityReport normality_witness_serial(int n);

}  // namespace dbk
