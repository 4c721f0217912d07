#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dbk/kernels.hpp"

// Determinantal point processes on finite windows: sampling, the product
// expectation det(I + (g - 1) K), and Monte-Carlo checks of both.
namespace dbk::dpp {

/// Finite set of real points on which a kernel is truncated.
struct Window {
  std::vector<double> points;

  /// Integers -N, ..., N.
  static Window integers(long N);
  static Window grid(std::vector<double> points);
};

/// Kernel restricted to a window, with its eigendecomposition. Eigenvalues
/// within 1e-10 of 0 or 1 are snapped there; anything further outside
/// [0, 1] is rejected.
struct DppKernel {
  KernelMatrix K;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  double clamp_shift = 0.0;  ///< largest |change| made by the snap

  int size() const { return static_cast<int>(K.points.size()); }
  double trace() const { return K.entries.trace(); }
};

constexpr double kEigenTolerance = 1e-10;
constexpr double kDeflationFloor = 1e-12;

DppKernel prepare(const KernelMatrix& K);
DppKernel truncate(const KernelSpec& spec, const Window& window);

/// Sorted sample; `indices` point into the window.
struct PointConfiguration {
  std::vector<double> points;
  std::vector<int> indices;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  int resamples = 0;  ///< deflation breakdowns that forced a redraw
};

/// Two-phase sampler: Bernoulli(lambda_i) selection of eigenvectors, then
/// sequential point selection with Gram-Schmidt deflation. A pure function
/// of (kernel, seed, trial).
PointConfiguration dpp_sample(const DppKernel& kernel, std::uint64_t seed, std::uint64_t trial = 0);
PointConfiguration dpp_sample(const KernelMatrix& K, std::uint64_t seed);

/// g(x) = base times the multiplier of every bump containing x.
struct TestFunction {
  struct Bump {
    std::vector<double> points;                          ///< exact matches
    std::optional<std::pair<double, double>> interval;   ///< closed
    double multiplier = 1.0;
    bool contains(double x) const;
  };
  double base = 1.0;
  std::vector<Bump> bumps;

  double operator()(double x) const;
  /// Multipliers finite and nonnegative, intervals ordered.
  void validate() const;

  static TestFunction one();
  static TestFunction interval(double lo, double hi, double value);
  static TestFunction at_points(std::vector<double> pts, double value);
};

/// det(I + diag(g - 1) K) by partial-pivot LU.
double expectation_product(const KernelMatrix& K, const TestFunction& g);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long trials = 0;
  long resamples = 0;
};

constexpr long kMinTrials = 1000;

/// Trials 0..trials-1 of stream `seed`; OpenMP over trials.
std::vector<PointConfiguration> sample_trials(const DppKernel& kernel, long trials, std::uint64_t seed);
std::vector<PointConfiguration> sample_trials_serial(const DppKernel& kernel, long trials, std::uint64_t seed);

/// Mean and standard error of prod g(x) over the samples, Kahan-summed in
/// trial order (so independent of thread count).
McEstimate product_statistic(const std::vector<PointConfiguration>& samples, const TestFunction& g);

/// Requires trials >= kMinTrials.
McEstimate mc_estimate(const DppKernel& kernel, const TestFunction& g, long trials, std::uint64_t seed);
McEstimate mc_estimate_serial(const DppKernel& kernel, const TestFunction& g, long trials, std::uint64_t seed);

struct IntensityReport {
  std::vector<double> points;
  std::vector<double> frequency;
  std::vector<double> std_error;  ///< binomial sqrt(p (1 - p) / samples)
  long samples = 0;
};

/// Occupation frequency of each window point. Requires >= kMinTrials samples.
IntensityReport empirical_intensity(const std::vector<PointConfiguration>& samples, const Window& window);

struct SizeStatistic {
  double mean = 0.0;
  double std_error = 0.0;
  int min = 0;
  int max = 0;
};

SizeStatistic sample_size_statistic(const std::vector<PointConfiguration>& samples);

}  // namespace dbk::dpp
