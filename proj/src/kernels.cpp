#include "dbk/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "dbk/specfun.hpp"

namespace dbk {

std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::continuous_sine: return "continuous-sine";
    case KernelFamily::discrete_sine: return "discrete-sine";
    case KernelFamily::bessel: return "bessel";
    case KernelFamily::debranges_derived: return "debranges";
  }
  return "unknown";
}

KernelFamily parse_family(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '_', '-');
  if (n == "continuous-sine" || n == "sine") return KernelFamily::continuous_sine;
  if (n == "discrete-sine") return KernelFamily::discrete_sine;
  if (n == "bessel") return KernelFamily::bessel;
  if (n == "debranges" || n == "debranges-derived") return KernelFamily::debranges_derived;
  throw DomainError("unknown kernel family '" + name + "'");
}

namespace {

void require_band(double b, BandRange range) {
  const double hi = range == BandRange::strict ? std::numbers::pi / 2 : std::numbers::pi;
  if (!(b > 0.0 && b < hi)) {
    throw DomainError(range == BandRange::strict ? "discrete sine: b must lie in (0, pi/2)"
                                                 : "discrete sine: b must lie in (0, pi)");
  }
}

void require_order(double s) {
  if (!std::isfinite(s) || !(s > -1.0)) throw DomainError("bessel: order s must exceed -1");
}

long as_integer_point(double x) {
  const double r = std::round(x);
  if (r != x) throw DomainError("discrete sine: points must be integers");
  return static_cast<long>(r);
}

}  // namespace

KernelSpec KernelSpec::continuous_sine(double b) {
  if (!std::isfinite(b) || !(b > 0.0)) throw DomainError("continuous sine: b must be > 0");
  KernelSpec k;
  k.family_ = KernelFamily::continuous_sine;
  k.b_ = b;
  return k;
}

KernelSpec KernelSpec::discrete_sine(double b, BandRange range) {
  require_band(b, range);
  KernelSpec k;
  k.family_ = KernelFamily::discrete_sine;
  k.b_ = b;
  return k;
}

KernelSpec KernelSpec::bessel(double s) {
  require_order(s);
  KernelSpec k;
  k.family_ = KernelFamily::bessel;
  k.s_ = s;
  return k;
}

KernelSpec KernelSpec::debranges_derived(HermiteBiehler E, Multiplier phi, double c) {
  if (!(c > 0.0)) throw DomainError("debranges kernel: constant must be > 0");
  KernelSpec k;
  k.family_ = KernelFamily::debranges_derived;
  k.c_ = c;
  k.E_ = std::make_shared<const HermiteBiehler>(std::move(E));
  k.phi_ = std::make_shared<const Multiplier>(std::move(phi));
  return k;
}

double KernelSpec::operator()(double x, double y) const {
  switch (family_) {
    case KernelFamily::continuous_sine: return continuous_sine_eval(b_, x, y);
    case KernelFamily::discrete_sine:
      // the range was validated at construction
      return discrete_sine_eval(b_, as_integer_point(x), as_integer_point(y), BandRange::extended);
    case KernelFamily::bessel: return bessel_eval(s_, x, y);
    case KernelFamily::debranges_derived:
      return c_ * (*phi_)(x) * db_kernel_eval(*E_, x, y) * (*phi_)(y);
  }
  return 0.0;
}

double discrete_sine_eval(double b, long m, long n, BandRange range) {
  require_band(b, range);
  if (m == n) return b / std::numbers::pi;
  const double d = static_cast<double>(m - n);
  return std::sin(b * d) / (std::numbers::pi * d);
}

double continuous_sine_eval(double b, double x, double y) {
  if (!std::isfinite(b) || !(b > 0.0)) throw DomainError("continuous sine: b must be > 0");
  require_finite(x, "continuous_sine_eval");
  require_finite(y, "continuous_sine_eval");
  const double u = x - y;
  const double bu = b * u;
  if (std::abs(bu) < 1e-8) return b / std::numbers::pi * (1.0 - bu * bu / 6.0);
  return std::sin(bu) / (std::numbers::pi * u);
}

namespace {

// sqrt(x) J_{s+1}(sqrt x) and J_s(sqrt x) continued analytically in x.
Complex bessel_a(double s, Complex x) {
  return std::pow(x, 0.5 * s + 1.0) * specfun::entire_bessel(s + 1.0, x);
}
Complex bessel_b(double s, Complex x) {
  return std::pow(x, 0.5 * s) * specfun::entire_bessel(s, x);
}

}  // namespace

double bessel_eval(double s, double x, double y) {
  require_order(s);
  require_finite(x, "bessel_eval");
  require_finite(y, "bessel_eval");
  if (!(x > 0.0) || !(y > 0.0)) throw DomainError("bessel kernel: arguments must be > 0");

  if (std::abs(x - y) < 1e-6 * std::max({1.0, std::abs(x), std::abs(y)})) {
    const double m = 0.5 * (x + y);
    const double am = bessel_a(s, m).real();
    const double bm = bessel_b(s, m).real();
    // d/dx of the numerator at x = m, divided by 2
    auto numerator = [&](Complex z) { return bessel_a(s, z) * bm - am * bessel_b(s, z); };
    return 0.5 * specfun::complex_step_derivative(numerator, m);
  }
  const double rx = std::sqrt(x), ry = std::sqrt(y);
  const double ax = rx * specfun::bessel_j(s + 1.0, rx);
  const double ay = ry * specfun::bessel_j(s + 1.0, ry);
  const double bx = specfun::bessel_j(s, rx);
  const double by = specfun::bessel_j(s, ry);
  return (ax * by - ay * bx) / (2.0 * (x - y));
}

namespace {

template <bool Parallel>
KernelMatrix build_grid(const KernelSpec& spec, const std::vector<double>& points) {
  for (double p : points) require_finite(p, "kernel_grid");
  {
    auto sorted = points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw DomainError("kernel_grid: points must be distinct");
  }
  const long n = static_cast<long>(points.size());
  KernelMatrix km;
  km.points = points;
  km.family = spec.family();
  km.entries.resize(n, n);
  if constexpr (Parallel) {
    // exceptions cannot cross the parallel region; record and rethrow
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      try {
        for (long j = i; j < n; ++j) km.entries(i, j) = spec(points[i], points[j]);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (long i = 0; i < n; ++i)
      for (long j = i; j < n; ++j) km.entries(i, j) = spec(points[i], points[j]);
  }
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < i; ++j) km.entries(i, j) = km.entries(j, i);
  return km;
}

}  // namespace

KernelMatrix kernel_grid(const KernelSpec& spec, const std::vector<double>& points) {
  return build_grid<true>(spec, points);
}

KernelMatrix kernel_grid_serial(const KernelSpec& spec, const std::vector<double>& points) {
  return build_grid<false>(spec, points);
}

PsdReport psd_check(const KernelMatrix& K) {
  if (K.entries.rows() != K.entries.cols() || K.entries.rows() == 0)
    throw DomainError("psd_check: kernel matrix must be square and nonempty");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(K.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("psd_check: eigensolver failed");
  PsdReport r;
  r.min_eigenvalue = solver.eigenvalues().minCoeff();
  r.max_eigenvalue = solver.eigenvalues().maxCoeff();
  r.spectral_radius = solver.eigenvalues().cwiseAbs().maxCoeff();
  r.pass = r.min_eigenvalue >= -1e-10 * r.spectral_radius;
  if (K.family == KernelFamily::continuous_sine || K.family == KernelFamily::discrete_sine) {
    r.contraction_checked = true;
    r.pass = r.pass && r.max_eigenvalue <= 1.0 + 1e-10;
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

constexpr long kQuadSteps = 100;       // steps per unit length (h = 1e-2)
constexpr long kQuadHalfRange = 10000; // R
constexpr long kQuadBlocks = 1024;

// sin(pi k / kQuadSteps) with exact period reduction.
double sin_pi_step(long k) {
  const long period = 2 * kQuadSteps;
  long r = k % period;
  if (r < 0) r += period;
  return std::sin(std::numbers::pi * static_cast<double>(r) / kQuadSteps);
}

// |e_n(x)|^2 at x = k / kQuadSteps
double en_squared(long k, int n) {
  const long shift = k - static_cast<long>(n) * kQuadSteps;
  if (shift == 0) return std::numbers::pi * std::numbers::pi;
  const double v = sin_pi_step(k) / (static_cast<double>(shift) / kQuadSteps);
  return v * v;
}

// Fixed block partition; the serial path sums the same blocks in the same order.
template <bool Parallel>
double trapezoid_norm_squared(int n) {
  const long first = -kQuadHalfRange * kQuadSteps;
  const long last = kQuadHalfRange * kQuadSteps;
  const long count = last - first + 1;
  const long per_block = (count + kQuadBlocks - 1) / kQuadBlocks;
  const auto block_sum = [&](long blk) {
    const long lo = first + blk * per_block;
    const long hi = std::min(last, lo + per_block - 1);
    double s = 0.0;
    for (long k = lo; k <= hi; ++k) {
      const double wgt = (k == first || k == last) ? 0.5 : 1.0;
      s += wgt * en_squared(k, n);
    }
    return s;
  };
  std::vector<double> partial(kQuadBlocks, 0.0);
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (long blk = 0; blk < kQuadBlocks; ++blk) partial[blk] = block_sum(blk);
  } else {
    for (long blk = 0; blk < kQuadBlocks; ++blk) partial[blk] = block_sum(blk);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total / kQuadSteps;
}

template <bool Parallel>
NormalityReport normality_impl(int n) {
  if (n < 2) throw DomainError("normality_witness: n must be >= 2");
  NormalityReport r;
  r.n = n;
  constexpr int kGrid = 20001;
  for (int i = 0; i < kGrid; ++i) {
    const double x = -1.0 + 2.0 * i / (kGrid - 1);
    const double sx = std::sin(std::numbers::pi * x);
    const double e0 = sx / x;
    if (x == 0.0 || e0 == 0.0) continue;  // e_n(0) = e_0(0) = 0
    const double en = sx / (x - n);
    r.pointwise_ratio_bound = std::max(r.pointwise_ratio_bound, (n - 1) * std::abs(en) / std::abs(e0));
  }
  r.norm_e0 = std::sqrt(trapezoid_norm_squared<Parallel>(0));
  r.norm_en = std::sqrt(trapezoid_norm_squared<Parallel>(n));
  r.norm_ratio = (n - 1) * r.norm_en / r.norm_e0;
  return r;
}

}  // namespace

NormalityReport normality_witness(int n) { return normality_impl<true>(n); }
NormalityReport normality_witness_serial(int n) { return normality_impl<false>(n); }

}  // namespace dbk
