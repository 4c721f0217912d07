#include "dbk/dpp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "dbk/complex.hpp"
#include "dbk/rng.hpp"

namespace dbk::dpp {

namespace {

// Compensated running sum.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

constexpr int kMaxResamples = 64;

}  // namespace

Window Window::integers(long N) {
  if (N < 0) throw DomainError("window: N must be >= 0");
  Window w;
  for (long k = -N; k <= N; ++k) w.points.push_back(static_cast<double>(k));
  return w;
}

Window Window::grid(std::vector<double> points) {
  if (points.empty()) throw DomainError("window: empty");
  for (double p : points) require_finite(p, "window");
  std::sort(points.begin(), points.end());
  if (std::adjacent_find(points.begin(), points.end()) != points.end())
    throw DomainError("window: points must be distinct");
  return Window{std::move(points)};
}

DppKernel prepare(const KernelMatrix& K) {
  const long n = static_cast<long>(K.points.size());
  if (n == 0) throw DomainError("dpp: empty window");
  if (K.entries.rows() != n || K.entries.cols() != n) throw DomainError("dpp: kernel shape mismatch");
  DppKernel out{K, {}, {}, 0.0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K.entries);
  if (es.info() != Eigen::Success) throw ConvergenceError("dpp: eigensolver failed");
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  for (long i = 0; i < n; ++i) {
    double& l = out.eigenvalues[i];
    if (!(l >= -kEigenTolerance && l <= 1.0 + kEigenTolerance))
      throw DomainError("invalid kernel: eigenvalue " + std::to_string(l) + " outside [0, 1]");
    const double snapped = l <= kEigenTolerance ? 0.0 : (l >= 1.0 - kEigenTolerance ? 1.0 : l);
    out.clamp_shift = std::max(out.clamp_shift, std::abs(snapped - l));
    l = snapped;
  }
  return out;
}

DppKernel truncate(const KernelSpec& spec, const Window& window) {
  if (window.points.empty()) throw DomainError("truncate: empty window");
  return prepare(kernel_grid(spec, window.points));
}

PointConfiguration dpp_sample(const DppKernel& kernel, std::uint64_t seed, std::uint64_t trial) {
  const int n = kernel.size();
  CounterRng rng(seed, trial);
  PointConfiguration out;
  out.seed = seed;
  out.trial = trial;

  for (;;) {
    std::vector<int> selected;
    for (int i = 0; i < n; ++i)
      if (rng.uniform() < kernel.eigenvalues[i]) selected.push_back(i);

    const int k = static_cast<int>(selected.size());
    Eigen::MatrixXd V(n, k);
    for (int c = 0; c < k; ++c) V.col(c) = kernel.eigenvectors.col(selected[c]);

    std::vector<int> chosen;
    bool breakdown = false;
    for (int r = k; r > 0 && !breakdown; --r) {
      Eigen::VectorXd weight = V.leftCols(r).rowwise().squaredNorm();
      for (int i : chosen) weight[i] = 0.0;
      const double total = weight.sum();
      const double u = rng.uniform() * total;
      double acc = 0.0;
      int pick = -1;
      for (int i = 0; i < n; ++i) {
        if (weight[i] <= 0.0) continue;
        pick = i;
        acc += weight[i];
        if (u < acc) break;
      }
      if (pick < 0) {
        breakdown = true;
        break;
      }
      chosen.push_back(pick);
      if (r == 1) break;

      // drop the direction that carries the picked point, then re-orthonormalize
      Eigen::Index j = 0;
      V.row(pick).head(r).cwiseAbs().maxCoeff(&j);
      V.col(j).swap(V.col(r - 1));
      const Eigen::VectorXd v = V.col(r - 1);
      for (int c = 0; c < r - 1; ++c) V.col(c) -= v * (V(pick, c) / v[pick]);
      for (int c = 0; c < r - 1; ++c) {
        for (int pass = 0; pass < 2; ++pass)
          for (int d = 0; d < c; ++d) V.col(c) -= V.col(d).dot(V.col(c)) * V.col(d);
        const double norm = V.col(c).norm();
        if (norm < kDeflationFloor) {
          breakdown = true;
          break;
        }
        V.col(c) /= norm;
      }
    }

    if (!breakdown) {
      std::sort(chosen.begin(), chosen.end());
      out.indices = chosen;
      out.points.reserve(chosen.size());
      for (int i : chosen) out.points.push_back(kernel.K.points[i]);
      return out;
    }
    if (++out.resamples > kMaxResamples)
      throw ConvergenceError("dpp_sample: repeated deflation breakdown (seed " + std::to_string(seed) + ", trial " +
                             std::to_string(trial) + ")");
  }
}

PointConfiguration dpp_sample(const KernelMatrix& K, std::uint64_t seed) { return dpp_sample(prepare(K), seed, 0); }

bool TestFunction::Bump::contains(double x) const {
  if (interval && x >= interval->first && x <= interval->second) return true;
  return std::find(points.begin(), points.end(), x) != points.end();
}

double TestFunction::operator()(double x) const {
  double g = base;
  for (const Bump& b : bumps)
    if (b.contains(x)) g *= b.multiplier;
  return g;
}

void TestFunction::validate() const {
  if (!std::isfinite(base) || base < 0.0) throw DomainError("test function: base must be finite and >= 0");
  for (const Bump& b : bumps) {
    if (!std::isfinite(b.multiplier) || b.multiplier < 0.0)
      throw DomainError("test function: multiplier must be finite and >= 0");
    if (b.interval && !(b.interval->first <= b.interval->second))
      throw DomainError("test function: interval bounds out of order");
    for (double p : b.points) require_finite(p, "test function");
  }
}

TestFunction TestFunction::one() { return {}; }

TestFunction TestFunction::interval(double lo, double hi, double value) {
  TestFunction g;
  g.bumps.push_back({{}, std::make_pair(lo, hi), value});
  g.validate();
  return g;
}

TestFunction TestFunction::at_points(std::vector<double> pts, double value) {
  TestFunction g;
  g.bumps.push_back({std::move(pts), std::nullopt, value});
  g.validate();
  return g;
}

double expectation_product(const KernelMatrix& K, const TestFunction& g) {
  g.validate();
  const long n = static_cast<long>(K.points.size());
  if (K.entries.rows() != n || K.entries.cols() != n) throw DomainError("expectation_product: shape mismatch");
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
  for (long i = 0; i < n; ++i) M.row(i) += (g(K.points[i]) - 1.0) * K.entries.row(i);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(M).determinant();
}

std::vector<PointConfiguration> sample_trials(const DppKernel& kernel, long trials, std::uint64_t seed) {
  if (trials < 0) throw DomainError("sample_trials: negative trial count");
  std::vector<PointConfiguration> out(static_cast<std::size_t>(trials));
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 256)
  for (long t = 0; t < trials; ++t) {
    try {
      out[t] = dpp_sample(kernel, seed, static_cast<std::uint64_t>(t));
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<PointConfiguration> sample_trials_serial(const DppKernel& kernel, long trials, std::uint64_t seed) {
  if (trials < 0) throw DomainError("sample_trials: negative trial count");
  std::vector<PointConfiguration> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (long t = 0; t < trials; ++t) out.push_back(dpp_sample(kernel, seed, static_cast<std::uint64_t>(t)));
  return out;
}

McEstimate product_statistic(const std::vector<PointConfiguration>& samples, const TestFunction& g) {
  g.validate();
  McEstimate est;
  est.trials = static_cast<long>(samples.size());
  if (samples.empty()) return est;
  std::vector<double> values;
  values.reserve(samples.size());
  Kahan sum;
  for (const auto& s : samples) {
    double v = 1.0;
    for (double x : s.points) v *= g(x);
    values.push_back(v);
    sum.add(v);
    est.resamples += s.resamples;
  }
  est.mean = sum.sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    Kahan ss;
    for (double v : values) ss.add((v - est.mean) * (v - est.mean));
    const double var = ss.sum / static_cast<double>(values.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return est;
}

McEstimate mc_estimate(const DppKernel& kernel, const TestFunction& g, long trials, std::uint64_t seed) {
  if (trials < kMinTrials) throw DomainError("mc_estimate: trials must be >= " + std::to_string(kMinTrials));
  return product_statistic(sample_trials(kernel, trials, seed), g);
}

McEstimate mc_estimate_serial(const DppKernel& kernel, const TestFunction& g, long trials, std::uint64_t seed) {
  if (trials < kMinTrials) throw DomainError("mc_estimate: trials must be >= " + std::to_string(kMinTrials));
  return product_statistic(sample_trials_serial(kernel, trials, seed), g);
}

IntensityReport empirical_intensity(const std::vector<PointConfiguration>& samples, const Window& window) {
  if (static_cast<long>(samples.size()) < kMinTrials)
    throw DomainError("empirical_intensity: need >= " + std::to_string(kMinTrials) + " samples");
  std::vector<double> pts = window.points;
  std::sort(pts.begin(), pts.end());
  std::vector<long> count(pts.size(), 0);
  for (const auto& s : samples)
    for (double x : s.points) {
      const auto it = std::lower_bound(pts.begin(), pts.end(), x);
      if (it == pts.end() || *it != x) throw DomainError("empirical_intensity: sample point outside the window");
      ++count[it - pts.begin()];
    }
  IntensityReport rep;
  rep.samples = static_cast<long>(samples.size());
  rep.points = pts;
  const double T = static_cast<double>(rep.samples);
  for (long c : count) {
    const double p = static_cast<double>(c) / T;
    rep.frequency.push_back(p);
    rep.std_error.push_back(std::sqrt(p * (1.0 - p) / T));
  }
  return rep;
}

SizeStatistic sample_size_statistic(const std::vector<PointConfiguration>& samples) {
  SizeStatistic st;
  if (samples.empty()) return st;
  st.min = st.max = static_cast<int>(samples.front().points.size());
  Kahan sum;
  for (const auto& s : samples) {
    const int k = static_cast<int>(s.points.size());
    st.min = std::min(st.min, k);
    st.max = std::max(st.max, k);
    sum.add(k);
  }
  const double T = static_cast<double>(samples.size());
  st.mean = sum.sum / T;
  if (samples.size() > 1) {
    Kahan ss;
    for (const auto& s : samples) {
      const double d = static_cast<double>(s.points.size()) - st.mean;
      ss.add(d * d);
    }
    st.std_error = std::sqrt(ss.sum / (T - 1.0) / T);
  }
  return st;
}

}  // namespace dbk::dpp
