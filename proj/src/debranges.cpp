#include "dbk/debranges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dbk/specfun.hpp"

namespace dbk {

RealEntireFunction RealEntireFunction::closed_form(std::string name, std::vector<double> params,
                                                   Evaluator evaluator) {
  return RealEntireFunction(std::move(evaluator), ClosedForm{std::move(name), std::move(params)});
}

RealEntireFunction RealEntireFunction::polynomial(Polynomial p) {
  if (p.imaginary_ratio() > 0.0) throw DomainError("RealEntireFunction: polynomial coefficients must be real");
  Evaluator eval = [p](Complex z) { return p(z); };
  return RealEntireFunction(std::move(eval), std::move(p));
}

RealEntireFunction RealEntireFunction::times(const RealEntireFunction& g) const {
  auto f1 = eval_;
  auto f2 = g.eval_;
  std::string name = "product";
  return closed_form(name, {}, [f1, f2](Complex z) { return f1(z) * f2(z); });
}

RealEntireFunction RealEntireFunction::scaled(double c) const {
  auto f = eval_;
  if (const auto* p = std::get_if<Polynomial>(&descriptor_)) return polynomial(*p * Complex{c, 0.0});
  return closed_form("scaled", {c}, [f, c](Complex z) { return c * f(z); });
}

// ---------------------------------------------------------------------------

Multiplier Multiplier::closed_form(std::string name, std::function<double(double)> f) {
  Multiplier m;
  m.name_ = std::move(name);
  m.f_ = std::move(f);
  return m;
}

Multiplier Multiplier::constant(double c) {
  if (c == 0.0 || !std::isfinite(c)) throw DomainError("Multiplier: constant must be finite and nonzero");
  return closed_form("constant", [c](double) { return c; });
}

Multiplier Multiplier::power(double p) {
  return closed_form("power", [p](double x) {
    if (!(x > 0.0)) throw DomainError("Multiplier::power: x must be > 0");
    return std::pow(x, p);
  });
}

Multiplier Multiplier::table(std::map<double, double> values) {
  for (const auto& [x, v] : values)
    if (v == 0.0 || !std::isfinite(v)) throw DomainError("Multiplier: table values must be nonzero");
  Multiplier m;
  m.name_ = "table";
  m.values_ = std::move(values);
  return m;
}

double Multiplier::operator()(double x) const {
  if (f_) return f_(x);
  const auto it = values_.find(x);
  if (it == values_.end()) throw DomainError("Multiplier: point outside the tabulated domain");
  return it->second;
}

// ---------------------------------------------------------------------------

HbReport hb_check(const HermiteBiehler& E, const std::vector<Complex>& samples,
                  const std::vector<double>& real_grid) {
  HbReport r;
  r.min_gap = std::numeric_limits<double>::infinity();
  r.min_real_modulus = std::numeric_limits<double>::infinity();
  for (Complex z : samples) {
    require_finite(z, "hb_check");
    if (!(z.imag() > 0.0)) throw DomainError("hb_check: samples must lie in the upper half plane");
    const double gap = std::abs(E.E(z)) - std::abs(E.E(std::conj(z)));
    if (gap < r.min_gap) {
      r.min_gap = gap;
      r.worst_sample = z;
    }
  }
  for (double t : real_grid) r.min_real_modulus = std::min(r.min_real_modulus, std::abs(E.E(Complex{t, 0.0})));
  r.pass = r.min_gap > 0.0 && (real_grid.empty() || r.min_real_modulus > 0.0);
  if (real_grid.empty()) r.min_real_modulus = 0.0;
  return r;
}

std::vector<Complex> default_hb_samples(double lo, double hi) {
  if (hi < lo) std::swap(lo, hi);
  const double width = std::max(1.0, hi - lo);
  const double pad = 0.5 * width;
  constexpr int kCols = 41;
  std::vector<Complex> out;
  for (double h : {0.01, 0.1, 1.0, 10.0}) {
    for (int i = 0; i < kCols; ++i) {
      const double x = lo - pad + (hi - lo + 2 * pad) * i / (kCols - 1);
      out.emplace_back(x, h * width);
    }
  }
  return out;
}

namespace {

bool near_diagonal(double x, double y) {
  return std::abs(x - y) < 1e-6 * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace

double db_kernel_eval(const HermiteBiehler& E, double x, double y) {
  require_finite(x, "db_kernel_eval");
  require_finite(y, "db_kernel_eval");
  if (near_diagonal(x, y)) {
    // K(m+d, m-d) = K(m,m) + O(d^2) by symmetry
    const double m = 0.5 * (x + y);
    const double da = specfun::complex_step_derivative(E.A.evaluator(), m);
    const double db = specfun::complex_step_derivative(E.B.evaluator(), m);
    return da * E.B(m) - db * E.A(m);
  }
  return (E.A(x) * E.B(y) - E.B(x) * E.A(y)) / (x - y);
}

Complex db_kernel_complex(const HermiteBiehler& E, Complex x, Complex y) {
  const Complex denom = x - std::conj(y);
  if (std::abs(denom) == 0.0) throw DomainError("db_kernel_complex: x equals conj(y)");
  return (E.A(x) * std::conj(E.B(y)) - E.B(x) * std::conj(E.A(y))) / denom;
}

HermiteBiehler bessel_hb(double s) {
  if (!(s > -1.0) || !std::isfinite(s)) throw DomainError("bessel_hb: s must exceed -1");
  const double k = std::numbers::pi / std::numbers::sqrt2;
  auto A = RealEntireFunction::closed_form("bessel_A", {s}, [s, k](Complex t) {
    return k * t * specfun::entire_bessel(s + 1.0, t);
  });
  auto B = RealEntireFunction::closed_form("bessel_B", {s}, [s, k](Complex t) {
    return k * specfun::entire_bessel(s, t);
  });
  return {std::move(A), std::move(B)};
}

HermiteBiehler sine_hb(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("sine_hb: b must be > 0");
  auto A = RealEntireFunction::closed_form("cos", {b}, [b](Complex z) { return std::cos(b * z); });
  auto B = RealEntireFunction::closed_form("neg_sin", {b}, [b](Complex z) { return -std::sin(b * z); });
  return {std::move(A), std::move(B)};
}

// ---------------------------------------------------------------------------

double relative_residual(double k_xy, double model_xy, double k_xx, double k_yy) {
  const double floor = kResidualFloor * std::sqrt(std::abs(k_xx * k_yy));
  const double denom = std::max(std::abs(k_xy), floor);
  if (denom == 0.0) return std::abs(k_xy - model_xy) == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(k_xy - model_xy) / denom;
}

FactorizationReport factorization_check(const KernelEvaluator& K, const Multiplier& phi,
                                        const HermiteBiehler& E, const std::vector<double>& grid,
                                        bool fit_constant) {
  const std::size_t n = grid.size();
  std::vector<double> phis(n), kdiag(n);
  for (std::size_t i = 0; i < n; ++i) {
    phis[i] = phi(grid[i]);
    if (phis[i] == 0.0) throw DomainError("factorization_check: multiplier vanishes on the grid");
    kdiag[i] = K(grid[i], grid[i]);
  }
  auto model = [&](std::size_t i, std::size_t j) {
    return phis[i] * db_kernel_eval(E, grid[i], grid[j]) * phis[j];
  };

  FactorizationReport rep;
  if (fit_constant) {
    bool found = false;
    for (std::size_t i = 0; i < n && !found; ++i) {
      for (std::size_t j = i + 1; j < n && !found; ++j) {
        const double m = model(i, j);
        const double scale = std::abs(phis[i] * phis[j]) *
                             std::sqrt(std::abs(db_kernel_eval(E, grid[i], grid[i]) *
                                                db_kernel_eval(E, grid[j], grid[j])));
        if (std::abs(m) > 1e-8 * scale) {
          rep.c = K(grid[i], grid[j]) / m;
          found = true;
        }
      }
    }
    if (!found) throw DomainError("factorization_check: every candidate denominator vanishes");
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double kij = i == j ? kdiag[i] : K(grid[i], grid[j]);
      const double r = relative_residual(kij, rep.c * model(i, j), kdiag[i], kdiag[j]);
      if (r > rep.max_relative_residual || std::isnan(r)) {
        rep.max_relative_residual = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
        rep.worst_x = grid[i];
        rep.worst_y = grid[j];
      }
    }
  }
  return rep;
}

GaugeReport gauge_check(const HermiteBiehler& E1, const HermiteBiehler& E2,
                        const std::vector<double>& grid) {
  constexpr int kProbes = 4;
  const std::size_t n = grid.size();
  if (n == 0) throw DomainError("gauge_check: empty grid");

  std::vector<double> d1(n), d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d1[i] = db_kernel_eval(E1, grid[i], grid[i]);
    d2[i] = db_kernel_eval(E2, grid[i], grid[i]);
    if (!(d2[i] > 0.0) || !(d1[i] > 0.0))
      throw DomainError("gauge_check: kernel diagonal must be positive");
  }

  GaugeReport rep;
  rep.grid = grid;
  rep.W.resize(n);
  rep.zero_free = true;

  for (std::size_t j = 0; j < n; ++j) {
    // W(y)^2 from the diagonal, and r(x,y)^2 / r(x,x) from off-diagonal probes
    const double w2_diag = d1[j] / d2[j];
    std::vector<double> candidates{w2_diag};

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(grid[a] - grid[j]) < std::abs(grid[b] - grid[j]);
    });
    for (std::size_t i : order) {
      if (static_cast<int>(candidates.size()) >= kProbes) break;
      if (i == j) continue;
      const double k2 = db_kernel_eval(E2, grid[i], grid[j]);
      if (std::abs(k2) < 1e-8 * std::sqrt(d2[i] * d2[j])) continue;
      const double r = db_kernel_eval(E1, grid[i], grid[j]) / k2;
      candidates.push_back(r * r / (d1[i] / d2[i]));
    }

    const auto [lo, hi] = std::minmax_element(candidates.begin(), candidates.end());
    const double spread = (*hi - *lo) / std::abs(w2_diag);
    rep.constancy_residual = std::max(rep.constancy_residual, spread);

    double sign = 1.0;
    if (j > 0) {
      const double k2 = db_kernel_eval(E2, grid[0], grid[j]);
      if (std::abs(k2) >= 1e-8 * std::sqrt(d2[0] * d2[j])) {
        const double r = db_kernel_eval(E1, grid[0], grid[j]) / k2;
        sign = (r >= 0.0) == (rep.W[0] >= 0.0) ? 1.0 : -1.0;
      }
    }
    rep.W[j] = sign * std::sqrt(w2_diag);
    if (!(std::abs(rep.W[j]) > 1e-10)) rep.zero_free = false;
  }
  return rep;
}

}  // namespace dbk
