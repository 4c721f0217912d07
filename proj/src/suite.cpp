#include "dbk/suite.hpp"

#include <algorithm>

#include "dbk/rng.hpp"

namespace dbk::krein {

SuiteShape random_suite_shape(std::uint64_t seed) {
  CounterRng rng(seed, 1);
  SuiteShape s;
  s.n = 2 + static_cast<int>(rng.next() % 11);
  s.m = std::min(16, s.n + 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(16 - s.n)));
  return s;
}

FiniteRankSpace random_polynomial_space(int m, int n, std::uint64_t seed) {
  if (n < 2 || m < n + 1) throw DomainError("random space: need n >= 2 and m >= n + 1");
  CounterRng rng(seed, 0);
  auto sym = [&] { return 2.0 * rng.uniform() - 1.0; };
  const double center = sym();
  const double spacing = (2.5 + 1.5 * sym()) / m;
  std::vector<double> points, weights;
  for (int i = 0; i < m; ++i) {
    points.push_back(center + spacing * (i + 0.4 * sym()));
    weights.push_back(0.5 + 1.5 * rng.uniform());
  }
  return make_polynomial_space(std::move(points), std::move(weights), n);
}

}  // namespace dbk::krein
