#pragma once

#include <cstdint>

#include "dbk/krein.hpp"

// Reproducible random polynomial spaces for the pipeline suites.
namespace dbk::krein {

struct SuiteShape {
  int m = 0;
  int n = 0;
};

/// n in [2, 12], m in [n + 1, 16], drawn from `seed`.
SuiteShape random_suite_shape(std::uint64_t seed);

/// m jittered points with span 1.5 to 4 near the origin, weights in
/// [0.5, 2], and the first n orthonormal polynomials.
FiniteRankSpace random_polynomial_space(int m, int n, std::uint64_t seed);

}  // namespace dbk::krein
