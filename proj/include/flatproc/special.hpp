#pragma once

#include <cmath>
#include <numbers>

namespace flatproc {

// Volume of the unit j-ball.
inline double kappa(int j) {
  return std::pow(std::numbers::pi, 0.5 * j) / std::tgamma(0.5 * j + 1.0);
}

// Surface area of the unit sphere in R^j (so omega(1) = 2 counts the two points of S^0).
inline double omega(int j) { return j * kappa(j); }

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace flatproc
