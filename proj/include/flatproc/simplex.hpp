#pragma once

#include "flatproc/core.hpp"

namespace flatproc {

// maximize c'x  subject to  A x <= b,  x >= 0   (b may have any sign).
struct LinearProgram {
  Matrix a;
  Vector b;
  Vector c;
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Optimal;
  double value = 0.0;
  Vector x;
  std::size_t pivots = 0;
};

// Dense two-phase tableau simplex with Bland's anti-cycling rule.
LpResult solve_lp(const LinearProgram& lp, double eps = 1e-11);

}  // namespace flatproc
