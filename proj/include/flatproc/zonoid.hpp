#pragma once

#include <vector>

#include "flatproc/measures.hpp"

namespace flatproc {

struct ZonotopeGenerator {
  Vector u;                  // unit direction (sign-canonical)
  double half_length = 0.0;  // segment endpoints are +-half_length * u
};

// Minkowski sum of centred segments.
struct Zonotope {
  int n = 0;
  std::vector<ZonotopeGenerator> generators;
};

// A pair of mass q becomes the segment [-(q/2)u, (q/2)u].
Zonotope zonotope_from_measure(const SphereMeasure& mu);
double support(const Zonotope& z, const Vector& x);

// Sum over m-subsets of generators of (product of full lengths) * nabla_m; OpenMP-parallel.
double intrinsic_volume(const Zonotope& z, int m);
double intrinsic_volume_serial(const Zonotope& z, int m);

// Atoms u_1^perp cap ... cap u_r^perp over unordered r-sets of distinct pairs, weight
// r! * prod(pair masses) * nabla_r; equal subspaces are merged.
GrassmannMeasure mu_q_r(const SphereMeasure& q, int r);
// S_r(Z_Q, .) as a mixture of subsphere measures.
SphereMeasure area_measure(const SphereMeasure& q, int r);

}  // namespace flatproc
