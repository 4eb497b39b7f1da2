#pragma once

#include <cstdint>
#include <vector>

#include "flatproc/derived.hpp"
#include "flatproc/simulator.hpp"
#include "flatproc/stats.hpp"
#include "flatproc/window.hpp"

namespace flatproc {

// Smallest flat-sampling radius that makes enumeration of segments with midpoint in A exact.
double enumeration_radius(const WindowDescriptor& a, double delta);

// One replication of F_alpha(A, C).
double simulate_f_alpha(const FlatProcessSpec& spec, const WindowDescriptor& a, double delta, double alpha,
                        const DirectionSet& c, Rng& rng);
// F_alpha for several exponents on a single realization.
std::vector<double> simulate_f_alpha(const FlatProcessSpec& spec, const WindowDescriptor& a, double delta,
                                     const std::vector<double>& alphas, const DirectionSet& c, Rng& rng);

// rho^(n alpha / (n - 2k)) times the smallest d^alpha over segments with midpoint in rho A.
// Returns +inf when no segment of length at most delta qualifies.
double simulate_scaled_minimum(const FlatProcessSpec& spec, const WindowDescriptor& a, double rho, double delta,
                               double alpha, const DirectionSet& c, Rng& rng);

// Number of r-fold intersection flats hitting the closed unit ball.
double simulate_intersection_count(const FlatProcessSpec& spec, int r, Rng& rng);

// Points of the cube process with N^(kappa) points per unit cube.
PointSampler cube_process_sampler(int d, int kappa, CubeIndexBox box, bool stationarize);

// Random even atomic measure with `pairs` directions and total mass `mass`.
SphereMeasure random_sphere_measure(int n, std::size_t pairs, double mass, Rng& rng);
// Random discrete directional distribution on G(n,k) (probability measure).
GrassmannMeasure random_grassmann_measure(int n, int k, std::size_t atoms, Rng& rng);

// Largest weight mismatch after matching components of two subsphere mixtures by span;
// +inf if the supports differ.
double mixture_discrepancy(const SphereMeasure& a, const SphereMeasure& b, double span_tol = 1e-8);

}  // namespace flatproc
