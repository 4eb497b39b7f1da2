#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "flatproc/measures.hpp"

namespace flatproc {

using Fraction = boost::rational<long long>;

// Cube-based construction of a non-Poisson process with finite factorial-moment order.
struct SrConstruction {
  int kappa = 2;
  Subspace anchor;             // E_0, dimension n-k
  double anchor_radius = 0.0;  // cubes cover [-A, A]^(n-k) in E_0; 0 selects 64 R + 2
  bool stationarize = false;
};

struct FlatProcessSpec {
  enum class Kind { Poisson, Sr };

  int n = 0;
  int k = 0;
  double gamma = 0.0;
  GrassmannMeasure q = GrassmannMeasure::isotropic(1, 0, 1.0);
  Kind kind = Kind::Poisson;
  std::optional<SrConstruction> sr;

  // Intensity 0 is accepted and yields empty samples.
  static FlatProcessSpec poisson(double gamma, GrassmannMeasure q);
  // Intensity and directional distribution follow from the construction: gamma = 1 / c(n, n-k, k), isotropic.
  static FlatProcessSpec sr_construction(int n, int k, int kappa, Subspace anchor, double anchor_radius = 0.0,
                                         bool stationarize = false);
};

struct FlatSample {
  int n = 0;
  int k = 0;
  double window_radius = 0.0;
  std::uint64_t seed = 0;
  std::vector<Flat> flats;
  std::vector<long long> groups;  // anchor cube of each flat (-1 for Poisson samples)
};

void write_flat_sample(std::ostream& out, const FlatSample& s);
FlatSample read_flat_sample(std::istream& in);

class FactorialDistribution {
 public:
  int kappa() const { return kappa_; }
  const std::vector<Fraction>& exact() const { return exact_; }
  const std::vector<double>& probabilities() const { return probs_; }
  Fraction factorial_moment_exact(int m) const;
  double factorial_moment(int m) const;
  int sample(Rng& rng) const;

  friend FactorialDistribution build_factorial_distribution(int kappa);

 private:
  int kappa_ = 0;
  std::vector<Fraction> exact_;
  std::vector<double> probs_;
};

// N with support {0,...,kappa-2, kappa} and all factorial moments up to order kappa equal to 1.
FactorialDistribution build_factorial_distribution(int kappa);

struct CubeIndexBox {
  std::vector<long long> lo;  // inclusive
  std::vector<long long> hi;  // exclusive
  long long cube_count() const;
};

struct CubePoint {
  Vector x;
  long long cube = 0;  // linear index of the generating cube (before any shift)
};

std::vector<CubePoint> sample_cube_process(int d, const FactorialDistribution& dist, const CubeIndexBox& box,
                                           Rng& rng, bool stationarize);

struct Q0Draw {
  Subspace direction;
  std::size_t trials = 0;
};

// Haar draw on G(n,k) accepted with probability [E_0, L].
Q0Draw sample_q0(const Subspace& anchor, int k, Rng& rng);

FlatSample sample_poisson(const FlatProcessSpec& spec, double radius, Rng& rng, std::uint64_t seed_record = 0);
FlatSample sample_sr_flats(const FlatProcessSpec& spec, double radius, Rng& rng, std::uint64_t seed_record = 0);
FlatSample sample_flats(const FlatProcessSpec& spec, double radius, Rng& rng, std::uint64_t seed_record = 0);

}  // namespace flatproc
