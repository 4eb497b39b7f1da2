#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "flatproc/flat_geometry.hpp"

namespace flatproc {

inline constexpr std::size_t kDefaultMcSamples = 100000;

struct GrassmannAtom {
  Subspace subspace;
  double weight = 0.0;
};

// Finite measure on G(n,k): a weighted atom list or a multiple of the Haar measure.
class GrassmannMeasure {
 public:
  static GrassmannMeasure discrete(int n, int k, std::vector<GrassmannAtom> atoms);
  static GrassmannMeasure isotropic(int n, int k, double mass);

  int n() const { return n_; }
  int k() const { return k_; }
  bool is_isotropic() const { return isotropic_; }
  const std::vector<GrassmannAtom>& atoms() const { return atoms_; }
  double total_mass() const;
  GrassmannMeasure scaled(double t) const;
  // Atoms with equal span (projector distance < tol) are combined.
  GrassmannMeasure merged(double tol = 1e-8) const;
  // Draws a subspace from the normalized measure.
  Subspace sample(Rng& rng) const;

 private:
  int n_ = 0;
  int k_ = 0;
  bool isotropic_ = false;
  double iso_mass_ = 0.0;
  std::vector<GrassmannAtom> atoms_;
};

// One unordered pair {u, -u}; the weight is the mass of the pair (each point carries half).
struct SpherePair {
  Vector u;
  double weight = 0.0;
};

struct SubsphereComponent {
  Subspace subspace;
  double weight = 0.0;  // multiplies spherical Lebesgue measure on the unit sphere of the subspace
};

// Even finite measure on S^{n-1}.
class SphereMeasure {
 public:
  enum class Kind { AtomsEven, Uniform, SubsphereMixture };

  static SphereMeasure atoms(int n, std::vector<SpherePair> pairs);
  static SphereMeasure uniform(int n, double mass);
  static SphereMeasure mixture(int n, std::vector<SubsphereComponent> components);

  int n() const { return n_; }
  Kind kind() const { return kind_; }
  const std::vector<SpherePair>& pairs() const { return pairs_; }
  const std::vector<SubsphereComponent>& components() const { return components_; }
  double uniform_mass() const { return uniform_mass_; }
  double total_mass() const;
  SphereMeasure scaled(double t) const;
  SphereMeasure merged(double tol = 1e-8) const;
  // Point masses of the support, each of {u,-u} listed separately (atomic kinds only).
  std::vector<std::pair<Vector, double>> point_masses() const;

 private:
  int n_ = 0;
  Kind kind_ = Kind::AtomsEven;
  double uniform_mass_ = 0.0;
  std::vector<SpherePair> pairs_;
  std::vector<SubsphereComponent> components_;
};

// Even Borel set of directions.
class DirectionSet {
 public:
  enum class Tag { FullSphere, DoubleCap, Custom };

  static DirectionSet full_sphere(int n);
  // Directions u with |<u, axis>| >= threshold.
  static DirectionSet double_cap(const Vector& axis, double threshold);
  // Validates evenness on random probes; throws if the predicate is not even.
  static DirectionSet custom(int n, std::function<bool(const Vector&)> predicate,
                             std::uint64_t probe_seed = 1);

  int n() const { return n_; }
  Tag tag() const { return tag_; }
  const Vector& axis() const { return axis_; }
  double threshold() const { return threshold_; }
  bool contains(const Vector& u) const;
  // Spherical Lebesgue measure of C intersected with the unit sphere of U.
  Estimate subsphere_measure(const Subspace& u, Rng& rng,
                             std::size_t samples = kDefaultMcSamples) const;
  std::string describe() const;

 private:
  int n_ = 0;
  Tag tag_ = Tag::FullSphere;
  Vector axis_;
  double threshold_ = 0.0;
  std::function<bool(const Vector&)> predicate_;
};

SphereMeasure symmetrize_line_measure(const GrassmannMeasure& q);
SphereMeasure symmetrize_hyperplane_measure(const GrassmannMeasure& q);

Vector sample_unit_sphere(int n, Rng& rng);
Vector sample_subsphere(const Subspace& u, Rng& rng);

Estimate integrate(const SphereMeasure& mu, const std::function<double(const Vector&)>& f, Rng& rng,
                   std::size_t samples = kDefaultMcSamples);
Estimate integrate(const GrassmannMeasure& mu, const std::function<double(const Subspace&)>& f,
                   Rng& rng, std::size_t samples = kDefaultMcSamples);

// Exact value of u -> integral of |<u,v>| mu(dv).
double cosine_transform(const SphereMeasure& mu, const Vector& u);
// Deterministic quasi-uniform directions (even sets need only one of each pair).
std::vector<Vector> quasi_uniform_directions(int n, std::size_t count);
double min_cosine_transform(const SphereMeasure& mu, std::size_t grid = 10000);
bool lower_bound_check(const SphereMeasure& mu, double rho);

SphereMeasure t_lift(const GrassmannMeasure& mu);

// Directional-distribution text format: header "n k", then "isotropic <mass>" or
// lines "<weight> <k*n floats row-major basis>".
GrassmannMeasure read_grassmann_measure(std::istream& in);
GrassmannMeasure read_grassmann_measure_file(const std::string& path);
void write_grassmann_measure(std::ostream& out, const GrassmannMeasure& mu);

}  // namespace flatproc
