#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "flatproc/core.hpp"

namespace flatproc {

// Linear subspace of R^n stored by an orthonormal basis (columns of an n x k matrix).
class Subspace {
 public:
  Subspace() = default;
  // Zero subspace of R^n.
  explicit Subspace(int n);
  // Takes ownership of an orthonormal basis; throws if the columns are not orthonormal.
  static Subspace from_orthonormal(Matrix basis);

  int n() const { return n_; }
  int k() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }
  Vector basis_vector(int i) const { return basis_.col(i); }
  Matrix projector() const { return basis_ * basis_.transpose(); }

 private:
  int n_ = 0;
  Matrix basis_;
};

// Affine subspace L + x with x in the orthogonal complement of L.
class Flat {
 public:
  Flat() = default;
  // Any point of the flat is accepted; the stored offset is its projection onto L^perp.
  Flat(Subspace direction, const Vector& point);

  int n() const { return direction_.n(); }
  int k() const { return direction_.k(); }
  const Subspace& direction() const { return direction_; }
  const Vector& offset() const { return offset_; }
  double distance_to(const Vector& x) const;
  Flat translated(const Vector& z) const { return Flat(direction_, offset_ + z); }

 private:
  Subspace direction_;
  Vector offset_;
};

struct ProximitySegment {
  Vector midpoint;
  double length = 0.0;
  Vector direction;  // unit, sign-canonical
  std::size_t i = 0;
  std::size_t j = 0;
  Vector foot_e;
  Vector foot_f;
};

using ClosestPairResult = std::variant<ProximitySegment, Flat>;

inline constexpr double kGeneralPositionTol = 1e-10;

Subspace orthonormalize(const std::vector<Vector>& vectors, int n);
Subspace orthonormalize(const Matrix& columns);

double subspace_determinant(std::span<const Subspace> subspaces);
double subspace_determinant(const Subspace& a, const Subspace& b);
// Volume of the parallelepiped spanned by the given vectors.
double nabla(std::span<const Vector> vectors);

Subspace complement(const Subspace& u);
Subspace span_sum(const Subspace& a, const Subspace& b);
Subspace intersect(std::span<const Subspace> subspaces);

// Proximity regime (k1+k2 < n) gives a segment, intersection regime gives a flat.
// Throws Error("degenerate pair") when the pair is not in general position.
ClosestPairResult closest_pair(const Flat& e, const Flat& f);
// Common flat of r affine subspaces in general position (sum of dims >= (r-1)n).
Flat intersect_flats(std::span<const Flat> flats);

Subspace haar_sample(int n, int k, Rng& rng);
Matrix random_rotation(int n, Rng& rng);
Subspace rotate(const Subspace& u, const Matrix& rotation);

// Cosines of the principal angles, clamped to [0,1], largest first.
std::vector<double> principal_cosines(const Subspace& a, const Subspace& b);
double grassmann_distance(const Subspace& a, const Subspace& b);
// Frobenius norm of (direct rotation - identity): sqrt of grassmann_distance, a true metric.
double grassmann_metric(const Subspace& a, const Subspace& b);
bool same_span(const Subspace& a, const Subspace& b, double tol = 1e-8);

// Representative of {u, -u} whose first non-negligible coordinate is positive.
Vector canonical_sign(const Vector& u);

}  // namespace flatproc
