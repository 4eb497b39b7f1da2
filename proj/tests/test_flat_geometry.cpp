#include <cmath>
#include <numbers>

#include "doctest.h"

#include "flatproc/flat_geometry.hpp"

using namespace flatproc;

namespace {

// Classical Gram-Schmidt, used as an oracle against the QR-based routine.
Matrix gram_schmidt(const std::vector<Vector>& vs) {
  std::vector<Vector> out;
  for (Vector v : vs) {
    for (const auto& q : out) v -= v.dot(q) * q;
    if (v.norm() > 1e-10) out.push_back(v.normalized());
  }
  Matrix m(vs.front().size(), static_cast<Eigen::Index>(out.size()));
  for (std::size_t i = 0; i < out.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = out[i];
  return m;
}

Subspace line(const Vector& u) { return orthonormalize(std::vector<Vector>{u}, static_cast<int>(u.size())); }

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("orthonormalize spans the same space as Gram-Schmidt") {
  Rng rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 4;
    std::vector<Vector> vs;
    for (int i = 0; i < n - 1; ++i) {
      Vector v(n);
      for (int j = 0; j < n; ++j) v(j) = g(rng);
      vs.push_back(v);
    }
    vs.push_back(vs[0] + 2.0 * vs[1]);  // dependent column must be dropped
    const Subspace s = orthonormalize(vs, n);
    const Matrix gs = gram_schmidt(vs);
    CHECK(s.k() == n - 1);
    CHECK((s.projector() - gs * gs.transpose()).norm() < 1e-10);
  }
}

TEST_CASE("from_orthonormal rejects non-orthonormal columns") {
  Matrix m(3, 2);
  m << 1, 1, 0, 1, 0, 0;
  CHECK_THROWS_AS(Subspace::from_orthonormal(m), Error);
}

TEST_CASE("subspace determinant of complementary subspaces is |det| of the joined bases") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 3;
    const int k = 1 + trial % (n - 1);
    const Subspace a = haar_sample(n, k, rng);
    const Subspace b = haar_sample(n, n - k, rng);
    Matrix joined(n, n);
    joined << a.basis(), b.basis();
    CHECK(subspace_determinant(a, b) == doctest::Approx(std::abs(joined.determinant())).epsilon(1e-10));
  }
}

TEST_CASE("two lines: determinant is the sine of the angle") {
  const double t = 0.7;
  const Subspace a = line(vec({1, 0, 0}));
  const Subspace b = line(vec({std::cos(t), std::sin(t), 0}));
  CHECK(subspace_determinant(a, b) == doctest::Approx(std::sin(t)));
  CHECK(subspace_determinant(a, a) == doctest::Approx(0.0));
}

TEST_CASE("high-dimension regime uses complements") {
  // Two planes in R^3: [L, M] equals the determinant of their normals.
  const double t = 0.4;
  const Subspace a = complement(line(vec({0, 0, 1})));
  const Subspace b = complement(line(vec({0, std::sin(t), std::cos(t)})));
  CHECK(subspace_determinant(a, b) == doctest::Approx(std::sin(t)));
}

TEST_CASE("nabla equals the square root of the Gram determinant") {
  Rng rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vector> vs;
    Matrix m(5, 3);
    for (int i = 0; i < 3; ++i) {
      vs.push_back(Vector::NullaryExpr(5, [&](Eigen::Index) { return g(rng); }));
      m.col(i) = vs.back();
    }
    CHECK(nabla(vs) == doctest::Approx(std::sqrt((m.transpose() * m).determinant())).epsilon(1e-10));
  }
}

TEST_CASE("complement, span_sum and intersect") {
  Rng rng(8);
  const Subspace a = haar_sample(5, 2, rng);
  const Subspace c = complement(a);
  CHECK(c.k() == 3);
  CHECK((a.projector() + c.projector() - Matrix::Identity(5, 5)).norm() < 1e-10);
  const Subspace b = haar_sample(5, 2, rng);
  CHECK(span_sum(a, b).k() == 4);
  const Subspace p = haar_sample(5, 4, rng), q = haar_sample(5, 3, rng);
  const std::vector<Subspace> pq{p, q};
  const Subspace i = intersect(pq);
  CHECK(i.k() == 2);
  for (int j = 0; j < i.k(); ++j) {
    CHECK((p.projector() * i.basis_vector(j) - i.basis_vector(j)).norm() < 1e-10);
    CHECK((q.projector() * i.basis_vector(j) - i.basis_vector(j)).norm() < 1e-10);
  }
}

TEST_CASE("closest pair of two flats matches an SVD least-squares oracle") {
  Rng rng(21);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 3;
    const int k1 = 1, k2 = n - 2 - (trial % 2 == 0 || n == 3 ? 0 : 1);
    const Flat e(haar_sample(n, k1, rng), Vector::NullaryExpr(n, [&](Eigen::Index) { return g(rng); }));
    const Flat f(haar_sample(n, k2, rng), Vector::NullaryExpr(n, [&](Eigen::Index) { return g(rng); }));
    // Minimize |o_e + B_e s - o_f - B_f t| directly.
    Matrix sys(n, k1 + k2);
    sys << e.direction().basis(), -f.direction().basis();
    const Vector st = sys.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(f.offset() - e.offset());
    const Vector pe = e.offset() + e.direction().basis() * st.head(k1);
    const Vector pf = f.offset() + f.direction().basis() * st.tail(k2);
    const auto res = closest_pair(e, f);
    REQUIRE(std::holds_alternative<ProximitySegment>(res));
    const auto& seg = std::get<ProximitySegment>(res);
    CHECK(seg.length == doctest::Approx((pe - pf).norm()).epsilon(1e-9));
    CHECK((seg.midpoint - 0.5 * (pe + pf)).norm() < 1e-9);
    CHECK(std::abs(std::abs(seg.direction.dot((pf - pe).normalized())) - 1.0) < 1e-9);
  }
}

TEST_CASE("closest pair in the intersection regime returns the common flat") {
  const Flat e(complement(line(vec({0, 0, 1}))), vec({0, 0, 1}));  // plane z = 1
  const Flat f(complement(line(vec({1, 0, 0}))), vec({2, 0, 0}));  // plane x = 2
  const auto res = closest_pair(e, f);
  REQUIRE(std::holds_alternative<Flat>(res));
  const Flat& l = std::get<Flat>(res);
  CHECK(l.k() == 1);
  CHECK(l.distance_to(vec({2, 5, 1})) < 1e-12);
}

TEST_CASE("parallel lines are a degenerate pair") {
  const Flat e(line(vec({1, 0, 0})), vec({0, 0, 0}));
  const Flat f(line(vec({1, 0, 0})), vec({0, 1, 0}));
  CHECK_THROWS_WITH_AS(closest_pair(e, f), "degenerate pair", Error);
}

TEST_CASE("intersect_flats finds the common point of three planes") {
  const Vector x = vec({1, -2, 3});
  std::vector<Flat> planes;
  for (const Vector& nrm : {vec({1, 0, 0}), vec({1, 1, 0}), vec({0, 1, 1})})
    planes.emplace_back(complement(line(nrm)), x);
  const Flat p = intersect_flats(planes);
  CHECK(p.k() == 0);
  CHECK((p.offset() - x).norm() < 1e-10);
}

TEST_CASE("Haar samples are orthonormal and isotropic on average") {
  Rng rng(2);
  double second_moment = 0.0;
  const int reps = 20000;
  for (int i = 0; i < reps; ++i) {
    const Subspace s = haar_sample(4, 1, rng);
    CHECK((s.basis().transpose() * s.basis() - Matrix::Identity(1, 1)).norm() < 1e-12);
    second_moment += s.basis()(0, 0) * s.basis()(0, 0);
  }
  CHECK(second_moment / reps == doctest::Approx(0.25).epsilon(0.05));
  CHECK(haar_sample(4, 0, rng).k() == 0);
  CHECK(haar_sample(4, 4, rng).k() == 4);
}

TEST_CASE("principal angles and the direct-rotation distance") {
  const double t = 0.9;
  const Subspace a = line(vec({1, 0, 0}));
  const Subspace b = line(vec({std::cos(t), std::sin(t), 0}));
  const auto cs = principal_cosines(a, b);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0] == doctest::Approx(std::cos(t)));
  // Oracle: the direct rotation of the plane e1,e2 by t, embedded in R^3.
  Matrix r = Matrix::Identity(3, 3);
  r.topLeftCorner(2, 2) << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  CHECK(grassmann_distance(a, b) == doctest::Approx((r - Matrix::Identity(3, 3)).squaredNorm()));
  CHECK(grassmann_metric(a, b) == doctest::Approx((r - Matrix::Identity(3, 3)).norm()));
}

TEST_CASE("grassmann_metric satisfies the triangle inequality, the squared form does not") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Subspace a = haar_sample(4, 2, rng), b = haar_sample(4, 2, rng), c = haar_sample(4, 2, rng);
    CHECK(grassmann_metric(a, c) <= grassmann_metric(a, b) + grassmann_metric(b, c) + 1e-9);
  }
  // Three coplanar lines at angles 0, pi/4, pi/2.
  const Subspace x = line(vec({1, 0})), y = line(vec({1, 1})), z = line(vec({0, 1}));
  CHECK(grassmann_distance(x, z) > grassmann_distance(x, y) + grassmann_distance(y, z));
}

TEST_CASE("same_span and canonical_sign") {
  Rng rng(4);
  const Subspace a = haar_sample(5, 3, rng);
  const Subspace b = rotate(a, Matrix::Identity(5, 5));
  CHECK(same_span(a, b));
  CHECK_FALSE(same_span(a, haar_sample(5, 3, rng)));
  const Vector u = canonical_sign(vec({0, -1e-14, -2, 1}));
  CHECK(u(2) > 0.0);
}

TEST_CASE("rotations preserve determinants") {
  Rng rng(9);
  const Subspace a = haar_sample(4, 1, rng), b = haar_sample(4, 2, rng);
  const Matrix r = random_rotation(4, rng);
  CHECK((r.transpose() * r - Matrix::Identity(4, 4)).norm() < 1e-12);
  CHECK(subspace_determinant(rotate(a, r), rotate(b, r)) == doctest::Approx(subspace_determinant(a, b)));
}
