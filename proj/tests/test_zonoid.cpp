#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"

#include "flatproc/experiments.hpp"
#include "flatproc/special.hpp"
#include "flatproc/zonoid.hpp"

using namespace flatproc;

namespace {

SphereMeasure cube_measure(int n, double pair_mass) {
  std::vector<SpherePair> pairs;
  for (int i = 0; i < n; ++i) pairs.push_back({Vector::Unit(n, i), pair_mass});
  return SphereMeasure::atoms(n, pairs);
}

// Area of a centred zonogon from its edge cycle.
double zonogon_area(const Zonotope& z) {
  std::vector<Vector> edges;
  for (const auto& g : z.generators) {
    Vector e = 2.0 * g.half_length * g.u;
    if (e(1) < 0 || (e(1) == 0 && e(0) < 0)) e = -e;
    edges.push_back(e);
  }
  std::sort(edges.begin(), edges.end(),
            [](const Vector& a, const Vector& b) { return std::atan2(a(1), a(0)) < std::atan2(b(1), b(0)); });
  Vector p = Vector::Zero(2);
  for (const auto& e : edges) p -= 0.5 * e;  // lowest vertex
  double area = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& e : edges) {
      const Vector q = pass == 0 ? Vector(p + e) : Vector(p - e);
      area += p(0) * q(1) - q(0) * p(1);
      p = q;
    }
  }
  return 0.5 * std::abs(area);
}

// Hit-or-miss volume of a zonotope in R^3 using the facet normals u_i x u_j.
Estimate hull_volume_mc(const Zonotope& z, Rng& rng, std::size_t draws) {
  std::vector<Vector> normals;
  for (std::size_t i = 0; i < z.generators.size(); ++i)
    for (std::size_t j = i + 1; j < z.generators.size(); ++j) {
      Eigen::Vector3d a = z.generators[i].u, b = z.generators[j].u;
      const Eigen::Vector3d c = a.cross(b);
      if (c.norm() > 1e-9) normals.push_back(Vector(c.normalized()));
    }
  Vector box(3);
  for (int k = 0; k < 3; ++k) box(k) = support(z, Vector::Unit(3, k));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < draws; ++s) {
    Vector x(3);
    for (int k = 0; k < 3; ++k) x(k) = box(k) * u(rng);
    bool inside = true;
    for (const auto& v : normals)
      if (std::abs(x.dot(v)) > support(z, v)) {
        inside = false;
        break;
      }
    if (inside) ++hits;
  }
  const double vol = 8.0 * box.prod();
  const double p = static_cast<double>(hits) / static_cast<double>(draws);
  return {vol * p, vol * std::sqrt(p * (1 - p) / static_cast<double>(draws))};
}

}  // namespace

TEST_CASE("support function of the cube zonotope") {
  const Zonotope z = zonotope_from_measure(cube_measure(3, 1.0 / 3.0));
  CHECK(support(z, Vector::Ones(3)) == doctest::Approx(0.5));
  Rng rng(1);
  const Vector x = sample_unit_sphere(3, rng);
  CHECK(support(z, 2.0 * x) == doctest::Approx(2.0 * support(z, x)));
}

TEST_CASE("intrinsic volumes of the cube") {
  const Zonotope z = zonotope_from_measure(cube_measure(3, 1.0 / 3.0));
  CHECK(intrinsic_volume(z, 0) == doctest::Approx(1.0));
  CHECK(intrinsic_volume(z, 1) == doctest::Approx(1.0));
  CHECK(intrinsic_volume(z, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(intrinsic_volume(z, 3) == doctest::Approx(1.0 / 27.0));
  const Zonotope seg = zonotope_from_measure(SphereMeasure::atoms(3, {{Vector::Unit(3, 0), 1.0}}));
  CHECK(intrinsic_volume(seg, 1) == doctest::Approx(1.0));
  CHECK(intrinsic_volume(seg, 2) == 0.0);
}

TEST_CASE("parallel and serial intrinsic volumes agree") {
  Rng rng(4);
  for (int n = 2; n <= 6; ++n) {
    const Zonotope z = zonotope_from_measure(random_sphere_measure(n, 9, 1.5, rng));
    for (int m = 0; m <= n; ++m)
      CHECK(intrinsic_volume(z, m) == doctest::Approx(intrinsic_volume_serial(z, m)).epsilon(1e-12));
  }
}

TEST_CASE("planar zonotopes: area by the shoelace formula, V_1 as half perimeter") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const SphereMeasure mu = random_sphere_measure(2, 3 + trial % 4, 1.0 + trial, rng);
    const Zonotope z = zonotope_from_measure(mu);
    CHECK(intrinsic_volume(z, 2) == doctest::Approx(zonogon_area(z)).epsilon(1e-10));
    CHECK(intrinsic_volume(z, 1) == doctest::Approx(mu.total_mass()).epsilon(1e-12));
  }
}

TEST_CASE("volume matches Monte Carlo hull membership") {
  Rng rng(8);
  const Zonotope cube = zonotope_from_measure(cube_measure(3, 1.0 / 3.0));
  const Estimate c = hull_volume_mc(cube, rng, 100000);
  CHECK(c.value == doctest::Approx(1.0 / 27.0).epsilon(0.01));
  for (int trial = 0; trial < 3; ++trial) {
    const Zonotope z = zonotope_from_measure(random_sphere_measure(3, 5, 1.0, rng));
    const Estimate e = hull_volume_mc(z, rng, 400000);
    CHECK(std::abs(e.value - intrinsic_volume(z, 3)) < 4.0 * e.standard_error);
  }
}

TEST_CASE("V_1 matches the Monte Carlo mean width") {
  Rng rng(10);
  const int n = 4;
  const Zonotope z = zonotope_from_measure(random_sphere_measure(n, 6, 2.0, rng));
  double s = 0.0, s2 = 0.0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    const double h = support(z, sample_unit_sphere(n, rng));
    s += h;
    s2 += h * h;
  }
  const double mean = s / draws;
  const double se = std::sqrt((s2 / draws - mean * mean) / draws);
  const double factor = n * kappa(n) / (2.0 * kappa(n - 1)) * 2.0;
  CHECK(std::abs(factor * mean - intrinsic_volume(z, 1)) < 4.0 * factor * se);
}

TEST_CASE("homogeneity and rotation invariance of intrinsic volumes") {
  Rng rng(12);
  const SphereMeasure mu = random_sphere_measure(4, 7, 1.0, rng);
  const Matrix r = random_rotation(4, rng);
  std::vector<SpherePair> rotated;
  for (const auto& p : mu.pairs()) rotated.push_back({r * p.u, p.weight});
  const Zonotope z = zonotope_from_measure(mu);
  const Zonotope zr = zonotope_from_measure(SphereMeasure::atoms(4, rotated));
  for (double t : {2.0, 0.5}) {
    const Zonotope zt = zonotope_from_measure(mu.scaled(t));
    for (int m = 1; m <= 4; ++m)
      CHECK(intrinsic_volume(zt, m) == doctest::Approx(std::pow(t, m) * intrinsic_volume(z, m)).epsilon(1e-10));
  }
  for (int m = 1; m <= 4; ++m) CHECK(intrinsic_volume(zr, m) == doctest::Approx(intrinsic_volume(z, m)).epsilon(1e-10));
}

TEST_CASE("mu_q_r matches the ordered-tuple evaluation of its defining integral") {
  Rng rng(14);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + trial % 3;
    const SphereMeasure q = random_sphere_measure(n, 4, 1.0, rng);
    const auto points = q.point_masses();
    for (int r = 2; r <= n - 1; ++r) {
      // All ordered r-tuples of (signed) atoms of the even measure.
      std::vector<GrassmannAtom> oracle;
      std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
      for (;;) {
        std::vector<Vector> vs;
        double w = 1.0;
        for (std::size_t i : idx) {
          vs.push_back(points[i].first);
          w *= points[i].second;
        }
        const double det = nabla(vs);
        if (det > 1e-10) oracle.push_back({complement(orthonormalize(vs, n)), w * det});
        int pos = r - 1;
        while (pos >= 0 && ++idx[pos] == points.size()) idx[pos--] = 0;
        if (pos < 0) break;
      }
      const GrassmannMeasure expected = GrassmannMeasure::discrete(n, n - r, oracle).merged();
      const GrassmannMeasure got = mu_q_r(q, r);
      REQUIRE(got.atoms().size() == expected.atoms().size());
      for (const auto& a : got.atoms()) {
        auto it = std::find_if(expected.atoms().begin(), expected.atoms().end(),
                               [&](const GrassmannAtom& b) { return same_span(a.subspace, b.subspace); });
        REQUIRE(it != expected.atoms().end());
        CHECK(a.weight == doctest::Approx(it->weight).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("mu_q_r of the cube measure") {
  const GrassmannMeasure mu = mu_q_r(cube_measure(3, 1.0 / 3.0), 2);
  CHECK(mu.atoms().size() == 3);
  CHECK(mu.total_mass() == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(mu_q_r(cube_measure(3, 1.0), 3), Error);
  CHECK_THROWS_AS(mu_q_r(SphereMeasure::uniform(3, 1.0), 2), Error);
}

TEST_CASE("area measure total mass is proportional to the intrinsic volume") {
  Rng rng(16);
  for (int n = 3; n <= 5; ++n) {
    const SphereMeasure q = random_sphere_measure(n, n + 2, 1.0, rng);
    const Zonotope z = zonotope_from_measure(q);
    for (int r = 2; r <= n - 1; ++r) {
      const double mass = area_measure(q, r).total_mass();
      CHECK(binom(n, r) / (n * kappa(n - r)) * mass == doctest::Approx(intrinsic_volume(z, r)).epsilon(1e-10));
    }
  }
  CHECK(area_measure(SphereMeasure::atoms(3, {{Vector::Unit(3, 0), 1.0}}), 2).total_mass() == 0.0);
  const double cube = area_measure(cube_measure(3, 1.0 / 3.0), 2).total_mass();
  CHECK(binom(3, 2) / (3 * kappa(1)) * cube == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("area measure components rotate with the generators") {
  Rng rng(18);
  const SphereMeasure q = random_sphere_measure(4, 5, 1.0, rng);
  const Matrix r = random_rotation(4, rng);
  std::vector<SpherePair> rotated;
  for (const auto& p : q.pairs()) rotated.push_back({r * p.u, p.weight});
  std::vector<SubsphereComponent> expected;
  const SphereMeasure original = area_measure(q, 2);
  for (const auto& c : original.components()) expected.push_back({rotate(c.subspace, r), c.weight});
  CHECK(mixture_discrepancy(area_measure(SphereMeasure::atoms(4, rotated), 2), SphereMeasure::mixture(4, expected)) <
        1e-10);
}
