#include <cmath>
#include <sstream>

#include "doctest.h"

#include "flatproc/closed_form.hpp"
#include "flatproc/experiments.hpp"
#include "flatproc/simulator.hpp"
#include "flatproc/special.hpp"
#include "flatproc/stats.hpp"

using namespace flatproc;

namespace {

Subspace coordinate_anchor(int n, int k) {
  std::vector<Vector> axes;
  for (int i = k; i < n; ++i) axes.push_back(Vector::Unit(n, i));
  return orthonormalize(axes, n);
}

}  // namespace

TEST_CASE("factorial distributions for kappa = 3 and 4") {
  const auto d3 = build_factorial_distribution(3);
  const std::vector<Fraction> t3{Fraction(1, 3), Fraction(1, 2), Fraction(0), Fraction(1, 6)};
  CHECK(d3.exact() == t3);
  const auto d4 = build_factorial_distribution(4);
  const std::vector<Fraction> t4{Fraction(3, 8), Fraction(1, 3), Fraction(1, 4), Fraction(0), Fraction(1, 24)};
  CHECK(d4.exact() == t4);
  CHECK_THROWS_AS(build_factorial_distribution(1), Error);
}

TEST_CASE("factorial moments equal one up to order kappa") {
  for (int kappa = 2; kappa <= 12; ++kappa) {
    const auto d = build_factorial_distribution(kappa);
    for (int m = 1; m <= kappa; ++m) {
      CHECK(d.factorial_moment_exact(m) == Fraction(1));
      CHECK(d.factorial_moment(m) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(d.factorial_moment_exact(kappa + 1) == Fraction(0));
  }
}

TEST_CASE("factorial distribution sampling frequencies") {
  const auto d = build_factorial_distribution(4);
  Rng rng(3);
  std::vector<int> counts(5, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[d.sample(rng)];
  for (int i = 0; i <= 4; ++i) {
    const double p = d.probabilities()[i];
    CHECK(std::abs(counts[i] / double(draws) - p) <= 4.0 * std::sqrt(p * (1 - p) / draws) + 1e-12);
  }
}

TEST_CASE("Poisson flats: count, distances and orthogonal offsets") {
  Rng rng(5);
  for (int k = 1; k <= 2; ++k) {
    const int n = 4;
    const double gamma = 0.7, radius = 1.5;
    const auto spec = FlatProcessSpec::poisson(gamma, GrassmannMeasure::isotropic(n, k, 1.0));
    const double expected = gamma * kappa(n - k) * std::pow(radius, n - k);
    double total = 0.0;
    const int reps = 2000;
    for (int r = 0; r < reps; ++r) {
      const FlatSample s = sample_flats(spec, radius, rng);
      total += static_cast<double>(s.flats.size());
      for (const auto& f : s.flats) {
        CHECK(f.offset().norm() <= radius + 1e-12);
        CHECK((f.direction().basis().transpose() * f.offset()).norm() < 1e-10);
      }
    }
    CHECK(std::abs(total / reps - expected) < 4.0 * std::sqrt(expected / reps));
  }
  CHECK_THROWS_AS(FlatProcessSpec::poisson(-1.0, GrassmannMeasure::isotropic(3, 1, 1.0)), Error);
  CHECK_THROWS_AS(FlatProcessSpec::poisson(1.0, GrassmannMeasure::isotropic(3, 1, 2.0)), Error);
  Rng r2(1);
  CHECK(sample_flats(FlatProcessSpec::poisson(0.0, GrassmannMeasure::isotropic(3, 1, 1.0)), 2.0, r2).flats.empty());
}

TEST_CASE("Poisson flats follow a discrete directional distribution") {
  Rng rng(7);
  const Subspace a = haar_sample(3, 1, rng), b = haar_sample(3, 1, rng);
  const auto spec = FlatProcessSpec::poisson(2.0, GrassmannMeasure::discrete(3, 1, {{a, 0.25}, {b, 0.75}}));
  std::size_t na = 0, all = 0;
  for (int r = 0; r < 500; ++r) {
    for (const auto& f : sample_flats(spec, 2.0, rng).flats) {
      ++all;
      if (same_span(f.direction(), a)) ++na;
    }
  }
  const double p = double(na) / double(all);
  CHECK(std::abs(p - 0.25) < 4.0 * std::sqrt(0.25 * 0.75 / double(all)));
}

TEST_CASE("flat samples round-trip through the text format") {
  Rng rng(9);
  const auto spec = FlatProcessSpec::poisson(1.0, GrassmannMeasure::isotropic(4, 2, 1.0));
  const FlatSample s = sample_flats(spec, 1.2, rng, 99);
  std::stringstream ss;
  write_flat_sample(ss, s);
  const FlatSample back = read_flat_sample(ss);
  CHECK(back.seed == 99);
  REQUIRE(back.flats.size() == s.flats.size());
  for (std::size_t i = 0; i < s.flats.size(); ++i) {
    CHECK((back.flats[i].offset() - s.flats[i].offset()).norm() < 1e-14);
    CHECK(same_span(back.flats[i].direction(), s.flats[i].direction(), 1e-12));
  }
}

TEST_CASE("cube process has unit intensity and respects the box") {
  Rng rng(11);
  const auto d = build_factorial_distribution(3);
  const CubeIndexBox box{{0, 0}, {4, 3}};
  CHECK(box.cube_count() == 12);
  for (bool stationarize : {false, true}) {
    double total = 0.0;
    const int reps = 4000;
    for (int r = 0; r < reps; ++r) {
      const auto pts = sample_cube_process(2, d, box, rng, stationarize);
      total += static_cast<double>(pts.size());
      for (const auto& p : pts) {
        CHECK(p.x(0) >= 0.0);
        CHECK(p.x(0) < 4.0);
        CHECK(p.x(1) >= 0.0);
        CHECK(p.x(1) < 3.0);
      }
    }
    // Var N = 1 for kappa >= 2 (second factorial moment 1), so the count has variance 12.
    CHECK(std::abs(total / reps - 12.0) < 4.0 * std::sqrt(12.0 / reps));
  }
}

TEST_CASE("Q0 acceptance rate equals the Haar mean of [E0, L]") {
  Rng rng(13);
  const int n = 3, k = 1;
  const Subspace anchor = coordinate_anchor(n, k);
  std::size_t trials = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const Q0Draw q = sample_q0(anchor, k, rng);
    CHECK(q.direction.k() == k);
    trials += q.trials;
  }
  const double rate = draws / double(trials);
  CHECK(rate == doctest::Approx(c_constant(n, n - k, k)).epsilon(0.03));
}

TEST_CASE("cube-construction flats hit the unit ball at rate gamma kappa") {
  Rng rng(15);
  const auto spec = FlatProcessSpec::sr_construction(3, 1, 3, coordinate_anchor(3, 1));
  CHECK(spec.gamma == doctest::Approx(1.0 / c_constant(3, 2, 1)));
  std::vector<double> counts;
  for (int r = 0; r < 400; ++r) {
    const FlatSample s = sample_flats(spec, 1.0, rng);
    REQUIRE(s.groups.size() == s.flats.size());
    for (const auto& f : s.flats) CHECK(f.offset().norm() <= 1.0 + 1e-12);
    counts.push_back(static_cast<double>(s.flats.size()));
  }
  const ReplicationResult res = summarize(counts);
  CHECK(std::abs(res.mean - spec.gamma * kappa(2)) < 4.0 * res.standard_error);
  CHECK_THROWS_AS(FlatProcessSpec::sr_construction(3, 1, 1, coordinate_anchor(3, 1)), Error);
  CHECK_THROWS_AS(FlatProcessSpec::sr_construction(3, 1, 3, coordinate_anchor(3, 2)), Error);
}
