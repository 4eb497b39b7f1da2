// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "flatproc/closed_form.hpp"
#include "flatproc/experiments.hpp"
#include "flatproc/metrics.hpp"
#include "flatproc/simulator.hpp"
#include "flatproc/special.hpp"
#include "flatproc/stats.hpp"
#include "flatproc/zonoid.hpp"

using namespace flatproc;

namespace {

constexpr double pi = std::numbers::pi;

int failures = 0;

void report(int id, bool ok, const std::string& detail, double seconds) {
  std::printf("%s criterion %d: %s [%.1fs]\n", ok ? "PASS" : "FAIL", id, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const GrassmannMeasure kIsoLines = GrassmannMeasure::isotropic(3, 1, 1.0);

// F_0 of isotropic Poisson lines in the unit cube. The variance of F_0 is about 2.26, so 10^4
// replications give SE 0.015; 2.5 * 10^4 replications are needed for SE <= 0.01.
void proximity_vs_simulation() {
  Timer t;
  const auto spec = FlatProcessSpec::poisson(1.0, kIsoLines);
  const WindowDescriptor cube = WindowDescriptor::unit_cube(3);
  const DirectionSet all = DirectionSet::full_sphere(3);
  const std::size_t reps = 25000;
  const ReplicationResult r = replicate(ReplicationPlan{reps, 101, "f0", {}}, [&](Rng& rng, std::size_t) {
    return simulate_f_alpha(spec, cube, 1.0, 0.0, all, rng);
  });
  Rng rng(1);
  const double closed = mean_f_alpha(3, 1, 1.0, kIsoLines, 1.0, 0.0, cube, all, 1.0, rng).value;
  const double z = (r.mean - closed) / r.standard_error;
  const ReplicationResult first = summarize(std::vector<double>(r.values.begin(), r.values.begin() + 10000));
  const bool ok = std::abs(closed - pi / 4) < 1e-12 && std::abs(z) < 3.0 && r.standard_error <= 0.01;
  report(1, ok,
         fmt("proximity F_0 mean %.4f vs pi/4 = %.4f, z = %.2f, SE %.4f at %zu replications (variance %.3f; the "
             "first 10^4 give SE %.4f)",
             r.mean, closed, z, r.standard_error, reps, r.variance, first.standard_error),
         t.seconds());
}

void zonoid_identity() {
  Timer t;
  Rng rng(202);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 3 + i % 3;
    const GrassmannMeasure q = random_grassmann_measure(n, 1, static_cast<std::size_t>(2 + i % 6), rng);
    const double gamma = u(rng), delta = u(rng);
    const double lhs = proximity_intensity(n, 1, gamma, q, delta, rng).value;
    const Zonotope z = zonotope_from_measure(symmetrize_line_measure(q));
    const double rhs = gamma * gamma * kappa(n - 2) * std::pow(delta, n - 2) * intrinsic_volume(z, 2);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  report(2, worst <= 1e-10, fmt("proximity = gamma^2 kappa_{n-2} delta^{n-2} V_2 on 20 measures, max gap %.2e", worst),
         t.seconds());
}

void lift_identity() {
  Timer t;
  Rng rng(303);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  double worst = 0.0;
  int comparisons = 0;
  for (int i = 0; i < 10; ++i) {
    const int n = 3 + i % 3;
    const GrassmannMeasure q = random_grassmann_measure(n, n - 1, static_cast<std::size_t>(n + i % 3), rng);
    const double gamma = u(rng);
    const SphereMeasure normals = symmetrize_hyperplane_measure(q);
    for (int r = 2; r <= n - 1; ++r) {
      const SphereMeasure lhs = t_lift(hyperplane_intersection(n, gamma, normals, r));
      const SphereMeasure rhs = area_measure(normals.scaled(gamma), r).scaled(binom(n - 1, r));
      worst = std::max(worst, mixture_discrepancy(lhs, rhs));
      ++comparisons;
    }
  }
  report(3, worst <= 1e-10,
         fmt("lift of the intersection measure = binom(n-1,r) S_r, %d comparisons, max weight gap %.2e", comparisons,
             worst),
         t.seconds());
}

// The area measure is defined for 2 <= m <= n-1; V_0 and V_n have no counterpart here.
void total_mass_relation() {
  Timer t;
  Rng rng(404);
  double worst = 0.0;
  int checks = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = 3 + i % 3;
    const SphereMeasure q = random_sphere_measure(n, static_cast<std::size_t>(n + 1 + i % 4), 0.5 + 0.05 * i, rng);
    const Zonotope z = zonotope_from_measure(q);
    for (int m = 2; m <= n - 1; ++m) {
      const double via_area = binom(n, m) / (n * kappa(n - m)) * area_measure(q, m).total_mass();
      const double v = intrinsic_volume(z, m);
      worst = std::max(worst, std::abs(via_area - v) / std::max(1.0, v));
      ++checks;
    }
  }
  report(4, worst <= 1e-10,
         fmt("S_m total mass vs V_m on 50 zonotopes (%d pairs, m = 2..n-1), max relative gap %.2e", checks, worst),
         t.seconds());
}

void appendix() {
  Timer t;
  bool ok = build_factorial_distribution(3).exact() ==
                std::vector<Fraction>{Fraction(1, 3), Fraction(1, 2), Fraction(0), Fraction(1, 6)} &&
            build_factorial_distribution(4).exact() ==
                std::vector<Fraction>{Fraction(3, 8), Fraction(1, 3), Fraction(1, 4), Fraction(0), Fraction(1, 24)};
  const bool tables = ok;
  double moment_gap = 0.0;
  for (int kappa_ = 2; kappa_ <= 12; ++kappa_) {
    const auto d = build_factorial_distribution(kappa_);
    for (int m = 1; m <= kappa_; ++m) moment_gap = std::max(moment_gap, std::abs(d.factorial_moment(m) - 1.0));
  }
  ok = ok && moment_gap <= 1e-12;

  const int kappa_ = 3;
  const CubeIndexBox box{{0}, {5}};
  const std::size_t reps = 20000;  // 10^5 cubes
  const ReplicationPlan plan{reps, 505, "sr", {}};
  const std::vector<std::pair<double, double>> intervals{{0.3, 1.6}, {1.2, 2.9}, {0.8, 2.2}};
  std::string zs;
  for (int r = 2; r <= kappa_; ++r) {
    std::vector<TestSet> sets;
    for (int i = 0; i < r; ++i) {
      const auto [lo, hi] = intervals[static_cast<std::size_t>(i)];
      sets.push_back([lo, hi](const Vector& x) { return x(0) >= lo && x(0) < hi; });
    }
    const auto res = factorial_moment_check(cube_process_sampler(1, kappa_, box, true), sets, plan);
    ok = ok && std::abs(res.z) < 3.0;
    zs += fmt(" r=%d z=%.2f", r, res.z);
  }
  // Ordered 4-tuples of distinct points inside one cube, summed over all simulated cubes.
  const auto dist = build_factorial_distribution(kappa_);
  const ReplicationResult same = replicate(plan, [&](Rng& rng, std::size_t) {
    const auto pts = sample_cube_process(1, dist, box, rng, false);
    std::vector<double> per_cube(static_cast<std::size_t>(box.cube_count()), 0.0);
    for (const auto& p : pts) per_cube[static_cast<std::size_t>(p.cube)] += 1.0;
    double tuples = 0.0;
    for (double c : per_cube) tuples += c * (c - 1) * (c - 2) * (c - 3);
    return tuples;
  });
  const double same_total = same.mean * static_cast<double>(reps);
  ok = ok && same_total == 0.0;
  report(5, ok,
         fmt("tables %s, max factorial-moment gap %.1e (kappa <= 12), %zu cubes:%s, r=4 same-cube tuples %.0f",
             tables ? "exact" : "WRONG", moment_gap, reps * 5, zs.c_str(), same_total),
         t.seconds());
}

void weibull() {
  Timer t;
  const auto spec = FlatProcessSpec::poisson(1.0, kIsoLines);
  const WindowDescriptor ball = WindowDescriptor::ball(3, 1.0);
  const DirectionSet all = DirectionSet::full_sphere(3);
  const double delta = 0.25;
  const ReplicationResult mins = replicate(ReplicationPlan{2000, 606, "weibull", {}}, [&](Rng& rng, std::size_t) {
    return simulate_scaled_minimum(spec, ball, 8.0, delta, 1.0, all, rng);
  });
  Rng rng(2);
  const double beta = weibull_beta(3, 1, 1.0, kIsoLines, ball, all, rng).value;
  const double ks = ks_statistic(mins.values, [&](double x) { return weibull_cdf(x, beta, 3, 1, 1.0); });
  const bool ok = std::abs(beta - pi * pi / 3) < 1e-12 && ks < 0.05;
  report(6, ok, fmt("scaled minima at rho = 8, beta = %.4f (pi^2/3 = %.4f), KS %.4f over 2000 replications", beta,
                    pi * pi / 3, ks),
         t.seconds());
}

void clt() {
  Timer t;
  const auto spec = FlatProcessSpec::poisson(1.0, kIsoLines);
  const WindowDescriptor ball = WindowDescriptor::ball(3, 1.0);
  const DirectionSet all = DirectionSet::full_sphere(3);
  const std::vector<double> rhos{2.0, 4.0, 8.0};
  std::vector<std::vector<double>> values;
  for (std::size_t s = 0; s < rhos.size(); ++s) {
    const WindowDescriptor scaled = ball.with_scale(rhos[s]);
    values.push_back(replicate(ReplicationPlan{4000, 707 + s, "clt", {}}, [&](Rng& rng, std::size_t) {
                       return simulate_f_alpha(spec, scaled, 1.0, 0.0, all, rng);
                     }).values);
  }
  const CltDiagnostics d = clt_diagnostics(values, rhos, 3, 1);
  Rng rng(3);
  const double target = asymptotic_covariance(3, 1, 1.0, kIsoLines, 1.0, 0.0, 0.0, ball, all, all, rng).value;
  const double chord = covariance_integral_chord_form(3, 1, 1.0);
  const double var8 = d.scales.back().normalized_variance;
  const bool ok = d.ks_decreasing && d.scales.back().ks < 0.06 && std::abs(var8 / (pi * pi * pi / 2) - 1.0) <= 0.15 &&
                  std::abs(target - pi * pi * pi / 2) < 1e-9 && std::abs(chord - target) < 1e-9;
  report(7, ok,
         fmt("KS %.4f, %.4f, %.4f at rho 2, 4, 8; var/rho^4 at rho 8 = %.3f vs pi^3/2 = %.3f (chord form %.3f)",
             d.scales[0].ks, d.scales[1].ks, d.scales[2].ks, var8, target, chord),
         t.seconds());
}

void metrics() {
  Timer t;
  Rng rng(808);
  ProhorovOptions fine;
  fine.tolerance = 1e-9;
  double dirac_gap = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Vector x = sample_unit_sphere(3, rng), y = sample_unit_sphere(3, rng);
    const MetricSample s = MetricSample::sphere({x, y});
    const double rho = s(0, 1);
    dirac_gap = std::max(dirac_gap, std::abs(bl_distance(s, {1.0, 0.0}, {0.0, 1.0}) - 2 * rho / (2 + rho)));
    dirac_gap = std::max(dirac_gap, std::abs(prohorov_distance(s, {1.0, 0.0}, {0.0, 1.0}, fine).value - std::min(rho, 1.0)));
  }
  double axiom_violation = 0.0;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int i = 0; i < 20; ++i) {
    std::vector<Vector> pts;
    for (int j = 0; j < 8; ++j) pts.push_back(sample_unit_sphere(3, rng));
    const MetricSample s = MetricSample::sphere(pts);
    std::vector<std::vector<double>> m(3, std::vector<double>(8));
    for (auto& w : m)
      for (auto& x : w) x = u(rng);
    for (const auto& dist : {std::function<double(int, int)>([&](int a, int b) { return bl_distance(s, m[a], m[b]); }),
                             std::function<double(int, int)>([&](int a, int b) {
                               return prohorov_distance(s, m[a], m[b], fine).value;
                             })}) {
      axiom_violation = std::max(axiom_violation, std::abs(dist(0, 0)));
      axiom_violation = std::max(axiom_violation, std::abs(dist(0, 1) - dist(1, 0)));
      axiom_violation = std::max(axiom_violation, dist(0, 2) - dist(0, 1) - dist(1, 2));
    }
  }
  bool co_vanishing = true;
  std::string last;
  const struct {
    StabilityCase kind;
    int order;
    const char* name;
  } cases[] = {{StabilityCase::SmZonoid, 2, "zonoid"},
               {StabilityCase::HyperplaneIntersection, 2, "hyperplane"},
               {StabilityCase::LineProximity, 2, "proximity"}};
  for (const auto& c : cases) {
    const SphereMeasure mu = random_sphere_measure(3, 6, 1.0, rng);
    const double hmin = min_cosine_transform(mu);
    const double t0 = std::min(0.1, 0.4 * hmin);
    std::vector<double> ts;
    std::vector<SphereMeasure> family;
    for (int j = 0; j < 14; ++j) {
      ts.push_back(t0 * std::pow(0.5, j));
      family.push_back(perturb_measure(mu, ts.back(), 900 + static_cast<std::uint64_t>(j)));
    }
    const StabilityReport rep = stability_harness(c.kind, mu, family, ts, c.order, 0.5 * hmin, 2.0);
    co_vanishing = co_vanishing && rep.co_vanishing;
    last += fmt(" %s %.1e/%.1e", c.name, rep.rows.back().bl_lhs, rep.rows.back().bl_rhs);
  }
  const bool ok = dirac_gap <= 1e-6 && axiom_violation <= 1e-6 && co_vanishing;
  report(8, ok,
         fmt("point-mass gap %.1e, axiom violation %.1e, final LHS/RHS:%s", dirac_gap, std::max(0.0, axiom_violation),
             last.c_str()),
         t.seconds());
}

void isoperimetric() {
  Timer t;
  Rng rng(909);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  double worst_excess = -1e300;
  for (int i = 0; i < 100; ++i) {
    const int n = 3 + i % 4;
    const double gamma = u(rng), delta = u(rng);
    const auto q = random_grassmann_measure(n, 1, static_cast<std::size_t>(2 + i % 9), rng);
    worst_excess = std::max(worst_excess,
                            proximity_intensity(n, 1, gamma, q, delta, rng).value - isoperimetric_bound(n, gamma, delta));
  }
  double iso_gap = 0.0;
  for (int n = 3; n <= 6; ++n) {
    const auto q = GrassmannMeasure::isotropic(n, 1, 1.0);
    iso_gap = std::max(iso_gap, std::abs(proximity_intensity(n, 1, 1.0, q, 1.0, rng).value - isoperimetric_bound(n, 1.0, 1.0)));
  }
  const bool ok = worst_excess <= 1e-10 && iso_gap <= 1e-9;
  report(9, ok, fmt("max (proximity - bound) over 100 measures %.3e, isotropic gap %.1e", worst_excess, iso_gap),
         t.seconds());
}

}  // namespace

int main() {
  proximity_vs_simulation();
  zonoid_identity();
  lift_identity();
  total_mass_relation();
  appendix();
  weibull();
  clt();
  metrics();
  isoperimetric();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
