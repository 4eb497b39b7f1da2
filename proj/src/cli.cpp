#include "flatproc/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "flatproc/closed_form.hpp"
#include "flatproc/experiments.hpp"
#include "flatproc/metrics.hpp"
#include "flatproc/special.hpp"
#include "flatproc/zonoid.hpp"

namespace flatproc::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  int n = 3;
  int k = 1;
  int k2 = -1;
  double gamma = 1.0;
  double gamma2 = 1.0;
  double delta = 1.0;
  std::vector<double> alpha{0.0};
  std::vector<double> rho{2.0, 4.0, 8.0};
  std::size_t reps = 1000;
  std::optional<std::uint64_t> seed;
  std::string window = "cube";
  std::string directions = "full";
  std::string q = "isotropic";
  std::string q2 = "isotropic";
  std::string process = "poisson";
  int kappa = 3;
  int r = 2;
  std::string stability_case = "zonoid";
  int order = -1;
  std::size_t pairs = 0;
  std::size_t trials = 1;
  int jobs = 0;
  std::string output;
  std::string csv;
  std::string sample;
  std::string config;
};

json config_json(const RunConfig& c, std::uint64_t seed) {
  return {{"command", c.command},
          {"n", c.n},
          {"k", c.k},
          {"k2", c.k2 < 0 ? json(nullptr) : json(c.k2)},
          {"gamma", c.gamma},
          {"gamma2", c.gamma2},
          {"delta", c.delta},
          {"alpha", c.alpha},
          {"rho", c.rho},
          {"reps", c.reps},
          {"seed", seed},
          {"window", c.window},
          {"directions", c.directions},
          {"q", c.q},
          {"q2", c.q2},
          {"process", c.process},
          {"kappa", c.kappa},
          {"r", c.r},
          {"case", c.stability_case},
          {"order", c.order},
          {"pairs", c.pairs},
          {"trials", c.trials},
          {"output", c.output},
          {"csv", c.csv},
          {"sample", c.sample}};
}

std::uint64_t resolve_seed(const RunConfig& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("FLATPROC_SEED")) {
    try {
      std::size_t used = 0;
      const std::uint64_t s = std::stoull(env, &used);
      if (used == std::string(env).size()) return s;
    } catch (const std::exception&) {
    }
    throw Error("FLATPROC_SEED is not an unsigned integer");
  }
  return 1;
}

// Keyword ("isotropic", "random:<atoms>") or path to a directional-distribution file.
GrassmannMeasure resolve_q(const std::string& text, int n, int k, std::uint64_t seed) {
  if (text == "isotropic") return GrassmannMeasure::isotropic(n, k, 1.0);
  if (text.rfind("random:", 0) == 0) {
    const int atoms = std::stoi(text.substr(7));
    if (atoms < 1) throw Error("random directional distribution needs at least one atom");
    Rng rng = make_stream(seed, 0x51ULL);
    return random_grassmann_measure(n, k, static_cast<std::size_t>(atoms), rng);
  }
  GrassmannMeasure q = read_grassmann_measure_file(text);
  if (q.n() != n || q.k() != k) throw Error("directional distribution file does not match n and k");
  return q;
}

// "full" or "cap:<threshold>" (double cap around the last coordinate axis).
DirectionSet resolve_directions(const std::string& text, int n) {
  if (text == "full") return DirectionSet::full_sphere(n);
  if (text.rfind("cap:", 0) == 0) {
    Vector axis = Vector::Zero(n);
    axis(n - 1) = 1.0;
    return DirectionSet::double_cap(axis, std::stod(text.substr(4)));
  }
  throw Error("unknown direction set '" + text + "'");
}

FlatProcessSpec resolve_process(const RunConfig& c, const GrassmannMeasure& q) {
  if (c.process == "poisson") return FlatProcessSpec::poisson(c.gamma, q);
  if (c.process == "sr") {
    std::vector<Vector> axes;
    for (int i = c.k; i < c.n; ++i) axes.push_back(Vector::Unit(c.n, i));
    return FlatProcessSpec::sr_construction(c.n, c.k, c.kappa, orthonormalize(axes, c.n), 0.0, true);
  }
  throw Error("unknown process '" + c.process + "'");
}

void write_csv_column(const std::string& path, const std::string& header, const std::vector<double>& values) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out.precision(17);
  out << header << '\n';
  for (double v : values) out << v << '\n';
}

bool within(double mc, double mc_se, const Estimate& cf, double sigmas) {
  return std::abs(mc - cf.value) <= sigmas * std::sqrt(mc_se * mc_se + cf.standard_error * cf.standard_error);
}

struct Context {
  RunConfig cfg;
  std::uint64_t seed = 0;
  Rng closed_form_rng;  // stream reserved for Monte Carlo parts of closed forms
  json summary;
};

int cmd_version(Context& ctx) {
  ctx.summary["version"] = FLATPROC_VERSION;
  return kOk;
}

int cmd_simulate(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const GrassmannMeasure q = resolve_q(c.q, c.n, c.k, ctx.seed);
  const FlatProcessSpec spec = resolve_process(c, q);
  const WindowDescriptor a = WindowDescriptor::parse(c.window, c.n);
  Rng rng = make_stream(ctx.seed, 0);
  const FlatSample s = sample_flats(spec, enumeration_radius(a, c.delta), rng, ctx.seed);
  if (!c.sample.empty()) {
    std::ofstream out(c.sample);
    if (!out) throw Error("cannot open " + c.sample);
    write_flat_sample(out, s);
  }
  ctx.summary["flats"] = s.flats.size();
  ctx.summary["windowRadius"] = s.window_radius;
  if (2 * c.k < c.n) {
    const SegmentProcessSample seg = proximity(s, c.delta);
    ctx.summary["segments"] = seg.segments.size();
    if (!c.csv.empty()) {
      std::ofstream out(c.csv);
      if (!out) throw Error("cannot open " + c.csv);
      write_segment_csv(out, seg);
    }
  }
  return kOk;
}

int cmd_proximity(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const WindowDescriptor a = WindowDescriptor::parse(c.window, c.n);
  const DirectionSet dirs = resolve_directions(c.directions, c.n);
  const double alpha = c.alpha.front();
  ReplicationPlan plan{c.reps, ctx.seed, "proximity", {}};
  Estimate closed;
  ReplicationResult mc;
  if (c.k2 >= 0) {
    if (alpha != 0.0 || dirs.tag() != DirectionSet::Tag::FullSphere)
      throw Error("two-process proximity supports alpha = 0 and the full sphere only");
    const GrassmannMeasure q1 = resolve_q(c.q, c.n, c.k, ctx.seed);
    const GrassmannMeasure q2 = resolve_q(c.q2, c.n, c.k2, ctx.seed + 1);
    const Estimate pi = proximity_intensity_two(c.n, c.k, c.k2, c.gamma, c.gamma2, q1, q2, c.delta, ctx.closed_form_rng);
    closed = {pi.value * a.volume(), pi.standard_error * a.volume()};
    const FlatProcessSpec s1 = FlatProcessSpec::poisson(c.gamma, q1);
    const FlatProcessSpec s2 = FlatProcessSpec::poisson(c.gamma2, q2);
    const double radius = enumeration_radius(a, c.delta);
    mc = replicate(plan, [&](Rng& rng, std::size_t) {
      const FlatSample x = sample_flats(s1, radius, rng);
      const FlatSample y = sample_flats(s2, radius, rng);
      return f_alpha(proximity(x, y, c.delta), 0.0, a, dirs);
    });
  } else {
    const GrassmannMeasure q = resolve_q(c.q, c.n, c.k, ctx.seed);
    // The cube construction fixes its own intensity and orientation law, so read both from the process description.
    const FlatProcessSpec spec = resolve_process(c, q);
    closed = mean_f_alpha(c.n, c.k, spec.gamma, spec.q, c.delta, alpha, a, dirs, 1.0, ctx.closed_form_rng);
    mc = replicate(plan, [&](Rng& rng, std::size_t) { return simulate_f_alpha(spec, a, c.delta, alpha, dirs, rng); });
  }
  write_csv_column(c.csv, "f_alpha", mc.values);
  const bool pass = within(mc.mean, mc.standard_error, closed, 3.0);
  ctx.summary["closedForm"] = closed.value;
  ctx.summary["closedFormStandardError"] = closed.standard_error;
  ctx.summary["mcMean"] = mc.mean;
  ctx.summary["mcStandardError"] = mc.standard_error;
  ctx.summary["within3SE"] = pass;
  return pass ? kOk : kAcceptanceFailed;
}

int cmd_intersect(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const int dim = c.n - c.r * (c.n - c.k);
  if (c.r < 2 || dim < 0) throw Error("intersections require r >= 2 and r(n-k) <= n");
  const GrassmannMeasure q = resolve_q(c.q, c.n, c.k, ctx.seed);
  const FlatProcessSpec spec = resolve_process(c, q);
  if (spec.kind == FlatProcessSpec::Kind::Sr && c.r > c.kappa)
    throw Error("the construction is of type (S_r) only for r <= kappa");
  const IntersectionDensity dens = intersection_density_sr(c.n, spec.gamma, spec.q, c.r, ctx.closed_form_rng);
  const double ball = kappa(c.n - dim);
  const Estimate expected{dens.gamma.value * ball, dens.gamma.standard_error * ball};
  ReplicationPlan plan{c.reps, ctx.seed, "intersect", {}};
  const ReplicationResult mc =
      replicate(plan, [&](Rng& rng, std::size_t) { return simulate_intersection_count(spec, c.r, rng); });
  write_csv_column(c.csv, "count", mc.values);
  const bool pass = within(mc.mean, mc.standard_error, expected, 3.0);
  ctx.summary["intersectionDimension"] = dim;
  ctx.summary["intensity"] = dens.gamma.value;
  ctx.summary["expectedHits"] = expected.value;
  ctx.summary["mcMean"] = mc.mean;
  ctx.summary["mcStandardError"] = mc.standard_error;
  ctx.summary["within3SE"] = pass;
  return pass ? kOk : kAcceptanceFailed;
}

int cmd_zonoid(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const std::string source = c.q == "isotropic" ? "random:" + std::to_string(c.n + 2) : c.q;
  bool pass = true;
  json instances = json::array();
  for (std::size_t t = 0; t < c.trials; ++t) {
    json inst;
    const GrassmannMeasure q = resolve_q(source, c.n, c.k, ctx.seed + t);
    if (q.is_isotropic()) throw Error("zonoid checks need a discrete directional distribution");
    if (c.k == 1) {
      const SphereMeasure mu = symmetrize_line_measure(q);
      const Zonotope z = zonotope_from_measure(mu);
      std::vector<double> v;
      for (int m = 0; m <= c.n; ++m) v.push_back(m == 0 ? 1.0 : intrinsic_volume(z, m));
      inst["intrinsicVolumes"] = v;
      if (c.n >= 3) {
        const double pi = proximity_intensity(c.n, 1, c.gamma, q, c.delta, ctx.closed_form_rng).value;
        const double via_zonoid = c.gamma * c.gamma * kappa(c.n - 2) * std::pow(c.delta, c.n - 2) * v[2];
        const double bound = isoperimetric_bound(c.n, c.gamma, c.delta);
        const bool ok = std::abs(pi - via_zonoid) <= 1e-10 * std::max(1.0, std::abs(pi)) && pi <= bound + 1e-10;
        inst["proximity"] = pi;
        inst["gammaSquaredKappaDeltaV2"] = via_zonoid;
        inst["isoperimetricBound"] = bound;
        inst["pass"] = ok;
        pass = pass && ok;
      }
    } else if (c.k == c.n - 1) {
      const SphereMeasure mu = symmetrize_hyperplane_measure(q).scaled(c.gamma);
      json lifts = json::array();
      for (int r = 2; r <= c.n - 1; ++r) {
        const SphereMeasure lhs = t_lift(hyperplane_intersection(c.n, c.gamma, symmetrize_hyperplane_measure(q), r));
        const SphereMeasure rhs = area_measure(mu, r).scaled(binom(c.n - 1, r));
        const double gap = mixture_discrepancy(lhs, rhs);
        const bool ok = gap <= 1e-10;
        lifts.push_back({{"r", r}, {"maxWeightGap", std::isfinite(gap) ? json(gap) : json(nullptr)}, {"pass", ok}});
        pass = pass && ok;
      }
      inst["liftIdentity"] = lifts;
    } else {
      throw Error("zonoid checks need k = 1 or k = n - 1");
    }
    instances.push_back(inst);
  }
  ctx.summary["instances"] = instances;
  ctx.summary["pass"] = pass;
  return pass ? kOk : kAcceptanceFailed;
}

int cmd_clt(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  if (c.rho.size() < 2) throw Error("clt needs at least two scales");
  const GrassmannMeasure q = resolve_q(c.q, c.n, c.k, ctx.seed);
  const FlatProcessSpec spec = resolve_process(c, q);
  const WindowDescriptor a = WindowDescriptor::parse(c.window, c.n);
  const DirectionSet dirs = resolve_directions(c.directions, c.n);
  const double alpha = c.alpha.front();
  std::vector<std::vector<double>> values;
  for (std::size_t s = 0; s < c.rho.size(); ++s) {
    const WindowDescriptor scaled = a.with_scale(a.scale() * c.rho[s]);
    ReplicationPlan plan{c.reps, ctx.seed + s, "clt", {}};
    values.push_back(
        replicate(plan, [&](Rng& rng, std::size_t) { return simulate_f_alpha(spec, scaled, c.delta, alpha, dirs, rng); })
            .values);
  }
  const CltDiagnostics diag = clt_diagnostics(values, c.rho, c.n, c.k);
  const Estimate target =
      asymptotic_covariance(c.n, c.k, spec.gamma, spec.q, c.delta, alpha, alpha, a, dirs, dirs, ctx.closed_form_rng);
  const double final_var = diag.scales.back().normalized_variance;
  const bool var_ok = std::abs(final_var / target.value - 1.0) <= 0.15;
  const bool ks_ok = diag.scales.back().ks < 0.06;
  bool corr_ok = true;
  if (c.alpha.size() >= 2) {
    const std::size_t m = c.alpha.size();
    const WindowDescriptor scaled = a.with_scale(a.scale() * c.rho.back());
    ReplicationPlan plan{c.reps, ctx.seed + c.rho.size(), "clt-multivariate", {}};
    const auto rows = replicate_vector(
        plan, [&](Rng& rng, std::size_t) { return simulate_f_alpha(spec, scaled, c.delta, c.alpha, dirs, rng); });
    const Matrix emp = correlation_matrix(rows);
    Matrix sigma(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        sigma(i, j) = asymptotic_covariance(c.n, c.k, spec.gamma, spec.q, c.delta, c.alpha[i], c.alpha[j], a, dirs,
                                            dirs, ctx.closed_form_rng)
                          .value;
    json e = json::array(), t = json::array();
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> er, tr;
      for (std::size_t j = 0; j < m; ++j) {
        const double tc = sigma(i, j) / std::sqrt(sigma(i, i) * sigma(j, j));
        er.push_back(emp(i, j));
        tr.push_back(tc);
        worst = std::max(worst, std::abs(emp(i, j) - tc));
      }
      e.push_back(er);
      t.push_back(tr);
    }
    corr_ok = worst <= 0.1;
    ctx.summary["correlation"] = {{"empirical", e}, {"limit", t}, {"maxDeviation", worst}};
  }
  if (!c.csv.empty()) {
    std::ofstream out(c.csv);
    if (!out) throw Error("cannot open " + c.csv);
    out.precision(17);
    out << "rho,replication,value\n";
    for (std::size_t s = 0; s < values.size(); ++s)
      for (std::size_t i = 0; i < values[s].size(); ++i) out << c.rho[s] << ',' << i << ',' << values[s][i] << '\n';
  }
  ctx.summary["diagnostics"] = to_json(diag);
  ctx.summary["asymptoticVariance"] = target.value;
  ctx.summary["asymptoticVarianceStandardError"] = target.standard_error;
  ctx.summary["pass"] = {{"ksDecreasing", diag.ks_decreasing}, {"finalKs", ks_ok}, {"variance", var_ok},
                         {"correlation", corr_ok}};
  return diag.ks_decreasing && ks_ok && var_ok && corr_ok ? kOk : kAcceptanceFailed;
}

int cmd_weibull(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const GrassmannMeasure q = resolve_q(c.q, c.n, c.k, ctx.seed);
  const FlatProcessSpec spec = resolve_process(c, q);
  const WindowDescriptor a = WindowDescriptor::parse(c.window, c.n);
  const DirectionSet dirs = resolve_directions(c.directions, c.n);
  const double alpha = c.alpha.front();
  if (alpha <= 0.0) throw Error("the Weibull limit requires alpha > 0");
  const double rho = c.rho.back();
  ReplicationPlan plan{c.reps, ctx.seed, "weibull", {}};
  const ReplicationResult mins = replicate(
      plan, [&](Rng& rng, std::size_t) { return simulate_scaled_minimum(spec, a, rho, c.delta, alpha, dirs, rng); });
  const Estimate beta = weibull_beta(c.n, c.k, spec.gamma, spec.q, a, dirs, ctx.closed_form_rng);
  const double ks =
      ks_statistic(mins.values, [&](double x) { return weibull_cdf(x, beta.value, c.n, c.k, alpha); });
  write_csv_column(c.csv, "scaled_minimum", mins.values);
  ctx.summary["rho"] = rho;
  ctx.summary["beta"] = beta.value;
  ctx.summary["betaStandardError"] = beta.standard_error;
  ctx.summary["ks"] = ks;
  ctx.summary["pass"] = ks < 0.05;
  return ks < 0.05 ? kOk : kAcceptanceFailed;
}

std::string fraction_text(const Fraction& f) {
  if (f.denominator() == 1) return std::to_string(f.numerator());
  return std::to_string(f.numerator()) + "/" + std::to_string(f.denominator());
}

int cmd_appendix(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const FactorialDistribution dist = build_factorial_distribution(c.kappa);
  json table = json::array();
  for (const Fraction& f : dist.exact()) table.push_back(fraction_text(f));
  json moments = json::array();
  bool pass = true;
  for (int m = 1; m <= c.kappa; ++m) {
    const Fraction fm = dist.factorial_moment_exact(m);
    moments.push_back(fraction_text(fm));
    pass = pass && fm == Fraction(1);
  }
  ctx.summary["distribution"] = table;
  ctx.summary["factorialMoments"] = moments;

  // Factorial moments of the cube process on unions of overlapping intervals.
  const CubeIndexBox box{{0}, {5}};
  const std::vector<std::pair<double, double>> intervals{{0.3, 1.6}, {1.2, 2.9}, {0.8, 2.2}, {2.5, 4.7}};
  json checks = json::array();
  ReplicationPlan plan{c.reps, ctx.seed, "appendix", {}};
  for (int r = 2; r <= c.kappa; ++r) {
    std::vector<TestSet> sets;
    for (int i = 0; i < r; ++i) {
      const auto [lo, hi] = intervals[static_cast<std::size_t>(i) % intervals.size()];
      sets.push_back([lo, hi](const Vector& x) { return x(0) >= lo && x(0) < hi; });
    }
    const FactorialMomentResult res = factorial_moment_check(cube_process_sampler(1, c.kappa, box, true), sets, plan);
    const bool ok = std::abs(res.z) < 3.0;
    checks.push_back({{"r", r}, {"empirical", res.empirical}, {"productOfMeans", res.product_of_means},
                      {"standardError", res.standard_error}, {"z", res.z}, {"pass", ok}});
    pass = pass && ok;
  }
  {
    // kappa + 1 points never share a cube.
    std::vector<TestSet> sets(static_cast<std::size_t>(c.kappa + 1),
                              [](const Vector& x) { return x(0) >= 0.0 && x(0) < 1.0; });
    const FactorialMomentResult res = factorial_moment_check(cube_process_sampler(1, c.kappa, box, false), sets, plan);
    const bool ok = res.empirical == 0.0;
    checks.push_back({{"r", c.kappa + 1}, {"sameCubeTuples", res.empirical}, {"pass", ok}});
    pass = pass && ok;
  }
  ctx.summary["cubesSimulated"] = c.reps * static_cast<std::size_t>(box.cube_count());
  ctx.summary["srChecks"] = checks;
  ctx.summary["pass"] = pass;
  return pass ? kOk : kAcceptanceFailed;
}

int cmd_stability(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  StabilityCase kind;
  int order = c.order;
  std::size_t pairs = c.pairs;
  if (c.stability_case == "zonoid") {
    kind = StabilityCase::SmZonoid;
    if (order < 0) order = c.n - 1;
  } else if (c.stability_case == "hyperplane") {
    kind = StabilityCase::HyperplaneIntersection;
    if (order < 0) order = 2;
  } else if (c.stability_case == "proximity") {
    kind = StabilityCase::LineProximity;
    order = 2;
  } else {
    throw Error("unknown stability case '" + c.stability_case + "'");
  }
  if (pairs == 0) pairs = c.n == 3 ? 6 : 5;
  Rng rng = make_stream(ctx.seed, 0);
  const SphereMeasure mu = random_sphere_measure(c.n, pairs, 1.0, rng);
  const double hmin = min_cosine_transform(mu);
  const double rho = 0.5 * hmin;
  const double big_r = 2.0;
  const double t0 = std::min(0.1, 0.4 * hmin);
  std::vector<double> ts;
  std::vector<SphereMeasure> family;
  for (int j = 0; j < 14; ++j) {
    ts.push_back(t0 * std::pow(0.5, j));
    family.push_back(perturb_measure(mu, ts.back(), ctx.seed + 1000 + static_cast<std::uint64_t>(j)));
  }
  const StabilityReport rep = stability_harness(kind, mu, family, ts, order, rho, big_r);
  ctx.summary["report"] = to_json(rep);
  ctx.summary["rho"] = rho;
  ctx.summary["R"] = big_r;
  return rep.co_vanishing ? kOk : kAcceptanceFailed;
}

}  // namespace

int run(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Simulation and verification of stationary flat processes"};
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "key=value configuration file (flags override)");
  static const std::vector<std::string> commands{"simulate", "proximity", "intersect", "zonoid", "clt",
                                                 "weibull",  "appendix",  "stability", "version"};
  app.add_option("command", cfg.command, "subcommand")->required()->check(CLI::IsMember(commands));
  app.add_option("--n", cfg.n, "ambient dimension");
  app.add_option("--k", cfg.k, "flat dimension");
  app.add_option("--k2", cfg.k2, "flat dimension of a second independent process");
  app.add_option("--gamma", cfg.gamma, "intensity");
  app.add_option("--gamma2", cfg.gamma2, "intensity of the second process");
  app.add_option("--delta", cfg.delta, "proximity threshold");
  app.add_option("--alpha", cfg.alpha, "length exponents");
  app.add_option("--rho", cfg.rho, "window scales");
  app.add_option("--reps", cfg.reps, "replications");
  app.add_option("--seed", cfg.seed, "master seed (falls back to FLATPROC_SEED)");
  app.add_option("--window", cfg.window, "cube | ball:<r> | box:<a>,<b>,...");
  app.add_option("--directions", cfg.directions, "full | cap:<threshold>");
  app.add_option("--q", cfg.q, "isotropic | random:<atoms> | <file>");
  app.add_option("--q2", cfg.q2, "directional distribution of the second process");
  app.add_option("--process", cfg.process, "poisson | sr");
  app.add_option("--kappa", cfg.kappa, "factorial-moment order of the cube construction");
  app.add_option("--r", cfg.r, "intersection order");
  app.add_option("--case", cfg.stability_case, "zonoid | hyperplane | proximity");
  app.add_option("--order", cfg.order, "stability order (m or r)");
  app.add_option("--pairs", cfg.pairs, "atoms of the random stability measure");
  app.add_option("--trials", cfg.trials, "random instances for zonoid checks");
  app.add_option("--jobs", cfg.jobs, "worker threads (0 = available parallelism)");
  app.add_option("--output", cfg.output, "JSON summary path (default stdout)");
  app.add_option("--csv", cfg.csv, "CSV output path");
  app.add_option("--sample", cfg.sample, "flat sample output path (simulate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

#ifdef _OPENMP
  if (cfg.jobs > 0) omp_set_num_threads(cfg.jobs);
#endif

  Context ctx;
  int code = kOk;
  try {
    if (cfg.reps < 2) throw Error("--reps must be at least 2");
    ctx.cfg = cfg;
    ctx.seed = resolve_seed(cfg);
    ctx.closed_form_rng = make_stream(ctx.seed, ~0ULL);
    ctx.summary["version"] = FLATPROC_VERSION;
    ctx.summary["config"] = config_json(cfg, ctx.seed);
    static const std::map<std::string, int (*)(Context&)> handlers{
        {"simulate", cmd_simulate}, {"proximity", cmd_proximity}, {"intersect", cmd_intersect},
        {"zonoid", cmd_zonoid},     {"clt", cmd_clt},             {"weibull", cmd_weibull},
        {"appendix", cmd_appendix}, {"stability", cmd_stability}, {"version", cmd_version}};
    code = handlers.at(cfg.command)(ctx);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: malformed value (" << e.what() << ")\n";
    return kUsage;
  }

  const std::string text = ctx.summary.dump(2);
  if (cfg.output.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream out(cfg.output);
    if (!out) {
      std::cerr << "error: cannot open " << cfg.output << '\n';
      return kUsage;
    }
    out << text << '\n';
  }
  return code;
}

}  // namespace flatproc::cli
