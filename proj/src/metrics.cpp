#include "flatproc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "flatproc/closed_form.hpp"
#include "flatproc/simplex.hpp"
#include "flatproc/special.hpp"
#include "flatproc/zonoid.hpp"

namespace flatproc {

namespace {

constexpr std::size_t kExactProhorovLimit = 20;

double total(const std::vector<double>& w) {
  double s = 0.0;
  for (double x : w) s += x;
  return s;
}

void check_measures(const MetricSample& s, const std::vector<double>& mu, const std::vector<double>& nu) {
  if (mu.size() != s.size() || nu.size() != s.size()) throw Error("measures must live on the common support");
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] < 0.0 || nu[i] < 0.0) throw Error("measures must be nonnegative");
}

// Maximum mass movable from `from` to `to` along pairs at distance < eps (Dinic on the
// bipartite network source -> i -> j -> sink).
double transport_within(const MetricSample& s, const std::vector<double>& from, const std::vector<double>& to,
                        double eps) {
  const int n = static_cast<int>(s.size());
  const int source = 2 * n, sink = 2 * n + 1, nodes = 2 * n + 2;
  struct Edge {
    int to;
    double cap;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
  auto add_edge = [&](int u, int v, double cap) {
    adj[u].push_back(static_cast<int>(edges.size()));
    edges.push_back({v, cap});
    adj[v].push_back(static_cast<int>(edges.size()));
    edges.push_back({u, 0.0});
  };
  double bound = 0.0;
  for (double w : from) bound += w;
  for (int i = 0; i < n; ++i) {
    if (from[i] > 0.0) add_edge(source, i, from[i]);
    if (to[i] > 0.0) add_edge(n + i, sink, to[i]);
    for (int j = 0; j < n; ++j)
      if (s(i, j) < eps) add_edge(i, n + j, bound);
  }
  constexpr double kResidual = 1e-15;
  std::vector<int> level(static_cast<std::size_t>(nodes)), next(static_cast<std::size_t>(nodes));
  auto bfs = [&] {
    std::fill(level.begin(), level.end(), -1);
    std::vector<int> queue{source};
    level[source] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (int e : adj[queue[h]])
        if (edges[e].cap > kResidual && level[edges[e].to] < 0) {
          level[edges[e].to] = level[queue[h]] + 1;
          queue.push_back(edges[e].to);
        }
    return level[sink] >= 0;
  };
  std::function<double(int, double)> push = [&](int u, double f) -> double {
    if (u == sink) return f;
    for (int& k = next[u]; k < static_cast<int>(adj[u].size()); ++k) {
      Edge& e = edges[adj[u][k]];
      if (e.cap <= kResidual || level[e.to] != level[u] + 1) continue;
      const double got = push(e.to, std::min(f, e.cap));
      if (got > 0.0) {
        e.cap -= got;
        edges[adj[u][k] ^ 1].cap += got;
        return got;
      }
    }
    return 0.0;
  };
  double flow = 0.0;
  while (bfs()) {
    std::fill(next.begin(), next.end(), 0);
    while (const double f = push(source, bound)) flow += f;
  }
  return flow;
}

// Feasibility of a given epsilon for the Prohorov inequalities.
class ProhorovChecker {
 public:
  ProhorovChecker(const MetricSample& s, const std::vector<double>& mu, const std::vector<double>& nu)
      : s_(s), mu_(mu), nu_(nu), n_(s.size()) {}

  double mass(const std::vector<double>& w, std::uint64_t mask) const {
    double m = 0.0;
    for (std::size_t i = 0; mask; ++i, mask >>= 1)
      if (mask & 1U) m += w[i];
    return m;
  }

  std::vector<std::uint64_t> neighbourhoods(double eps) const {
    std::vector<std::uint64_t> near(n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (s_(i, j) < eps) near[i] |= (std::uint64_t{1} << j);
    return near;
  }

  // All subsets, enumerated with a running union of neighbourhoods.
  bool feasible_exact(double eps) {
    if (mu_sum_.empty()) {
      const std::size_t count = std::size_t{1} << n_;
      mu_sum_.assign(count, 0.0);
      nu_sum_.assign(count, 0.0);
      for (std::size_t m = 1; m < count; ++m) {
        const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(m));
        mu_sum_[m] = mu_sum_[m & (m - 1)] + mu_[low];
        nu_sum_[m] = nu_sum_[m & (m - 1)] + nu_[low];
      }
      ext_.assign(count, 0);
    }
    const auto near = neighbourhoods(eps);
    const std::size_t count = std::size_t{1} << n_;
    for (std::size_t m = 1; m < count; ++m) {
      const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(m));
      ext_[m] = ext_[m & (m - 1)] | static_cast<std::uint32_t>(near[low]);
      if (mu_sum_[m] > nu_sum_[ext_[m]] + eps + 1e-12) return false;
      if (nu_sum_[m] > mu_sum_[ext_[m]] + eps + 1e-12) return false;
    }
    return true;
  }

  // Deficiency form of Hall's theorem: max_A (mu(A) - nu(A^eps)) equals mu(S) minus the maximum
  // flow from mu to nu along pairs at distance < eps.
  bool feasible_flow(double eps) const {
    return total(mu_) - transport_within(s_, mu_, nu_, eps) <= eps + 1e-12 &&
           total(nu_) - transport_within(s_, nu_, mu_, eps) <= eps + 1e-12;
  }

 private:
  const MetricSample& s_;
  const std::vector<double>& mu_;
  const std::vector<double>& nu_;
  std::size_t n_;
  std::vector<double> mu_sum_, nu_sum_;
  std::vector<std::uint32_t> ext_;
};

double bl_exponent(StabilityCase kind, int n, int order) {
  const double base = 1.0 / ((n + 1.0) * (n + 4.0));
  switch (kind) {
    case StabilityCase::SmZonoid:
    case StabilityCase::HyperplaneIntersection:
      return 2.0 * base / std::pow(2.0, order);
    case StabilityCase::LineProximity:
      return 2.0 * base / 2.0;
  }
  return 0.0;
}

double p_exponent(StabilityCase kind, int n, int order) {
  if (kind == StabilityCase::SmZonoid) return 0.0;
  return 0.5 * bl_exponent(kind, n, order);
}

}  // namespace

// ---------------------------------------------------------------- metric spaces

MetricSample MetricSample::from_table(Matrix table, double tol) {
  const Eigen::Index n = table.rows();
  if (table.cols() != n) throw Error("distance table must be square");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(table(i, i)) > tol) throw Error("distance table needs a zero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (table(i, j) < -tol || std::abs(table(i, j) - table(j, i)) > tol) throw Error("distance table must be symmetric");
      for (Eigen::Index l = 0; l < n; ++l) {
        if (table(i, l) > table(i, j) + table(j, l) + tol) throw Error("distance table violates the triangle inequality");
      }
    }
  }
  MetricSample s;
  s.table_ = std::move(table);
  return s;
}

MetricSample MetricSample::sphere(const std::vector<Vector>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Matrix t = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // atan2 form keeps accuracy for nearly equal and nearly antipodal points.
      const double c = points[i].dot(points[j]);
      const double s = (points[i] - c * points[j]).norm();
      t(i, j) = t(j, i) = std::atan2(s, c);
    }
  return from_table(std::move(t));
}

MetricSample MetricSample::grassmann(const std::vector<Subspace>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Matrix t = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) t(i, j) = t(j, i) = grassmann_metric(points[i], points[j]);
  return from_table(std::move(t), 1e-7);
}

MeasurePair merge_sphere_measures(const SphereMeasure& mu, const SphereMeasure& nu, double tol) {
  std::vector<Vector> points;
  std::vector<double> wm, wn;
  auto add = [&](const Vector& x, double w, bool first) {
    std::size_t i = 0;
    for (; i < points.size(); ++i)
      if ((points[i] - x).norm() < tol) break;
    if (i == points.size()) {
      points.push_back(x);
      wm.push_back(0.0);
      wn.push_back(0.0);
    }
    (first ? wm : wn)[i] += w;
  };
  for (const auto& [x, w] : mu.point_masses()) add(x, w, true);
  for (const auto& [x, w] : nu.point_masses()) add(x, w, false);
  return {MetricSample::sphere(points), std::move(wm), std::move(wn)};
}

MeasurePair merge_grassmann_measures(const GrassmannMeasure& mu, const GrassmannMeasure& nu, double tol) {
  if (mu.is_isotropic() || nu.is_isotropic()) throw Error("metric comparison requires atomic measures");
  std::vector<Subspace> points;
  std::vector<double> wm, wn;
  auto add = [&](const Subspace& x, double w, bool first) {
    std::size_t i = 0;
    for (; i < points.size(); ++i)
      if (same_span(points[i], x, tol)) break;
    if (i == points.size()) {
      points.push_back(x);
      wm.push_back(0.0);
      wn.push_back(0.0);
    }
    (first ? wm : wn)[i] += w;
  };
  for (const auto& a : mu.atoms()) add(a.subspace, a.weight, true);
  for (const auto& a : nu.atoms()) add(a.subspace, a.weight, false);
  return {MetricSample::grassmann(points), std::move(wm), std::move(wn)};
}

// ---------------------------------------------------------------- distances

double bl_distance(const MetricSample& s, const std::vector<double>& mu, const std::vector<double>& nu) {
  check_measures(s, mu, nu);
  // Points without mass difference only add constraints that a bounded Lipschitz
  // extension always satisfies, so they are dropped.
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (std::abs(mu[i] - nu[i]) > 1e-15) idx.push_back(i);
  const int m = static_cast<int>(idx.size());
  if (m == 0) return 0.0;

  // Variables: f_i = p_i - q_i (i < m), then a, b.
  const int nv = 2 * m + 2;
  const int ia = 2 * m, ib = 2 * m + 1;
  const int rows = 1 + 2 * m + m * (m - 1);
  LinearProgram lp{Matrix::Zero(rows, nv), Vector::Zero(rows), Vector::Zero(nv)};
  for (int i = 0; i < m; ++i) {
    const double d = mu[idx[i]] - nu[idx[i]];
    lp.c(2 * i) = d;
    lp.c(2 * i + 1) = -d;
  }
  int r = 0;
  lp.a(r, ia) = 1.0;
  lp.a(r, ib) = 1.0;
  lp.b(r++) = 1.0;
  for (int i = 0; i < m; ++i) {
    lp.a(r, 2 * i) = 1.0;
    lp.a(r, 2 * i + 1) = -1.0;
    lp.a(r++, ia) = -1.0;
    lp.a(r, 2 * i) = -1.0;
    lp.a(r, 2 * i + 1) = 1.0;
    lp.a(r++, ia) = -1.0;
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      lp.a(r, 2 * i) = 1.0;
      lp.a(r, 2 * i + 1) = -1.0;
      lp.a(r, 2 * j) = -1.0;
      lp.a(r, 2 * j + 1) = 1.0;
      lp.a(r++, ib) = -s(idx[i], idx[j]);
    }
  }
  // The primal has O(m^2) rows; its dual (min b'y subject to A'y >= c, y >= 0) has only 2m + 2,
  // which keeps the dense tableau small. Strong duality holds since the primal is feasible and bounded.
  const LinearProgram dual{-lp.a.transpose(), -lp.c, -lp.b};
  const LpResult res = solve_lp(dual);
  if (res.status != LpResult::Status::Optimal) throw Error("bounded Lipschitz LP did not reach an optimum");
  return std::max(0.0, -res.value);
}

double bl_distance(const MeasurePair& p) { return bl_distance(p.space, p.mu, p.nu); }

ProhorovResult prohorov_distance(const MetricSample& s, const std::vector<double>& mu, const std::vector<double>& nu,
                                 const ProhorovOptions& opt) {
  check_measures(s, mu, nu);
  if (mu == nu) return {0.0, ProhorovOptions::Method::Subsets};
  using Method = ProhorovOptions::Method;
  Method method = opt.method;
  if (method == Method::Auto) method = s.size() <= kExactProhorovLimit ? Method::Subsets : Method::Flow;
  if (method == Method::Subsets && s.size() > kExactProhorovLimit)
    throw Error("subset enumeration is limited to 20 support points; use the flow method");
  ProhorovChecker checker(s, mu, nu);
  auto feasible = [&](double eps) {
    return method == Method::Subsets ? checker.feasible_exact(eps) : checker.feasible_flow(eps);
  };
  double lo = 0.0;
  double hi = std::max(total(mu), total(nu)) + opt.tolerance;
  while (hi - lo > 0.25 * opt.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, method};
}

ProhorovResult prohorov_distance(const MeasurePair& p, const ProhorovOptions& opt) {
  return prohorov_distance(p.space, p.mu, p.nu, opt);
}

// ---------------------------------------------------------------- stability harness

SphereMeasure stability_image_sphere(StabilityCase kind, const SphereMeasure& mu, int order) {
  const int n = mu.n();
  if (kind == StabilityCase::SmZonoid) {
    if (n - order != 1) throw Error("atomic area measure requires m = n - 1");
    return area_measure(mu, order);
  }
  if (kind == StabilityCase::LineProximity) {
    if (n != 3) throw Error("atomic proximity direction measure requires n = 3");
    std::vector<SubsphereComponent> comps;
    const double scale = 0.5 * kappa(n - 2) / omega(n - 2);
    for (const auto& a : mu.pairs()) {
      for (const auto& b : mu.pairs()) {
        const double det = nabla(std::vector<Vector>{a.u, b.u});
        if (det <= kGeneralPositionTol) continue;
        comps.push_back({complement(orthonormalize(std::vector<Vector>{a.u, b.u}, n)), scale * a.weight * b.weight * det});
      }
    }
    return SphereMeasure::mixture(n, std::move(comps)).merged();
  }
  throw Error("hyperplane intersections live on a Grassmannian");
}

GrassmannMeasure stability_image_grassmann(const SphereMeasure& mu, int order) {
  return hyperplane_intersection(mu.n(), 1.0, mu, order);
}

SphereMeasure perturb_measure(const SphereMeasure& mu, double t, std::uint64_t seed) {
  if (mu.kind() != SphereMeasure::Kind::AtomsEven) throw Error("perturbation requires an atomic measure");
  Rng rng(seed);
  std::vector<SpherePair> pairs;
  for (const auto& p : mu.pairs()) {
    Vector w = sample_unit_sphere(mu.n(), rng);
    w -= w.dot(p.u) * p.u;
    w.normalize();
    pairs.push_back({std::cos(t) * p.u + std::sin(t) * w, p.weight * (1.0 + 0.5 * t)});
  }
  return SphereMeasure::atoms(mu.n(), std::move(pairs));
}

StabilityReport stability_harness(StabilityCase kind, const SphereMeasure& mu, const std::vector<SphereMeasure>& family,
                                  const std::vector<double>& ts, int order, double rho, double big_r) {
  if (family.size() != ts.size()) throw Error("family and labels differ in length");
  auto member = [&](const SphereMeasure& m) {
    return m.kind() == SphereMeasure::Kind::AtomsEven && lower_bound_check(m, rho) && m.total_mass() <= big_r + 1e-12;
  };
  if (!member(mu)) throw Error("measure is outside M_e(rho, R)");
  for (const auto& nu : family)
    if (!member(nu)) throw Error("family member is outside M_e(rho, R)");

  StabilityReport rep;
  rep.kind = kind;
  rep.n = mu.n();
  rep.order = kind == StabilityCase::LineProximity ? 2 : order;
  rep.bl_exponent = bl_exponent(kind, rep.n, rep.order);
  rep.p_exponent = p_exponent(kind, rep.n, rep.order);
  const ProhorovOptions popt;

  rep.rows.resize(family.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(family.size()); ++i) {
    const SphereMeasure& nu = family[static_cast<std::size_t>(i)];
    StabilityRow row;
    row.t = ts[static_cast<std::size_t>(i)];
    const MeasurePair lhs = merge_sphere_measures(mu, nu);
    row.bl_lhs = bl_distance(lhs);
    const ProhorovResult pl = prohorov_distance(lhs, popt);
    row.p_lhs = pl.value;
    if (kind == StabilityCase::HyperplaneIntersection) {
      const MeasurePair rhs = merge_grassmann_measures(stability_image_grassmann(mu, order),
                                                       stability_image_grassmann(nu, order));
      row.bl_rhs = bl_distance(rhs);
      const ProhorovResult pr = prohorov_distance(rhs, popt);
      row.p_rhs = pr.value;
    } else {
      const MeasurePair rhs = merge_sphere_measures(stability_image_sphere(kind, mu, order),
                                                    stability_image_sphere(kind, nu, order));
      row.bl_rhs = bl_distance(rhs);
      const ProhorovResult pr = prohorov_distance(rhs, popt);
      row.p_rhs = pr.value;
    }
    row.ratio = row.bl_rhs > 0.0 ? row.bl_lhs / std::pow(row.bl_rhs, rep.bl_exponent)
                                 : (row.bl_lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    row.exponent_estimate = (row.bl_lhs > 0.0 && row.bl_rhs > 0.0 && row.bl_rhs < 1.0)
                                ? std::log(row.bl_lhs) / std::log(row.bl_rhs)
                                : std::numeric_limits<double>::quiet_NaN();
    rep.rows[static_cast<std::size_t>(i)] = row;
  }
  rep.bounded_ratios = !rep.rows.empty();
  for (const auto& row : rep.rows)
    if (!std::isfinite(row.ratio) || row.ratio > 1e6) rep.bounded_ratios = false;
  if (!rep.rows.empty()) {
    const auto& last = rep.rows.back();
    rep.co_vanishing = last.bl_rhs < 1e-3 && last.bl_lhs < 1e-2;
  }
  return rep;
}

nlohmann::json to_json(const StabilityReport& report) {
  static const char* names[] = {"sm_zonoid", "hyperplane_intersection", "line_proximity"};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"t", r.t},
                    {"d_BL_lhs", r.bl_lhs},
                    {"d_BL_rhs", r.bl_rhs},
                    {"d_P_lhs", r.p_lhs},
                    {"d_P_rhs", r.p_rhs},
                    {"ratio", r.ratio},
                    {"exponent_estimate", std::isfinite(r.exponent_estimate) ? nlohmann::json(r.exponent_estimate)
                                                                             : nlohmann::json(nullptr)}});
  }
  return {{"case", names[static_cast<int>(report.kind)]},
          {"n", report.n},
          {"order", report.order},
          {"blExponent", report.bl_exponent},
          {"prohorovExponent", report.p_exponent},
          {"boundedRatios", report.bounded_ratios},
          {"coVanishing", report.co_vanishing},
          {"rows", rows}};
}

}  // namespace flatproc
