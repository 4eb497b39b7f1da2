#include "flatproc/stats.hpp"

#include <algorithm>
#include <cmath>

namespace flatproc {

namespace {

void check_plan(const ReplicationPlan& plan) {
  if (plan.replications < 2) throw Error("replication plan needs at least 2 replications");
}

// Number of ordered tuples (x_1..x_r) of distinct points with x_i in set i.
double injective_tuples(const std::vector<std::vector<std::size_t>>& members, std::size_t depth,
                        std::vector<std::size_t>& used) {
  if (depth == members.size()) return 1.0;
  double total = 0.0;
  for (std::size_t p : members[depth]) {
    if (std::find(used.begin(), used.end(), p) != used.end()) continue;
    used.push_back(p);
    total += injective_tuples(members, depth + 1, used);
    used.pop_back();
  }
  return total;
}

}  // namespace

ReplicationResult summarize(std::vector<double> values) {
  ReplicationResult r;
  const std::size_t n = values.size();
  if (n == 0) return r;
  double sum = 0.0;
  for (double v : values) sum += v;
  r.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  r.variance = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  r.standard_error = std::sqrt(r.variance / static_cast<double>(n));
  r.values = std::move(values);
  return r;
}

ReplicationResult replicate(const ReplicationPlan& plan, const Estimator& estimator) {
  check_plan(plan);
  std::vector<double> values(plan.replications);
  const long count = static_cast<long>(plan.replications);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    Rng rng = make_stream(plan.master_seed, static_cast<std::uint64_t>(i));
    values[static_cast<std::size_t>(i)] = estimator(rng, static_cast<std::size_t>(i));
  }
  return summarize(std::move(values));
}

ReplicationResult replicate_serial(const ReplicationPlan& plan, const Estimator& estimator) {
  check_plan(plan);
  std::vector<double> values(plan.replications);
  for (std::size_t i = 0; i < plan.replications; ++i) {
    Rng rng = make_stream(plan.master_seed, i);
    values[i] = estimator(rng, i);
  }
  return summarize(std::move(values));
}

std::vector<std::vector<double>> replicate_vector(const ReplicationPlan& plan, const VectorEstimator& estimator) {
  check_plan(plan);
  std::vector<std::vector<double>> rows(plan.replications);
  const long count = static_cast<long>(plan.replications);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    Rng rng = make_stream(plan.master_seed, static_cast<std::uint64_t>(i));
    rows[static_cast<std::size_t>(i)] = estimator(rng, static_cast<std::size_t>(i));
  }
  return rows;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw Error("KS statistic needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

MomentSummary moments(const std::vector<double>& values) {
  MomentSummary m;
  const double n = static_cast<double>(values.size());
  if (values.size() < 2) return m;
  for (double v : values) m.mean += v;
  m.mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.variance = m2 * n / (n - 1.0);
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

Matrix correlation_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) throw Error("correlation needs at least two rows");
  const std::size_t dim = rows.front().size();
  const double n = static_cast<double>(rows.size());
  Vector mean = Vector::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& r : rows)
    for (std::size_t j = 0; j < dim; ++j) mean(j) += r[j] / n;
  Matrix cov = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& r : rows)
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b) cov(a, b) += (r[a] - mean(a)) * (r[b] - mean(b));
  Matrix corr(cov.rows(), cov.cols());
  for (Eigen::Index a = 0; a < cov.rows(); ++a)
    for (Eigen::Index b = 0; b < cov.cols(); ++b) corr(a, b) = cov(a, b) / std::sqrt(cov(a, a) * cov(b, b));
  return corr;
}

FactorialMomentResult factorial_moment_check(const PointSampler& sampler, const std::vector<TestSet>& sets,
                                             const ReplicationPlan& plan) {
  check_plan(plan);
  const std::size_t r = sets.size();
  if (r == 0) throw Error("factorial moment check needs at least one test set");
  // Per replication: tuple count followed by the count in each set.
  const auto rows = replicate_vector(plan, [&](Rng& rng, std::size_t) {
    const auto points = sampler(rng);
    std::vector<std::vector<std::size_t>> members(r);
    for (std::size_t p = 0; p < points.size(); ++p)
      for (std::size_t i = 0; i < r; ++i)
        if (sets[i](points[p])) members[i].push_back(p);
    std::vector<double> out(r + 1);
    std::vector<std::size_t> used;
    out[0] = injective_tuples(members, 0, used);
    for (std::size_t i = 0; i < r; ++i) out[i + 1] = static_cast<double>(members[i].size());
    return out;
  });
  const double reps = static_cast<double>(rows.size());
  std::vector<double> means(r + 1, 0.0);
  for (const auto& row : rows)
    for (std::size_t j = 0; j <= r; ++j) means[j] += row[j] / reps;

  FactorialMomentResult res;
  res.replications = rows.size();
  res.empirical = means[0];
  res.product_of_means = 1.0;
  for (std::size_t i = 1; i <= r; ++i) res.product_of_means *= means[i];
  // Delta method: linearize the product of means around the sample means.
  std::vector<double> partial(r, 1.0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (i != j) partial[i] *= means[j + 1];
  std::vector<double> g;
  g.reserve(rows.size());
  for (const auto& row : rows) {
    double v = row[0];
    for (std::size_t i = 0; i < r; ++i) v -= partial[i] * row[i + 1];
    g.push_back(v);
  }
  res.standard_error = summarize(std::move(g)).standard_error;
  const double diff = res.empirical - res.product_of_means;
  res.z = res.standard_error > 0.0 ? diff / res.standard_error : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
  return res;
}

CltDiagnostics clt_diagnostics(const std::vector<std::vector<double>>& values, const std::vector<double>& rhos, int n,
                               int k) {
  if (values.size() != rhos.size()) throw Error("one value set per scale is required");
  CltDiagnostics d;
  for (std::size_t s = 0; s < values.size(); ++s) {
    if (values[s].size() < 500) throw Error("CLT diagnostics need at least 500 replications per scale");
    const MomentSummary m = moments(values[s]);
    const double sd = std::sqrt(m.variance);
    std::vector<double> z;
    z.reserve(values[s].size());
    for (double v : values[s]) z.push_back(sd > 0.0 ? (v - m.mean) / sd : 0.0);
    CltScale sc;
    sc.rho = rhos[s];
    sc.ks = ks_statistic(std::move(z), normal_cdf);
    sc.skewness = m.skewness;
    sc.excess_kurtosis = m.excess_kurtosis;
    sc.mean = m.mean;
    sc.normalized_variance = m.variance / std::pow(rhos[s], n + k);
    d.scales.push_back(sc);
  }
  d.ks_decreasing = d.scales.size() >= 2;
  for (std::size_t s = 1; s < d.scales.size(); ++s)
    if (!(d.scales[s].ks < d.scales[s - 1].ks)) d.ks_decreasing = false;
  if (d.scales.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = static_cast<double>(d.scales.size());
    for (const auto& sc : d.scales) {
      const double x = std::log(sc.rho), y = std::log(sc.ks);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    d.ks_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }
  return d;
}

nlohmann::json to_json(const CltDiagnostics& d) {
  nlohmann::json scales = nlohmann::json::array();
  for (const auto& s : d.scales) {
    scales.push_back({{"rho", s.rho},
                      {"ks", s.ks},
                      {"skewness", s.skewness},
                      {"excessKurtosis", s.excess_kurtosis},
                      {"mean", s.mean},
                      {"normalizedVariance", s.normalized_variance}});
  }
  return {{"scales", scales}, {"ksDecreasing", d.ks_decreasing}, {"ksSlope", d.ks_slope}};
}

}  // namespace flatproc
