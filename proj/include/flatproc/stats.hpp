#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "flatproc/core.hpp"

namespace flatproc {

struct ReplicationPlan {
  std::size_t replications = 2;
  std::uint64_t master_seed = 0;
  std::string estimator;
  nlohmann::json parameters = nlohmann::json::object();
};

struct ReplicationResult {
  double mean = 0.0;
  double variance = 0.0;
  double standard_error = 0.0;
  std::vector<double> values;
};

using Estimator = std::function<double(Rng&, std::size_t replication)>;
using VectorEstimator = std::function<std::vector<double>(Rng&, std::size_t replication)>;

// Replication i always draws from make_stream(master_seed, i); the reduction runs in index
// order, so parallel and serial runs agree bitwise.
ReplicationResult replicate(const ReplicationPlan& plan, const Estimator& estimator);
ReplicationResult replicate_serial(const ReplicationPlan& plan, const Estimator& estimator);
// Raw vectors per replication, indexed [replication][component].
std::vector<std::vector<double>> replicate_vector(const ReplicationPlan& plan, const VectorEstimator& estimator);

ReplicationResult summarize(std::vector<double> values);

double normal_cdf(double x);
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};
MomentSummary moments(const std::vector<double>& values);
Matrix correlation_matrix(const std::vector<std::vector<double>>& rows);

// Point configuration produced by one replication of a process.
using PointSampler = std::function<std::vector<Vector>(Rng&)>;
using TestSet = std::function<bool(const Vector&)>;

struct FactorialMomentResult {
  double empirical = 0.0;         // mean number of ordered r-tuples of distinct points, i-th in A_i
  double product_of_means = 0.0;  // product over i of the mean count in A_i
  double standard_error = 0.0;
  double z = 0.0;
  std::size_t replications = 0;
};

FactorialMomentResult factorial_moment_check(const PointSampler& sampler, const std::vector<TestSet>& sets,
                                             const ReplicationPlan& plan);

struct CltScale {
  double rho = 0.0;
  double ks = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double mean = 0.0;
  double normalized_variance = 0.0;  // variance / rho^(n+k)
};

struct CltDiagnostics {
  std::vector<CltScale> scales;
  bool ks_decreasing = false;
  double ks_slope = 0.0;  // fitted slope of log KS against log rho (diagnostic only)
};

CltDiagnostics clt_diagnostics(const std::vector<std::vector<double>>& values, const std::vector<double>& rhos, int n,
                               int k);

nlohmann::json to_json(const CltDiagnostics& d);

}  // namespace flatproc
