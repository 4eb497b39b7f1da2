#pragma once

#include <vector>

#include "json.hpp"

#include "flatproc/measures.hpp"

namespace flatproc {

// Finite metric space given by its distance table.
class MetricSample {
 public:
  // Validates symmetry, zero diagonal and the triangle inequality (tolerance tol).
  static MetricSample from_table(Matrix table, double tol = 1e-9);
  // Geodesic (angular) distance between unit vectors.
  static MetricSample sphere(const std::vector<Vector>& points);
  // Frobenius norm of the direct rotation minus identity.
  static MetricSample grassmann(const std::vector<Subspace>& points);

  std::size_t size() const { return static_cast<std::size_t>(table_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return table_(i, j); }
  const Matrix& table() const { return table_; }

 private:
  Matrix table_;
};

// Two measures on one merged support.
struct MeasurePair {
  MetricSample space;
  std::vector<double> mu;
  std::vector<double> nu;
};

MeasurePair merge_sphere_measures(const SphereMeasure& mu, const SphereMeasure& nu, double tol = 1e-9);
MeasurePair merge_grassmann_measures(const GrassmannMeasure& mu, const GrassmannMeasure& nu, double tol = 1e-9);

double bl_distance(const MetricSample& s, const std::vector<double>& mu, const std::vector<double>& nu);
double bl_distance(const MeasurePair& p);

struct ProhorovOptions {
  // Subsets enumerates every subset (at most 20 support points). Flow decides each epsilon by a
  // bipartite max-flow over pairs closer than epsilon, which is exact at any support size.
  enum class Method { Auto, Subsets, Flow };
  Method method = Method::Auto;  // Subsets up to 20 points, Flow above
  double tolerance = 1e-6;
};

struct ProhorovResult {
  double value = 0.0;
  ProhorovOptions::Method method = ProhorovOptions::Method::Subsets;  // method actually used
};

ProhorovResult prohorov_distance(const MetricSample& s, const std::vector<double>& mu, const std::vector<double>& nu,
                                 const ProhorovOptions& opt = {});
ProhorovResult prohorov_distance(const MeasurePair& p, const ProhorovOptions& opt = {});

enum class StabilityCase { SmZonoid, HyperplaneIntersection, LineProximity };

struct StabilityRow {
  double t = 0.0;
  double bl_lhs = 0.0;
  double bl_rhs = 0.0;
  double p_lhs = 0.0;
  double p_rhs = 0.0;
  double ratio = 0.0;              // bl_lhs / bl_rhs^(bl exponent)
  double exponent_estimate = 0.0;  // log(bl_lhs) / log(bl_rhs)
};

struct StabilityReport {
  StabilityCase kind = StabilityCase::SmZonoid;
  int n = 0;
  int order = 0;  // m for zonoids, r for intersections, 2 for proximity
  double bl_exponent = 0.0;
  double p_exponent = 0.0;  // 0 when no Prohorov estimate is available for the case
  std::vector<StabilityRow> rows;
  bool bounded_ratios = false;
  bool co_vanishing = false;
};

// Measures on the right-hand side of each stability estimate.
SphereMeasure stability_image_sphere(StabilityCase kind, const SphereMeasure& mu, int order);
GrassmannMeasure stability_image_grassmann(const SphereMeasure& mu, int order);

// Perturbs each atom direction by a rotation of angle t and each weight by factor (1 + t/2).
SphereMeasure perturb_measure(const SphereMeasure& mu, double t, std::uint64_t seed);

// mu and each family member must be atomic, lie in M_e(rho, R); ts labels the family.
StabilityReport stability_harness(StabilityCase kind, const SphereMeasure& mu, const std::vector<SphereMeasure>& family,
                                  const std::vector<double>& ts, int order, double rho, double big_r);

nlohmann::json to_json(const StabilityReport& report);

}  // namespace flatproc
