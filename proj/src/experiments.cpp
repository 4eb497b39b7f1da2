#include "flatproc/experiments.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "flatproc/special.hpp"

namespace flatproc {

double enumeration_radius(const WindowDescriptor& a, double delta) { return a.circumradius() + 0.5 * delta; }

double simulate_f_alpha(const FlatProcessSpec& spec, const WindowDescriptor& a, double delta, double alpha,
                        const DirectionSet& c, Rng& rng) {
  const FlatSample s = sample_flats(spec, enumeration_radius(a, delta), rng);
  return f_alpha(proximity(s, delta), alpha, a, c);
}

std::vector<double> simulate_f_alpha(const FlatProcessSpec& spec, const WindowDescriptor& a, double delta,
                                     const std::vector<double>& alphas, const DirectionSet& c, Rng& rng) {
  const FlatSample s = sample_flats(spec, enumeration_radius(a, delta), rng);
  const SegmentProcessSample seg = proximity(s, delta);
  std::vector<double> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) out.push_back(f_alpha(seg, alpha, a, c));
  return out;
}

double simulate_scaled_minimum(const FlatProcessSpec& spec, const WindowDescriptor& a, double rho, double delta,
                               double alpha, const DirectionSet& c, Rng& rng) {
  const int n = spec.n, k = spec.k;
  if (2 * k >= n) throw Error("scaled minimum requires 2k < n");
  const WindowDescriptor scaled = a.with_scale(a.scale() * rho);
  const FlatSample s = sample_flats(spec, enumeration_radius(scaled, delta), rng);
  const double first = order_statistics(proximity(s, delta), alpha, scaled, c, 1).front();
  return std::pow(rho, n * alpha / (n - 2 * k)) * first;
}

double simulate_intersection_count(const FlatProcessSpec& spec, int r, Rng& rng) {
  // An intersection flat meets the unit ball only if every generating flat does.
  const FlatSample s = sample_flats(spec, 1.0, rng);
  const Vector origin = Vector::Zero(spec.n);
  double count = 0.0;
  for (const Flat& f : intersections(s, r).flats)
    if (f.distance_to(origin) <= 1.0) count += 1.0;
  return count;
}

PointSampler cube_process_sampler(int d, int kappa, CubeIndexBox box, bool stationarize) {
  auto dist = std::make_shared<const FactorialDistribution>(build_factorial_distribution(kappa));
  return [d, dist, box = std::move(box), stationarize](Rng& rng) {
    std::vector<Vector> points;
    for (auto& p : sample_cube_process(d, *dist, box, rng, stationarize)) points.push_back(std::move(p.x));
    return points;
  };
}

SphereMeasure random_sphere_measure(int n, std::size_t pairs, double mass, Rng& rng) {
  std::uniform_real_distribution<double> w(0.5, 1.5);
  std::vector<SpherePair> out;
  double total = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    out.push_back({sample_unit_sphere(n, rng), w(rng)});
    total += out.back().weight;
  }
  for (auto& p : out) p.weight *= mass / total;
  return SphereMeasure::atoms(n, std::move(out));
}

GrassmannMeasure random_grassmann_measure(int n, int k, std::size_t atoms, Rng& rng) {
  std::uniform_real_distribution<double> w(0.5, 1.5);
  std::vector<GrassmannAtom> out;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    out.push_back({haar_sample(n, k, rng), w(rng)});
    total += out.back().weight;
  }
  for (auto& a : out) a.weight /= total;
  return GrassmannMeasure::discrete(n, k, std::move(out));
}

double mixture_discrepancy(const SphereMeasure& a, const SphereMeasure& b, double span_tol) {
  if (a.kind() != SphereMeasure::Kind::SubsphereMixture || b.kind() != SphereMeasure::Kind::SubsphereMixture)
    throw Error("mixture comparison requires subsphere mixtures");
  const auto ca = a.merged(span_tol).components();
  const auto cb = b.merged(span_tol).components();
  if (ca.size() != cb.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(cb.size(), false);
  double worst = 0.0;
  for (const auto& x : ca) {
    std::size_t match = cb.size();
    for (std::size_t j = 0; j < cb.size(); ++j) {
      if (!used[j] && x.subspace.k() == cb[j].subspace.k() && same_span(x.subspace, cb[j].subspace, span_tol)) {
        match = j;
        break;
      }
    }
    if (match == cb.size()) return std::numeric_limits<double>::infinity();
    used[match] = true;
    worst = std::max(worst, std::abs(x.weight - cb[match].weight));
  }
  return worst;
}

}  // namespace flatproc
