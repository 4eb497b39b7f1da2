#include "flatproc/closed_form.hpp"

#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "flatproc/special.hpp"
#include "flatproc/zonoid.hpp"

namespace flatproc {

namespace {

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  Estimate estimate(double scale = 1.0) const {
    if (count == 0) return {};
    const double m = sum / static_cast<double>(count);
    double se = 0.0;
    if (count > 1) {
      const double var = std::max(0.0, (sum_sq - count * m * m) / static_cast<double>(count - 1));
      se = std::sqrt(var / static_cast<double>(count));
    }
    return {scale * m, std::abs(scale) * se};
  }
};

void check_proximity_dims(int n, int k) {
  if (k < 1 || 2 * k >= n) throw Error("requires 2k < n and k >= 1");
}

// Mean of [L,M] for independent Haar L in G(n,k1), M in G(n,k2).
double haar_determinant_mean(int n, int k1, int k2) {
  if (k1 == 0 || k2 == 0 || k1 == n || k2 == n) return 1.0;
  if (k1 + k2 <= n) return c_constant(n, k1, k2);
  return c_constant(n, n - k1, n - k2);
}

Subspace orth_of_sum(const Subspace& l, const Subspace& m) { return complement(span_sum(l, m)); }

double sigma_exact_or_sampled(const DirectionSet& c, const Subspace& u, Rng& rng, std::size_t samples) {
  return c.subsphere_measure(u, rng, samples).value;
}

// Ordered tuples over atom lists; calls visit(indices) for each.
void for_each_tuple(const std::vector<std::size_t>& sizes, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  for (auto s : sizes)
    if (s == 0) return;
  std::vector<std::size_t> idx(sizes.size(), 0);
  for (;;) {
    visit(idx);
    int pos = static_cast<int>(sizes.size()) - 1;
    while (pos >= 0 && ++idx[pos] == sizes[pos]) {
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

Subspace draw_normalized(const GrassmannMeasure& q, Rng& rng) { return q.sample(rng); }

}  // namespace

double c_constant(int n, int r, int s) {
  if (r <= 0 || s <= 0 || r > n - 1 || s > n - 1 || n - r - s < 0) {
    throw Error("c(n,r,s) requires 0 < r,s <= n-1 and r + s <= n");
  }
  return binom(n - r, s) * kappa(n - r) * kappa(n - s) / (binom(n, s) * kappa(n) * kappa(n - r - s));
}

Estimate determinant_integral(const GrassmannMeasure& q1, const GrassmannMeasure& q2, Rng&, std::size_t) {
  const int n = q1.n();
  if (q1.is_isotropic() || q2.is_isotropic()) {
    return {q1.total_mass() * q2.total_mass() * haar_determinant_mean(n, q1.k(), q2.k()), 0.0};
  }
  double s = 0.0;
  for (const auto& a : q1.atoms())
    for (const auto& b : q2.atoms()) s += a.weight * b.weight * subspace_determinant(a.subspace, b.subspace);
  return {s, 0.0};
}

Estimate directional_integral(const GrassmannMeasure& q1, const GrassmannMeasure& q2, const DirectionSet& c,
                              Rng& rng, std::size_t samples) {
  const int n = q1.n();
  const int codim = n - q1.k() - q2.k();
  if (codim < 1) throw Error("directional integral requires k1 + k2 < n");
  if (c.tag() == DirectionSet::Tag::FullSphere) {
    const Estimate j = determinant_integral(q1, q2, rng, samples);
    return {omega(codim) * j.value, omega(codim) * j.standard_error};
  }
  if (!q1.is_isotropic() && !q2.is_isotropic()) {
    double s = 0.0;
    double var = 0.0;
    for (const auto& a : q1.atoms()) {
      for (const auto& b : q2.atoms()) {
        const double det = subspace_determinant(a.subspace, b.subspace);
        if (det <= kGeneralPositionTol) continue;
        const Estimate sig = c.subsphere_measure(orth_of_sum(a.subspace, b.subspace), rng, samples);
        const double w = a.weight * b.weight * det;
        s += w * sig.value;
        var += std::pow(w * sig.standard_error, 2);
      }
    }
    return {s, std::sqrt(var)};
  }
  Accumulator acc;
  const std::size_t inner = c.tag() == DirectionSet::Tag::Custom ? 16 : 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Subspace l = draw_normalized(q1, rng);
    const Subspace m = draw_normalized(q2, rng);
    const double det = subspace_determinant(l, m);
    acc.add(det > kGeneralPositionTol ? det * sigma_exact_or_sampled(c, orth_of_sum(l, m), rng, inner) : 0.0);
  }
  return acc.estimate(q1.total_mass() * q2.total_mass());
}

Estimate proximity_intensity(int n, int k, double gamma, const GrassmannMeasure& q, double delta, Rng& rng) {
  check_proximity_dims(n, k);
  if (q.n() != n || q.k() != k) throw Error("directional distribution does not match (n, k)");
  const Estimate j = determinant_integral(q, q, rng);
  const double f = 0.5 * gamma * gamma * kappa(n - 2 * k) * std::pow(delta, n - 2 * k);
  return {f * j.value, f * j.standard_error};
}

Estimate proximity_intensity_two(int n, int k1, int k2, double gamma1, double gamma2, const GrassmannMeasure& q1,
                                 const GrassmannMeasure& q2, double delta, Rng& rng) {
  if (k1 < 1 || k2 < 1 || k1 + k2 >= n) throw Error("requires k1 + k2 < n");
  const Estimate j = determinant_integral(q1, q2, rng);
  const double f = gamma1 * gamma2 * kappa(n - k1 - k2) * std::pow(delta, n - k1 - k2);
  return {f * j.value, f * j.standard_error};
}

Estimate proximity_directional(int n, int k, const GrassmannMeasure& q, const DirectionSet& c, Rng& rng,
                               std::size_t samples) {
  check_proximity_dims(n, k);
  const double j = determinant_integral(q, q, rng).value;
  if (j <= 0.0) throw Error("degenerate directional distribution");
  const Estimate d = directional_integral(q, q, c, rng, samples);
  const double norm = omega(n - 2 * k) * j;
  return {d.value / norm, d.standard_error / norm};
}

SphereMeasure proximity_directional_measure(const GrassmannMeasure& q) {
  if (q.k() != 1 || q.is_isotropic()) throw Error("directional measure requires a discrete line distribution");
  const int n = q.n();
  if (n < 3) throw Error("requires 2k < n and k >= 1");
  std::vector<SubsphereComponent> comps;
  double total = 0.0;
  for (const auto& a : q.atoms()) {
    for (const auto& b : q.atoms()) {
      const double det = subspace_determinant(a.subspace, b.subspace);
      if (det <= kGeneralPositionTol) continue;
      comps.push_back({orth_of_sum(a.subspace, b.subspace), a.weight * b.weight * det});
      total += a.weight * b.weight * det;
    }
  }
  if (total <= 0.0) throw Error("degenerate directional distribution");
  const double norm = 1.0 / (omega(n - 2) * total);
  for (auto& c : comps) c.weight *= norm;
  return SphereMeasure::mixture(n, std::move(comps)).merged();
}

IntersectionDensity intersection_density(int n, std::span<const double> gammas, std::span<const GrassmannMeasure> qs,
                                         Rng& rng, std::size_t samples) {
  const int r = static_cast<int>(qs.size());
  if (r < 2 || gammas.size() != qs.size()) throw Error("intersection density needs r >= 2 matched inputs");
  int total_dim = 0;
  double gamma_prod = 1.0;
  bool any_iso = false, all_iso = true;
  for (int i = 0; i < r; ++i) {
    total_dim += qs[i].k();
    gamma_prod *= gammas[i] * qs[i].total_mass();
    any_iso = any_iso || qs[i].is_isotropic();
    all_iso = all_iso && qs[i].is_isotropic();
  }
  if (total_dim < (r - 1) * n) throw Error("requires sum of k_i >= (r-1)n");
  const int q_dim = total_dim - (r - 1) * n;

  IntersectionDensity out;
  if (!any_iso) {
    std::vector<std::size_t> sizes;
    for (const auto& q : qs) sizes.push_back(q.atoms().size());
    std::vector<GrassmannAtom> atoms;
    double sum = 0.0;
    std::vector<Subspace> dirs(static_cast<std::size_t>(r));
    for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
      double w = 1.0;
      for (int i = 0; i < r; ++i) {
        dirs[i] = qs[i].atoms()[idx[i]].subspace;
        w *= gammas[i] * qs[i].atoms()[idx[i]].weight;
      }
      const double det = subspace_determinant(dirs);
      if (det <= kGeneralPositionTol) return;
      atoms.push_back({intersect(dirs), w * det});
      sum += w * det;
    });
    out.gamma = {sum, 0.0};
    out.measure = GrassmannMeasure::discrete(n, q_dim, std::move(atoms)).merged();
    return out;
  }
  if (r == 2) {
    out.gamma = {gamma_prod * haar_determinant_mean(n, qs[0].k(), qs[1].k()), 0.0};
  } else {
    Accumulator acc;
    std::vector<Subspace> dirs(static_cast<std::size_t>(r));
    for (std::size_t s = 0; s < samples; ++s) {
      for (int i = 0; i < r; ++i) dirs[i] = draw_normalized(qs[i], rng);
      acc.add(subspace_determinant(dirs));
    }
    out.gamma = acc.estimate(gamma_prod);
  }
  if (all_iso && out.gamma.value > 0.0) out.measure = GrassmannMeasure::isotropic(n, q_dim, out.gamma.value);
  return out;
}

IntersectionDensity intersection_density_sr(int n, double gamma, const GrassmannMeasure& q, int r, Rng& rng,
                                            std::size_t samples) {
  if (r < 2) throw Error("intersection density needs r >= 2");
  const int k = q.k();
  if (r * k < (r - 1) * n) throw Error("requires sum of k_i >= (r-1)n");
  const int q_dim = r * k - (r - 1) * n;
  const double scale = std::pow(gamma, r) / factorial(r);
  IntersectionDensity out;
  if (!q.is_isotropic()) {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(r), q.atoms().size());
    std::vector<GrassmannAtom> atoms;
    double sum = 0.0;
    std::vector<Subspace> dirs(static_cast<std::size_t>(r));
    for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
      double w = scale;
      for (int i = 0; i < r; ++i) {
        dirs[i] = q.atoms()[idx[i]].subspace;
        w *= q.atoms()[idx[i]].weight;
      }
      const double det = subspace_determinant(dirs);
      if (det <= kGeneralPositionTol) return;
      atoms.push_back({intersect(dirs), w * det});
      sum += w * det;
    });
    out.gamma = {sum, 0.0};
    out.measure = GrassmannMeasure::discrete(n, q_dim, std::move(atoms)).merged();
    return out;
  }
  const double mass = scale * std::pow(q.total_mass(), r);
  if (r == 2) {
    out.gamma = {mass * haar_determinant_mean(n, k, k), 0.0};
  } else {
    Accumulator acc;
    std::vector<Subspace> dirs(static_cast<std::size_t>(r));
    for (std::size_t s = 0; s < samples; ++s) {
      for (int i = 0; i < r; ++i) dirs[i] = haar_sample(n, k, rng);
      acc.add(subspace_determinant(dirs));
    }
    out.gamma = acc.estimate(mass);
  }
  if (out.gamma.value > 0.0) out.measure = GrassmannMeasure::isotropic(n, q_dim, out.gamma.value);
  return out;
}

GrassmannMeasure hyperplane_intersection(int n, double gamma, const SphereMeasure& q, int r) {
  if (r < 2 || r > n - 1) throw Error("r must satisfy 2 <= r <= n-1");
  const double scale = std::pow(gamma, r) / factorial(r);
  if (q.kind() == SphereMeasure::Kind::Uniform) {
    // Successive distances of uniform normals to the span of the previous ones.
    double mean_det = 1.0;
    for (int j = 1; j < r; ++j) mean_det *= c_constant(n, j, 1);
    return GrassmannMeasure::isotropic(n, n - r, scale * std::pow(q.total_mass(), r) * mean_det);
  }
  if (q.kind() != SphereMeasure::Kind::AtomsEven) throw Error("construction requires an atomic measure");
  std::vector<Subspace> hyperplanes;
  for (const auto& p : q.pairs()) hyperplanes.push_back(complement(orthonormalize(std::vector<Vector>{p.u}, n)));
  std::vector<std::size_t> sizes(static_cast<std::size_t>(r), hyperplanes.size());
  std::vector<GrassmannAtom> atoms;
  std::vector<Subspace> dirs(static_cast<std::size_t>(r));
  for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
    double w = scale;
    for (int i = 0; i < r; ++i) {
      dirs[i] = hyperplanes[idx[i]];
      w *= q.pairs()[idx[i]].weight;
    }
    const double det = subspace_determinant(dirs);
    if (det <= kGeneralPositionTol) return;
    atoms.push_back({intersect(dirs), w * det});
  });
  return GrassmannMeasure::discrete(n, n - r, std::move(atoms)).merged();
}

Estimate mean_f_alpha(int n, int k, double gamma, const GrassmannMeasure& q, double delta, double alpha,
                      const WindowDescriptor& a, const DirectionSet& c, double rho, Rng& rng, std::size_t samples) {
  check_proximity_dims(n, k);
  if (alpha < 0.0) throw Error("alpha must be nonnegative");
  const Estimate j = directional_integral(q, q, c, rng, samples);
  const double e = n - 2 * k + alpha;
  const double f = 0.5 * gamma * gamma * std::pow(delta, e) / e * std::pow(rho, n) * a.volume();
  return {f * j.value, f * j.standard_error};
}

Estimate b_function(const Subspace& m, const GrassmannMeasure& q, const DirectionSet& c, Rng& rng,
                    std::size_t samples) {
  const int n = m.n();
  const int codim = n - m.k() - q.k();
  if (codim < 1) throw Error("b(M;C) requires k1 + k2 < n");
  if (!q.is_isotropic()) {
    double s = 0.0, var = 0.0;
    for (const auto& a : q.atoms()) {
      const double det = subspace_determinant(a.subspace, m);
      if (det <= kGeneralPositionTol) continue;
      const Estimate sig = c.subsphere_measure(orth_of_sum(a.subspace, m), rng, samples);
      s += a.weight * det * sig.value;
      var += std::pow(a.weight * det * sig.standard_error, 2);
    }
    return {s, std::sqrt(var)};
  }
  if (c.tag() == DirectionSet::Tag::FullSphere) {
    return {q.total_mass() * omega(codim) * haar_determinant_mean(n, q.k(), m.k()), 0.0};
  }
  Accumulator acc;
  for (std::size_t i = 0; i < samples; ++i) {
    const Subspace l = haar_sample(n, q.k(), rng);
    const double det = subspace_determinant(l, m);
    acc.add(det > kGeneralPositionTol ? det * sigma_exact_or_sampled(c, orth_of_sum(l, m), rng, 1) : 0.0);
  }
  return acc.estimate(q.total_mass());
}

double ball_section_square_integral(int n, int k, double radius) {
  return kappa(k) * kappa(k) * omega(n - k) * 0.5 * boost::math::beta(k + 1.0, 0.5 * (n - k)) *
         std::pow(radius, n + k);
}

Estimate section_square_integral(const WindowDescriptor& a, const Subspace& m, Rng& rng, std::size_t samples) {
  const int n = a.n();
  const int k = m.k();
  if (a.shape() == WindowDescriptor::Shape::Ball) return {ball_section_square_integral(n, k, a.radius()), 0.0};
  const Subspace comp = complement(m);
  const double rc = a.circumradius();
  const double region = kappa(n - k) * std::pow(rc, n - k);
  std::uniform_real_distribution<double> unif;
  auto uniform_ball = [&](int dim, double radius) {
    return Vector(sample_unit_sphere(dim, rng) * (radius * std::pow(unif(rng), 1.0 / dim)));
  };
  // Unbiased estimate of the k-volume of the section through p, for k >= 2.
  auto section_volume = [&](const Vector& p, double radius) {
    const std::size_t inner = 64;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < inner; ++i) {
      if (a.contains(Vector(p + m.basis() * uniform_ball(k, radius)))) ++hits;
    }
    return kappa(k) * std::pow(radius, k) * static_cast<double>(hits) / static_cast<double>(inner);
  };
  Accumulator acc;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector y = uniform_ball(n - k, rc);
    const Vector p = comp.basis() * y;
    if (k == 1) {
      const double len = a.chord_length(p, m.basis_vector(0));
      acc.add(len * len);
    } else {
      const double r = std::sqrt(std::max(0.0, rc * rc - y.squaredNorm()));
      acc.add(section_volume(p, r) * section_volume(p, r));
    }
  }
  return acc.estimate(region);
}

double chord_power_integral_ball(int n, double p, double radius) {
  auto integrand = [&](double t) {
    const double chord = 2.0 * std::sqrt(std::max(0.0, radius * radius - t * t));
    return std::pow(chord, p) * std::pow(t, n - 2);
  };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, radius, 15, 1e-13);
  return omega(n - 1) * integral;
}

double covariance_integral_chord_form(int n, int k, double radius) {
  check_proximity_dims(n, k);
  const double b = omega(n - 2 * k) * c_constant(n, k, k);
  return kappa(k) / (k + 1.0) * b * b * chord_power_integral_ball(n, k + 1.0, radius);
}

Estimate covariance_integral(int n, int k, const GrassmannMeasure& q, const WindowDescriptor& a,
                             const DirectionSet& ci, const DirectionSet& cj, Rng& rng, const CovarianceOptions& opt) {
  check_proximity_dims(n, k);
  if (a.n() != n) throw Error("window dimension does not match n");
  const bool full = ci.tag() == DirectionSet::Tag::FullSphere && cj.tag() == DirectionSet::Tag::FullSphere;
  if (!q.is_isotropic()) {
    double s = 0.0, var = 0.0;
    for (const auto& atom : q.atoms()) {
      const Estimate bi = b_function(atom.subspace, q, ci, rng, opt.inner_samples);
      const Estimate bj = b_function(atom.subspace, q, cj, rng, opt.inner_samples);
      const Estimate sec = section_square_integral(a, atom.subspace, rng, opt.section_samples);
      const double w = atom.weight * bi.value * bj.value;
      s += w * sec.value;
      var += std::pow(w * sec.standard_error, 2);
    }
    return {s, std::sqrt(var)};
  }
  const double b_full = q.total_mass() * omega(n - 2 * k) * c_constant(n, k, k);
  if (full && a.shape() == WindowDescriptor::Shape::Ball) {
    return {q.total_mass() * b_full * b_full * ball_section_square_integral(n, k, a.radius()), 0.0};
  }
  Accumulator acc;
  const std::size_t section_inner = a.shape() == WindowDescriptor::Shape::Ball ? 1 : std::max<std::size_t>(1, opt.inner_samples);
  for (std::size_t s = 0; s < opt.outer_samples; ++s) {
    const Subspace m = haar_sample(n, k, rng);
    const double bi = full ? b_full : b_function(m, q, ci, rng, opt.inner_samples).value;
    const double bj = full ? b_full : b_function(m, q, cj, rng, opt.inner_samples).value;
    acc.add(bi * bj * section_square_integral(a, m, rng, section_inner).value);
  }
  return acc.estimate(q.total_mass());
}

Estimate asymptotic_covariance(int n, int k, double gamma, const GrassmannMeasure& q, double delta, double alpha_i,
                               double alpha_j, const WindowDescriptor& a, const DirectionSet& ci,
                               const DirectionSet& cj, Rng& rng, const CovarianceOptions& opt) {
  const Estimate i = covariance_integral(n, k, q, a, ci, cj, rng, opt);
  const double d = n - 2 * k;
  const double f = std::pow(gamma, 3) * std::pow(delta, 2 * d + alpha_i + alpha_j) / ((d + alpha_i) * (d + alpha_j));
  return {f * i.value, f * i.standard_error};
}

Estimate weibull_beta(int n, int k, double gamma, const GrassmannMeasure& q, const WindowDescriptor& a,
                      const DirectionSet& c, Rng& rng, std::size_t samples) {
  check_proximity_dims(n, k);
  const Estimate j = directional_integral(q, q, c, rng, samples);
  const double f = gamma * gamma / (2.0 * (n - 2 * k)) * a.volume();
  return {f * j.value, f * j.standard_error};
}

double weibull_cdf(double x, double beta, int n, int k, double alpha) {
  if (x <= 0.0) return 0.0;
  return 1.0 - std::exp(-beta * std::pow(x, (n - 2 * k) / alpha));
}

double weibull_limit_intensity(double beta, int n, int k, double alpha, double b0, double b1) {
  const double e = (n - 2 * k) / alpha;
  return beta * (std::pow(std::max(b1, 0.0), e) - std::pow(std::max(b0, 0.0), e));
}

double isoperimetric_bound(int n, double gamma, double delta) {
  if (n < 3) throw Error("isoperimetric bound requires n >= 3");
  return (n - 1.0) / (2.0 * n) * kappa(n - 1) * kappa(n - 1) / kappa(n) * gamma * gamma * std::pow(delta, n - 2);
}

nlohmann::json make_record(const std::string& name, const Estimate& e, nlohmann::json inputs) {
  return {{"name", name}, {"value", e.value}, {"standardError", e.standard_error}, {"inputs", std::move(inputs)}};
}

}  // namespace flatproc
