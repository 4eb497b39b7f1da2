#include "flatproc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "flatproc/special.hpp"

namespace flatproc {

namespace {

struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  double se() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - count * m * m) / static_cast<double>(count - 1));
    return std::sqrt(var / static_cast<double>(count));
  }
};

void require_positive(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw Error("measure weights must be strictly positive");
}

}  // namespace

// ---------------------------------------------------------------- GrassmannMeasure

GrassmannMeasure GrassmannMeasure::discrete(int n, int k, std::vector<GrassmannAtom> atoms) {
  GrassmannMeasure m;
  m.n_ = n;
  m.k_ = k;
  for (const auto& a : atoms) {
    if (a.subspace.n() != n || a.subspace.k() != k) throw Error("atom has wrong dimension");
    require_positive(a.weight);
  }
  m.atoms_ = std::move(atoms);
  return m;
}

GrassmannMeasure GrassmannMeasure::isotropic(int n, int k, double mass) {
  if (k < 0 || k > n) throw Error("isotropic measure requires 0 <= k <= n");
  require_positive(mass);
  GrassmannMeasure m;
  m.n_ = n;
  m.k_ = k;
  m.isotropic_ = true;
  m.iso_mass_ = mass;
  return m;
}

double GrassmannMeasure::total_mass() const {
  if (isotropic_) return iso_mass_;
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

GrassmannMeasure GrassmannMeasure::scaled(double t) const {
  GrassmannMeasure m = *this;
  m.iso_mass_ *= t;
  for (auto& a : m.atoms_) a.weight *= t;
  return m;
}

GrassmannMeasure GrassmannMeasure::merged(double tol) const {
  if (isotropic_) return *this;
  std::vector<GrassmannAtom> out;
  for (const auto& a : atoms_) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const GrassmannAtom& b) { return same_span(a.subspace, b.subspace, tol); });
    if (it == out.end()) {
      out.push_back(a);
    } else {
      it->weight += a.weight;
    }
  }
  GrassmannMeasure m = *this;
  m.atoms_ = std::move(out);
  return m;
}

Subspace GrassmannMeasure::sample(Rng& rng) const {
  if (isotropic_) return haar_sample(n_, k_, rng);
  if (atoms_.empty()) throw Error("cannot sample from the zero measure");
  std::vector<double> w;
  w.reserve(atoms_.size());
  for (const auto& a : atoms_) w.push_back(a.weight);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  return atoms_[pick(rng)].subspace;
}

// ---------------------------------------------------------------- SphereMeasure

SphereMeasure SphereMeasure::atoms(int n, std::vector<SpherePair> pairs) {
  SphereMeasure m;
  m.n_ = n;
  m.kind_ = Kind::AtomsEven;
  for (auto& p : pairs) {
    if (p.u.size() != n) throw Error("atom has wrong dimension");
    const double norm = p.u.norm();
    if (norm < 1e-12) throw Error("atom direction must be nonzero");
    require_positive(p.weight);
    p.u = canonical_sign(p.u / norm);
  }
  m.pairs_ = std::move(pairs);
  return m;
}

SphereMeasure SphereMeasure::uniform(int n, double mass) {
  require_positive(mass);
  SphereMeasure m;
  m.n_ = n;
  m.kind_ = Kind::Uniform;
  m.uniform_mass_ = mass;
  return m;
}

SphereMeasure SphereMeasure::mixture(int n, std::vector<SubsphereComponent> components) {
  SphereMeasure m;
  m.n_ = n;
  m.kind_ = Kind::SubsphereMixture;
  for (const auto& c : components) {
    if (c.subspace.n() != n) throw Error("component has wrong ambient dimension");
    require_positive(c.weight);
  }
  m.components_ = std::move(components);
  return m;
}

double SphereMeasure::total_mass() const {
  switch (kind_) {
    case Kind::Uniform:
      return uniform_mass_;
    case Kind::AtomsEven: {
      double s = 0.0;
      for (const auto& p : pairs_) s += p.weight;
      return s;
    }
    case Kind::SubsphereMixture: {
      double s = 0.0;
      for (const auto& c : components_) s += c.weight * omega(c.subspace.k());
      return s;
    }
  }
  return 0.0;
}

SphereMeasure SphereMeasure::scaled(double t) const {
  SphereMeasure m = *this;
  m.uniform_mass_ *= t;
  for (auto& p : m.pairs_) p.weight *= t;
  for (auto& c : m.components_) c.weight *= t;
  return m;
}

SphereMeasure SphereMeasure::merged(double tol) const {
  SphereMeasure m = *this;
  if (kind_ == Kind::AtomsEven) {
    std::vector<SpherePair> out;
    for (const auto& p : pairs_) {
      auto it = std::find_if(out.begin(), out.end(), [&](const SpherePair& q) {
        return (p.u * p.u.transpose() - q.u * q.u.transpose()).norm() < tol;
      });
      if (it == out.end()) {
        out.push_back(p);
      } else {
        it->weight += p.weight;
      }
    }
    m.pairs_ = std::move(out);
  } else if (kind_ == Kind::SubsphereMixture) {
    std::vector<SubsphereComponent> out;
    for (const auto& c : components_) {
      auto it = std::find_if(out.begin(), out.end(), [&](const SubsphereComponent& d) {
        return same_span(c.subspace, d.subspace, tol);
      });
      if (it == out.end()) {
        out.push_back(c);
      } else {
        it->weight += c.weight;
      }
    }
    m.components_ = std::move(out);
  }
  return m;
}

std::vector<std::pair<Vector, double>> SphereMeasure::point_masses() const {
  std::vector<std::pair<Vector, double>> out;
  if (kind_ == Kind::AtomsEven) {
    for (const auto& p : pairs_) {
      out.emplace_back(p.u, 0.5 * p.weight);
      out.emplace_back(-p.u, 0.5 * p.weight);
    }
    return out;
  }
  if (kind_ == Kind::SubsphereMixture) {
    for (const auto& c : components_) {
      if (c.subspace.k() != 1) throw Error("measure is not atomic");
      const Vector b = canonical_sign(c.subspace.basis_vector(0));
      out.emplace_back(b, c.weight);
      out.emplace_back(-b, c.weight);
    }
    return out;
  }
  throw Error("measure is not atomic");
}

// ---------------------------------------------------------------- DirectionSet

DirectionSet DirectionSet::full_sphere(int n) {
  DirectionSet c;
  c.n_ = n;
  c.tag_ = Tag::FullSphere;
  return c;
}

DirectionSet DirectionSet::double_cap(const Vector& axis, double threshold) {
  const double norm = axis.norm();
  if (norm < 1e-12) throw Error("double cap axis must be nonzero");
  DirectionSet c;
  c.n_ = static_cast<int>(axis.size());
  c.tag_ = Tag::DoubleCap;
  c.axis_ = axis / norm;
  c.threshold_ = threshold;
  return c;
}

DirectionSet DirectionSet::custom(int n, std::function<bool(const Vector&)> predicate,
                                  std::uint64_t probe_seed) {
  Rng rng(probe_seed);
  for (int i = 0; i < 10000; ++i) {
    const Vector u = sample_unit_sphere(n, rng);
    if (predicate(u) != predicate(Vector(-u))) throw Error("direction set must be even (C = -C)");
  }
  DirectionSet c;
  c.n_ = n;
  c.tag_ = Tag::Custom;
  c.predicate_ = std::move(predicate);
  return c;
}

bool DirectionSet::contains(const Vector& u) const {
  switch (tag_) {
    case Tag::FullSphere:
      return true;
    case Tag::DoubleCap:
      return std::abs(u.dot(axis_)) >= threshold_;
    case Tag::Custom:
      return predicate_(u);
  }
  return false;
}

Estimate DirectionSet::subsphere_measure(const Subspace& u, Rng& rng, std::size_t samples) const {
  const int j = u.k();
  if (j == 0) return {0.0, 0.0};
  if (tag_ == Tag::FullSphere) return {omega(j), 0.0};
  if (j == 1) {
    const Vector b = u.basis_vector(0);
    return {contains(b) ? 2.0 : 0.0, 0.0};
  }
  if (tag_ == Tag::DoubleCap) {
    if (threshold_ <= 0.0) return {omega(j), 0.0};
    const double s = (u.basis().transpose() * axis_).norm();
    if (s < threshold_) return {0.0, 0.0};
    const double x = threshold_ / s;
    // <v, w> squared is Beta(1/2, (j-1)/2) for v uniform on the j-dimensional unit sphere.
    const double tail = boost::math::ibetac(0.5, 0.5 * (j - 1), x * x);
    return {omega(j) * tail, 0.0};
  }
  MeanAccumulator acc;
  for (std::size_t i = 0; i < samples; ++i) acc.add(contains(sample_subsphere(u, rng)) ? 1.0 : 0.0);
  return {omega(j) * acc.mean(), omega(j) * acc.se()};
}

std::string DirectionSet::describe() const {
  std::ostringstream os;
  switch (tag_) {
    case Tag::FullSphere:
      os << "full";
      break;
    case Tag::DoubleCap:
      os << "cap:" << threshold_ << ":";
      for (Eigen::Index i = 0; i < axis_.size(); ++i) os << (i ? "," : "") << axis_(i);
      break;
    case Tag::Custom:
      os << "custom";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------- maps and integration

SphereMeasure symmetrize_line_measure(const GrassmannMeasure& q) {
  if (q.k() != 1) throw Error("line symmetrization requires k = 1");
  if (q.is_isotropic()) return SphereMeasure::uniform(q.n(), q.total_mass());
  std::vector<SpherePair> pairs;
  for (const auto& a : q.atoms()) pairs.push_back({a.subspace.basis_vector(0), a.weight});
  return SphereMeasure::atoms(q.n(), std::move(pairs));
}

SphereMeasure symmetrize_hyperplane_measure(const GrassmannMeasure& q) {
  if (q.k() != q.n() - 1) throw Error("hyperplane symmetrization requires k = n - 1");
  if (q.is_isotropic()) return SphereMeasure::uniform(q.n(), q.total_mass());
  std::vector<SpherePair> pairs;
  for (const auto& a : q.atoms()) pairs.push_back({complement(a.subspace).basis_vector(0), a.weight});
  return SphereMeasure::atoms(q.n(), std::move(pairs));
}

Vector sample_unit_sphere(int n, Rng& rng) {
  std::normal_distribution<double> gauss;
  for (;;) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    const double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

Vector sample_subsphere(const Subspace& u, Rng& rng) {
  return u.basis() * sample_unit_sphere(u.k(), rng);
}

Estimate integrate(const SphereMeasure& mu, const std::function<double(const Vector&)>& f, Rng& rng,
                   std::size_t samples) {
  switch (mu.kind()) {
    case SphereMeasure::Kind::AtomsEven: {
      double s = 0.0;
      for (const auto& p : mu.pairs()) s += 0.5 * p.weight * (f(p.u) + f(Vector(-p.u)));
      return {s, 0.0};
    }
    case SphereMeasure::Kind::Uniform: {
      MeanAccumulator acc;
      for (std::size_t i = 0; i < samples; ++i) acc.add(f(sample_unit_sphere(mu.n(), rng)));
      return {mu.uniform_mass() * acc.mean(), mu.uniform_mass() * acc.se()};
    }
    case SphereMeasure::Kind::SubsphereMixture: {
      double value = 0.0;
      double var = 0.0;
      for (const auto& c : mu.components()) {
        const int j = c.subspace.k();
        if (j == 0) continue;
        if (j == 1) {
          const Vector b = c.subspace.basis_vector(0);
          value += c.weight * (f(b) + f(Vector(-b)));
          continue;
        }
        MeanAccumulator acc;
        for (std::size_t i = 0; i < samples; ++i) acc.add(f(sample_subsphere(c.subspace, rng)));
        const double scale = c.weight * omega(j);
        value += scale * acc.mean();
        var += std::pow(scale * acc.se(), 2);
      }
      return {value, std::sqrt(var)};
    }
  }
  return {};
}

Estimate integrate(const GrassmannMeasure& mu, const std::function<double(const Subspace&)>& f,
                   Rng& rng, std::size_t samples) {
  if (!mu.is_isotropic()) {
    double s = 0.0;
    for (const auto& a : mu.atoms()) s += a.weight * f(a.subspace);
    return {s, 0.0};
  }
  MeanAccumulator acc;
  for (std::size_t i = 0; i < samples; ++i) acc.add(f(haar_sample(mu.n(), mu.k(), rng)));
  return {mu.total_mass() * acc.mean(), mu.total_mass() * acc.se()};
}

double cosine_transform(const SphereMeasure& mu, const Vector& u) {
  switch (mu.kind()) {
    case SphereMeasure::Kind::AtomsEven: {
      double s = 0.0;
      for (const auto& p : mu.pairs()) s += p.weight * std::abs(p.u.dot(u));
      return s;
    }
    case SphereMeasure::Kind::Uniform:
      return mu.uniform_mass() * 2.0 * kappa(mu.n() - 1) / omega(mu.n()) * u.norm();
    case SphereMeasure::Kind::SubsphereMixture: {
      double s = 0.0;
      for (const auto& c : mu.components()) {
        const int j = c.subspace.k();
        if (j == 0) continue;
        s += c.weight * 2.0 * kappa(j - 1) * (c.subspace.basis().transpose() * u).norm();
      }
      return s;
    }
  }
  return 0.0;
}

std::vector<Vector> quasi_uniform_directions(int n, std::size_t count) {
  std::vector<Vector> out;
  for (int i = 0; i < n; ++i) out.push_back(Vector::Unit(n, i));
  if (n == 1) return out;
  if (n == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      const double t = std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      Vector v(2);
      v << std::cos(t), std::sin(t);
      out.push_back(v);
    }
    return out;
  }
  if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      Vector v(3);
      v << r * std::cos(phi), r * std::sin(phi), z;
      out.push_back(v);
    }
    return out;
  }
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (n > 16) throw Error("quasi-uniform grid supports n <= 16");
  for (std::size_t i = 1; i <= count; ++i) {
    Vector v(n);
    for (int d = 0; d < n; ++d) {
      double f = 1.0, x = 0.0;
      for (std::size_t m = i; m > 0; m /= primes[d]) {
        f /= primes[d];
        x += f * static_cast<double>(m % primes[d]);
      }
      v(d) = std::sqrt(2.0) * boost::math::erf_inv(2.0 * x - 1.0);
    }
    const double norm = v.norm();
    if (norm > 1e-12) out.push_back(v / norm);
  }
  return out;
}

double min_cosine_transform(const SphereMeasure& mu, std::size_t grid) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& u : quasi_uniform_directions(mu.n(), grid)) best = std::min(best, cosine_transform(mu, u));
  return best;
}

bool lower_bound_check(const SphereMeasure& mu, double rho) {
  return min_cosine_transform(mu) >= rho - 1e-6;
}

SphereMeasure t_lift(const GrassmannMeasure& mu) {
  if (mu.is_isotropic()) throw Error("lift requires atoms");
  std::vector<SubsphereComponent> comps;
  for (const auto& a : mu.atoms()) comps.push_back({a.subspace, a.weight});
  return SphereMeasure::mixture(mu.n(), std::move(comps));
}

// ---------------------------------------------------------------- file format

GrassmannMeasure read_grassmann_measure(std::istream& in) {
  int n = 0, k = 0;
  if (!(in >> n >> k) || n <= 0 || k < 0 || k > n) throw Error("bad directional distribution header");
  std::string line;
  std::getline(in, line);
  std::vector<GrassmannAtom> atoms;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    if (first == "isotropic") {
      double mass = 0.0;
      if (!(ls >> mass)) throw Error("isotropic line needs a mass");
      return GrassmannMeasure::isotropic(n, k, mass);
    }
    const double weight = std::stod(first);
    Matrix basis(n, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < n; ++c)
        if (!(ls >> basis(c, r))) throw Error("atom line has too few coordinates");
    Subspace s = orthonormalize(basis);
    if (s.k() != k) throw Error("atom basis is rank deficient");
    atoms.push_back({std::move(s), weight});
  }
  if (atoms.empty()) throw Error("directional distribution has no atoms");
  return GrassmannMeasure::discrete(n, k, std::move(atoms));
}

GrassmannMeasure read_grassmann_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open directional distribution file: " + path);
  return read_grassmann_measure(in);
}

void write_grassmann_measure(std::ostream& out, const GrassmannMeasure& mu) {
  out << mu.n() << ' ' << mu.k() << '\n';
  out.precision(17);
  if (mu.is_isotropic()) {
    out << "isotropic " << mu.total_mass() << '\n';
    return;
  }
  for (const auto& a : mu.atoms()) {
    out << a.weight;
    for (int r = 0; r < mu.k(); ++r)
      for (int c = 0; c < mu.n(); ++c) out << ' ' << a.subspace.basis()(c, r);
    out << '\n';
  }
}

}  // namespace flatproc
