#include "flatproc/simulator.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "flatproc/closed_form.hpp"
#include "flatproc/special.hpp"

namespace flatproc {

namespace {

Vector uniform_in_ball(int dim, double radius, Rng& rng) {
  if (dim == 0) return Vector(0);
  std::uniform_real_distribution<double> unif;
  const Vector dir = sample_unit_sphere(dim, rng);
  return dir * (radius * std::pow(unif(rng), 1.0 / dim));
}

// Samples directions from a fixed directional distribution without rebuilding tables per draw.
class DirectionSampler {
 public:
  explicit DirectionSampler(const GrassmannMeasure& q) : q_(q) {
    if (!q.is_isotropic()) {
      std::vector<double> w;
      for (const auto& a : q.atoms()) w.push_back(a.weight);
      pick_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
      for (const auto& a : q.atoms()) complements_.push_back(complement(a.subspace));
    }
  }
  // Returns (direction, complement) for the drawn subspace.
  std::pair<Subspace, Subspace> draw(Rng& rng) {
    if (q_.is_isotropic()) {
      Subspace l = haar_sample(q_.n(), q_.k(), rng);
      Subspace c = complement(l);
      return {std::move(l), std::move(c)};
    }
    const std::size_t i = pick_(rng);
    return {q_.atoms()[i].subspace, complements_[i]};
  }

 private:
  const GrassmannMeasure& q_;
  std::discrete_distribution<std::size_t> pick_;
  std::vector<Subspace> complements_;
};

}  // namespace

FlatProcessSpec FlatProcessSpec::poisson(double gamma, GrassmannMeasure q) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw Error("intensity must be finite and nonnegative");
  if (std::abs(q.total_mass() - 1.0) > 1e-12) throw Error("directional distribution must have mass 1");
  FlatProcessSpec s;
  s.n = q.n();
  s.k = q.k();
  s.gamma = gamma;
  s.q = std::move(q);
  s.kind = Kind::Poisson;
  return s;
}

FlatProcessSpec FlatProcessSpec::sr_construction(int n, int k, int kappa, Subspace anchor, double anchor_radius,
                                                 bool stationarize) {
  if (k < 1 || k >= n) throw Error("construction requires 1 <= k < n");
  if (anchor.n() != n || anchor.k() != n - k) throw Error("anchor subspace must have dimension n-k");
  if (kappa < 2) throw Error("construction requires kappa >= 2");
  FlatProcessSpec s;
  s.n = n;
  s.k = k;
  s.gamma = 1.0 / c_constant(n, n - k, k);
  s.q = GrassmannMeasure::isotropic(n, k, 1.0);
  s.kind = Kind::Sr;
  s.sr = SrConstruction{kappa, std::move(anchor), anchor_radius, stationarize};
  return s;
}

// ---------------------------------------------------------------- serialization

void write_flat_sample(std::ostream& out, const FlatSample& s) {
  out.precision(17);
  out << s.n << ' ' << s.k << ' ' << s.window_radius << ' ' << s.seed << '\n';
  for (const auto& f : s.flats) {
    out << f.k();
    for (int i = 0; i < s.n; ++i) out << ' ' << f.offset()(i);
    for (int r = 0; r < f.k(); ++r)
      for (int c = 0; c < s.n; ++c) out << ' ' << f.direction().basis()(c, r);
    out << '\n';
  }
}

FlatSample read_flat_sample(std::istream& in) {
  FlatSample s;
  if (!(in >> s.n >> s.k >> s.window_radius >> s.seed)) throw Error("bad flat sample header");
  int k = 0;
  while (in >> k) {
    Vector offset(s.n);
    for (int i = 0; i < s.n; ++i) in >> offset(i);
    Matrix basis(s.n, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < s.n; ++c) in >> basis(c, r);
    if (!in) throw Error("truncated flat sample");
    s.flats.emplace_back(Subspace::from_orthonormal(std::move(basis)), offset);
    s.groups.push_back(-1);
  }
  return s;
}

// ---------------------------------------------------------------- factorial distribution

FactorialDistribution build_factorial_distribution(int kappa) {
  if (kappa < 2) throw Error("factorial distribution requires kappa >= 2");
  std::vector<Fraction> p = {Fraction(1, 2), Fraction(0), Fraction(1, 2)};
  for (int q = 3; q <= kappa; ++q) {
    std::vector<Fraction> next(static_cast<std::size_t>(q) + 1, Fraction(0));
    Fraction used(0);
    for (int i = 1; i <= q; ++i) {
      if (i == q - 1) continue;
      next[i] = p[i - 1] / static_cast<long long>(i);
      used += next[i];
    }
    next[0] = Fraction(1) - used;
    p = std::move(next);
  }
  FactorialDistribution d;
  d.kappa_ = kappa;
  d.exact_ = p;
  for (const auto& f : p) d.probs_.push_back(boost::rational_cast<double>(f));
  return d;
}

Fraction FactorialDistribution::factorial_moment_exact(int m) const {
  Fraction total(0);
  for (int i = m; i <= kappa_; ++i) {
    long long falling = 1;
    for (int j = 0; j < m; ++j) falling *= (i - j);
    total += exact_[i] * falling;
  }
  return total;
}

double FactorialDistribution::factorial_moment(int m) const {
  double total = 0.0;
  for (int i = m; i <= kappa_; ++i) {
    double falling = 1.0;
    for (int j = 0; j < m; ++j) falling *= (i - j);
    total += probs_[i] * falling;
  }
  return total;
}

int FactorialDistribution::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unif;
  double u = unif(rng);
  for (int i = 0; i <= kappa_; ++i) {
    u -= probs_[i];
    if (u < 0.0) return i;
  }
  return kappa_;
}

// ---------------------------------------------------------------- cube process

long long CubeIndexBox::cube_count() const {
  long long c = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) c *= std::max(0LL, hi[i] - lo[i]);
  return c;
}

std::vector<CubePoint> sample_cube_process(int d, const FactorialDistribution& dist, const CubeIndexBox& box,
                                           Rng& rng, bool stationarize) {
  if (static_cast<int>(box.lo.size()) != d || static_cast<int>(box.hi.size()) != d) {
    throw Error("cube index box must have one range per dimension");
  }
  CubeIndexBox grid = box;
  if (stationarize) {
    for (int i = 0; i < d; ++i) {
      --grid.lo[i];
      ++grid.hi[i];
    }
  }
  std::uniform_real_distribution<double> unif;
  Vector shift = Vector::Zero(d);
  if (stationarize)
    for (int i = 0; i < d; ++i) shift(i) = unif(rng);

  std::vector<CubePoint> out;
  const long long total = grid.cube_count();
  std::vector<long long> idx(grid.lo);
  for (long long linear = 0; linear < total; ++linear) {
    const int count = dist.sample(rng);
    for (int c = 0; c < count; ++c) {
      Vector x(d);
      for (int i = 0; i < d; ++i) x(i) = static_cast<double>(idx[i]) + unif(rng) + shift(i);
      bool inside = true;
      if (stationarize) {
        for (int i = 0; i < d; ++i) {
          if (x(i) < static_cast<double>(box.lo[i]) || x(i) >= static_cast<double>(box.hi[i])) inside = false;
        }
      }
      if (inside) out.push_back({std::move(x), linear});
    }
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < grid.hi[i]) break;
      idx[i] = grid.lo[i];
    }
  }
  return out;
}

Q0Draw sample_q0(const Subspace& anchor, int k, Rng& rng) {
  const int n = anchor.n();
  if (anchor.k() != n - k) throw Error("anchor subspace must have dimension n-k");
  std::uniform_real_distribution<double> unif;
  Q0Draw draw;
  for (;;) {
    ++draw.trials;
    Subspace l = haar_sample(n, k, rng);
    const double det = subspace_determinant(anchor, l);
    if (unif(rng) < det) {
      draw.direction = std::move(l);
      return draw;
    }
  }
}

// ---------------------------------------------------------------- flat samplers

FlatSample sample_poisson(const FlatProcessSpec& spec, double radius, Rng& rng, std::uint64_t seed_record) {
  if (spec.kind != FlatProcessSpec::Kind::Poisson) throw Error("sample_poisson requires a Poisson spec");
  FlatSample s;
  s.n = spec.n;
  s.k = spec.k;
  s.window_radius = radius;
  s.seed = seed_record;
  if (spec.gamma == 0.0) return s;
  const int codim = spec.n - spec.k;
  std::poisson_distribution<long long> count_dist(spec.gamma * std::pow(radius, codim) * kappa(codim));
  const long long count = count_dist(rng);
  DirectionSampler directions(spec.q);
  s.flats.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    auto [l, comp] = directions.draw(rng);
    const Vector offset = comp.basis() * uniform_in_ball(codim, radius, rng);
    s.flats.emplace_back(std::move(l), offset);
    s.groups.push_back(-1);
  }
  return s;
}

FlatSample sample_sr_flats(const FlatProcessSpec& spec, double radius, Rng& rng, std::uint64_t seed_record) {
  if (spec.kind != FlatProcessSpec::Kind::Sr || !spec.sr) throw Error("sample_sr_flats requires an Sr spec");
  const SrConstruction& sr = *spec.sr;
  const int d = spec.n - spec.k;
  const double reach = sr.anchor_radius > 0.0 ? sr.anchor_radius : 64.0 * radius + 2.0;
  const long long extent = static_cast<long long>(std::ceil(reach));
  CubeIndexBox box{std::vector<long long>(static_cast<std::size_t>(d), -extent),
                   std::vector<long long>(static_cast<std::size_t>(d), extent)};
  const FactorialDistribution dist = build_factorial_distribution(sr.kappa);

  FlatSample s;
  s.n = spec.n;
  s.k = spec.k;
  s.window_radius = radius;
  s.seed = seed_record;
  for (const auto& p : sample_cube_process(d, dist, box, rng, sr.stationarize)) {
    const Vector x = sr.anchor.basis() * p.x;
    Q0Draw draw = sample_q0(sr.anchor, spec.k, rng);
    Flat f(std::move(draw.direction), x);
    if (f.offset().norm() <= radius) {
      s.flats.push_back(std::move(f));
      s.groups.push_back(p.cube);
    }
  }
  return s;
}

FlatSample sample_flats(const FlatProcessSpec& spec, double radius, Rng& rng, std::uint64_t seed_record) {
  return spec.kind == FlatProcessSpec::Kind::Poisson ? sample_poisson(spec, radius, rng, seed_record)
                                                     : sample_sr_flats(spec, radius, rng, seed_record);
}

}  // namespace flatproc
