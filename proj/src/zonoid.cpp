#include "flatproc/zonoid.hpp"

#include <cmath>
#include <functional>

#include "flatproc/special.hpp"

namespace flatproc {

namespace {

void check_order(int n, int m) {
  if (m < 0 || m > n) throw Error("intrinsic volume order must satisfy 0 <= m <= n");
}

void check_r(const SphereMeasure& q, int r) {
  if (q.kind() != SphereMeasure::Kind::AtomsEven) throw Error("construction requires an atomic measure");
  if (r < 2 || r > q.n() - 1) throw Error("r must satisfy 2 <= r <= n-1");
}

// Depth-first walk over index subsets carrying an orthonormal frame of the chosen
// generators, so each nabla is a running product of residual norms.
struct SubsetWalker {
  const Zonotope& z;
  int m;
  std::vector<Vector> frame;

  double walk(std::size_t start, int depth, double weight) {
    if (depth == m) return weight;
    double total = 0.0;
    const std::size_t count = z.generators.size();
    for (std::size_t i = start; i + static_cast<std::size_t>(m - depth) <= count; ++i) {
      Vector v = z.generators[i].u;
      for (const auto& f : frame) v -= f.dot(v) * f;
      const double res = v.norm();
      if (res <= 1e-12) continue;
      frame.push_back(v / res);
      total += walk(i + 1, depth + 1, weight * 2.0 * z.generators[i].half_length * res);
      frame.pop_back();
    }
    return total;
  }
};

}  // namespace

Zonotope zonotope_from_measure(const SphereMeasure& mu) {
  if (mu.kind() != SphereMeasure::Kind::AtomsEven) throw Error("zonotope requires an atomic measure");
  Zonotope z;
  z.n = mu.n();
  for (const auto& p : mu.pairs()) z.generators.push_back({p.u, 0.5 * p.weight});
  return z;
}

double support(const Zonotope& z, const Vector& x) {
  double h = 0.0;
  for (const auto& g : z.generators) h += g.half_length * std::abs(g.u.dot(x));
  return h;
}

double intrinsic_volume_serial(const Zonotope& z, int m) {
  check_order(z.n, m);
  if (m == 0) return 1.0;
  const int count = static_cast<int>(z.generators.size());
  if (count < m) return 0.0;
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  double total = 0.0;
  std::vector<Vector> vecs(m);
  for (;;) {
    double w = 1.0;
    for (int i = 0; i < m; ++i) {
      vecs[i] = z.generators[idx[i]].u;
      w *= 2.0 * z.generators[idx[i]].half_length;
    }
    total += w * nabla(vecs);
    int pos = m - 1;
    while (pos >= 0 && idx[pos] == count - m + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < m; ++i) idx[i] = idx[i - 1] + 1;
  }
  return total;
}

double intrinsic_volume(const Zonotope& z, int m) {
  check_order(z.n, m);
  if (m == 0) return 1.0;
  const long count = static_cast<long>(z.generators.size());
  if (count < m) return 0.0;
  double total = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(+ : total)
  for (long first = 0; first <= count - m; ++first) {
    SubsetWalker walker{z, m, {}};
    const auto& g = z.generators[static_cast<std::size_t>(first)];
    walker.frame.push_back(g.u / g.u.norm());
    total += walker.walk(static_cast<std::size_t>(first) + 1, 1, 2.0 * g.half_length);
  }
  return total;
}

GrassmannMeasure mu_q_r(const SphereMeasure& q, int r) {
  check_r(q, r);
  const int n = q.n();
  const auto& pairs = q.pairs();
  const int count = static_cast<int>(pairs.size());
  const double rfact = factorial(r);
  std::vector<GrassmannAtom> atoms;
  if (count >= r) {
    std::vector<int> idx(r);
    for (int i = 0; i < r; ++i) idx[i] = i;
    std::vector<Vector> vecs(r);
    for (;;) {
      double w = rfact;
      for (int i = 0; i < r; ++i) {
        vecs[i] = pairs[idx[i]].u;
        w *= pairs[idx[i]].weight;
      }
      const double det = nabla(vecs);
      if (det > kGeneralPositionTol) {
        atoms.push_back({complement(orthonormalize(vecs, n)), w * det});
      }
      int pos = r - 1;
      while (pos >= 0 && idx[pos] == count - r + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < r; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return GrassmannMeasure::discrete(n, n - r, std::move(atoms)).merged();
}

SphereMeasure area_measure(const SphereMeasure& q, int r) {
  const GrassmannMeasure mu = mu_q_r(q, r);
  return t_lift(mu).scaled(1.0 / (factorial(r) * binom(q.n() - 1, r)));
}

}  // namespace flatproc
