#include "flatproc/flat_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace flatproc {

namespace {

constexpr double kRankTol = 1e-10;

Matrix stack_columns(std::span<const Subspace> subspaces, int n, bool complements) {
  int total = 0;
  for (const auto& s : subspaces) total += complements ? n - s.k() : s.k();
  Matrix a(n, total);
  int col = 0;
  for (const auto& s : subspaces) {
    const Matrix b = complements ? complement(s).basis() : s.basis();
    a.middleCols(col, b.cols()) = b;
    col += static_cast<int>(b.cols());
  }
  return a;
}

// |det| of the Gram matrix of the columns, square-rooted, computed through QR.
double column_volume(const Matrix& a) {
  if (a.cols() == 0) return 1.0;
  if (a.cols() > a.rows()) return 0.0;
  Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix& r = qr.matrixQR();
  double v = 1.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) v *= std::abs(r(i, i));
  return v;
}

}  // namespace

Subspace::Subspace(int n) : n_(n), basis_(n, 0) {}

Subspace Subspace::from_orthonormal(Matrix basis) {
  const Matrix gram = basis.transpose() * basis;
  const Matrix eye = Matrix::Identity(basis.cols(), basis.cols());
  if (basis.cols() > basis.rows() || (gram - eye).cwiseAbs().maxCoeff() > 1e-10) {
    if (basis.cols() > 0) throw Error("basis is not orthonormal");
  }
  Subspace s;
  s.n_ = static_cast<int>(basis.rows());
  s.basis_ = std::move(basis);
  return s;
}

Flat::Flat(Subspace direction, const Vector& point) : direction_(std::move(direction)) {
  if (point.size() != direction_.n()) throw Error("flat point has wrong dimension");
  const Matrix& b = direction_.basis();
  offset_ = point - b * (b.transpose() * point);
}

double Flat::distance_to(const Vector& x) const {
  const Matrix& b = direction_.basis();
  const Vector rel = x - offset_;
  return (rel - b * (b.transpose() * rel)).norm();
}

Subspace orthonormalize(const Matrix& columns) {
  const int n = static_cast<int>(columns.rows());
  if (columns.cols() == 0) return Subspace(n);
  Eigen::ColPivHouseholderQR<Matrix> qr(columns);
  const Matrix& r = qr.matrixQR();
  const Eigen::Index diag = std::min(r.rows(), r.cols());
  int rank = 0;
  for (Eigen::Index i = 0; i < diag; ++i) {
    if (std::abs(r(i, i)) > kRankTol) ++rank;
  }
  if (rank == 0) return Subspace(n);
  Matrix q = qr.householderQ() * Matrix::Identity(n, rank);
  return Subspace::from_orthonormal(std::move(q));
}

Subspace orthonormalize(const std::vector<Vector>& vectors, int n) {
  Matrix a(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != n) throw Error("vectors must share the ambient dimension");
    a.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return orthonormalize(a);
}

double subspace_determinant(std::span<const Subspace> subspaces) {
  if (subspaces.empty()) return 1.0;
  const int n = subspaces.front().n();
  int total = 0;
  for (const auto& s : subspaces) {
    if (s.n() != n) throw Error("subspaces must share the ambient dimension");
    total += s.k();
  }
  const int r = static_cast<int>(subspaces.size());
  if (total <= n) return column_volume(stack_columns(subspaces, n, false));
  if (total >= (r - 1) * n) return column_volume(stack_columns(subspaces, n, true));
  throw Error("determinant undefined for these dimensions");
}

double subspace_determinant(const Subspace& a, const Subspace& b) {
  const Subspace pair[2] = {a, b};
  return subspace_determinant(std::span<const Subspace>(pair, 2));
}

double nabla(std::span<const Vector> vectors) {
  if (vectors.empty()) return 1.0;
  Matrix a(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = vectors[i];
  return column_volume(a);
}

Subspace complement(const Subspace& u) {
  const int n = u.n();
  const int k = u.k();
  if (k == 0) return Subspace::from_orthonormal(Matrix::Identity(n, n));
  if (k == n) return Subspace(n);
  Eigen::HouseholderQR<Matrix> qr(u.basis());
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return Subspace::from_orthonormal(q.rightCols(n - k));
}

Subspace span_sum(const Subspace& a, const Subspace& b) {
  Matrix m(a.n(), a.k() + b.k());
  m << a.basis(), b.basis();
  return orthonormalize(m);
}

Subspace intersect(std::span<const Subspace> subspaces) {
  if (subspaces.empty()) throw Error("intersection of an empty family");
  const int n = subspaces.front().n();
  return complement(orthonormalize(stack_columns(subspaces, n, true)));
}

ClosestPairResult closest_pair(const Flat& e, const Flat& f) {
  const int n = e.n();
  if (f.n() != n) throw Error("flats must share the ambient dimension");
  if (e.k() + f.k() >= n) {
    const Flat pair[2] = {e, f};
    return intersect_flats(std::span<const Flat>(pair, 2));
  }
  if (subspace_determinant(e.direction(), f.direction()) <= kGeneralPositionTol) {
    throw Error("degenerate pair");
  }
  const Matrix& be = e.direction().basis();
  const Matrix& bf = f.direction().basis();
  const Vector diff = f.offset() - e.offset();
  const Matrix c = be.transpose() * bf;
  const Matrix lhs = Matrix::Identity(f.k(), f.k()) - c.transpose() * c;
  const Vector rhs = -(bf.transpose() * diff) + c.transpose() * (be.transpose() * diff);
  const Vector t = lhs.ldlt().solve(rhs);
  const Vector s = be.transpose() * diff + c * t;

  ProximitySegment seg;
  seg.foot_e = e.offset() + be * s;
  seg.foot_f = f.offset() + bf * t;
  const Vector gap = seg.foot_f - seg.foot_e;
  seg.length = gap.norm();
  seg.midpoint = 0.5 * (seg.foot_e + seg.foot_f);
  if (seg.length < 1e-14) return Flat(Subspace(n), seg.midpoint);
  seg.direction = canonical_sign(gap / seg.length);
  return seg;
}

Flat intersect_flats(std::span<const Flat> flats) {
  if (flats.empty()) throw Error("intersection of an empty family");
  const int n = flats.front().n();
  const int r = static_cast<int>(flats.size());
  std::vector<Subspace> dirs;
  int total = 0;
  for (const auto& fl : flats) {
    dirs.push_back(fl.direction());
    total += fl.k();
  }
  if (total < (r - 1) * n) throw Error("intersection requires sum of dimensions >= (r-1)n");
  if (subspace_determinant(dirs) <= kGeneralPositionTol) throw Error("degenerate pair");

  int rows = 0;
  std::vector<Matrix> comps;
  for (const auto& d : dirs) {
    comps.push_back(complement(d).basis());
    rows += static_cast<int>(comps.back().cols());
  }
  Matrix g(rows, n);
  Vector h(rows);
  int row = 0;
  for (std::size_t i = 0; i < flats.size(); ++i) {
    const Matrix& c = comps[i];
    g.middleRows(row, c.cols()) = c.transpose();
    h.segment(row, c.cols()) = c.transpose() * flats[i].offset();
    row += static_cast<int>(c.cols());
  }
  // Minimum-norm solution lies in the row space, i.e. orthogonal to the common direction.
  const Matrix ggt = g * g.transpose();
  const Vector x0 = g.transpose() * ggt.ldlt().solve(h);
  return Flat(intersect(std::span<const Subspace>(dirs)), x0);
}

Subspace haar_sample(int n, int k, Rng& rng) {
  if (k < 0 || k > n) throw Error("haar_sample requires 0 <= k <= n");
  std::normal_distribution<double> gauss;
  for (;;) {
    Matrix a(n, k);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) a(i, j) = gauss(rng);
    Subspace s = orthonormalize(a);
    if (s.k() == k) return s;
  }
}

Matrix random_rotation(int n, Rng& rng) {
  std::normal_distribution<double> gauss;
  Matrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  return q;
}

Subspace rotate(const Subspace& u, const Matrix& rotation) {
  if (u.k() == 0) return Subspace(u.n());
  return orthonormalize(Matrix(rotation * u.basis()));
}

std::vector<double> principal_cosines(const Subspace& a, const Subspace& b) {
  if (a.k() == 0 || b.k() == 0) return {};
  const Matrix cross = a.basis().transpose() * b.basis();
  Eigen::JacobiSVD<Matrix> svd(cross);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    out.push_back(std::clamp(svd.singularValues()(i), 0.0, 1.0));
  }
  return out;
}

double grassmann_distance(const Subspace& a, const Subspace& b) {
  if (a.k() != b.k() || a.n() != b.n()) throw Error("grassmann_distance requires equal dimensions");
  double sum = 0.0;
  for (double c : principal_cosines(a, b)) sum += 1.0 - c;
  return 4.0 * sum;
}

double grassmann_metric(const Subspace& a, const Subspace& b) {
  return std::sqrt(grassmann_distance(a, b));
}

bool same_span(const Subspace& a, const Subspace& b, double tol) {
  if (a.n() != b.n() || a.k() != b.k()) return false;
  return (a.projector() - b.projector()).norm() < tol;
}

Vector canonical_sign(const Vector& u) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > 1e-12) return u(i) < 0 ? Vector(-u) : u;
  }
  return u;
}

}  // namespace flatproc
