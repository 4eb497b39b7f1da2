#include "flatproc/derived.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace flatproc {

namespace {

// Closed-form feet for two lines; avoids temporaries in the hot enumeration loop.
std::optional<ProximitySegment> line_pair(const Flat& e, const Flat& f, double delta) {
  const int n = e.n();
  const double* be = e.direction().basis().data();
  const double* bf = f.direction().basis().data();
  const double* oe = e.offset().data();
  const double* of = f.offset().data();
  double c = 0.0, be_diff = 0.0, bf_diff = 0.0;
  for (int i = 0; i < n; ++i) {
    const double diff = of[i] - oe[i];
    c += be[i] * bf[i];
    be_diff += be[i] * diff;
    bf_diff += bf[i] * diff;
  }
  // [L,M]^2 computed as a residual norm so that near-parallel lines are detected accurately.
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = bf[i] - c * be[i];
    res += r * r;
  }
  if (res <= kGeneralPositionTol * kGeneralPositionTol) return std::nullopt;
  const double t = (-bf_diff + c * be_diff) / res;
  const double s = be_diff + c * t;
  double d2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = of[i] + bf[i] * t - oe[i] - be[i] * s;
    d2 += g * g;
  }
  if (d2 > delta * delta || d2 < 1e-28) return std::nullopt;
  ProximitySegment seg;
  seg.foot_e = e.offset() + e.direction().basis().col(0) * s;
  seg.foot_f = f.offset() + f.direction().basis().col(0) * t;
  const Vector gap = seg.foot_f - seg.foot_e;
  seg.length = std::sqrt(d2);
  seg.midpoint = 0.5 * (seg.foot_e + seg.foot_f);
  seg.direction = canonical_sign(gap / gap.norm());
  return seg;
}

void check_proximity_dims(int n, int ka, int kb, double delta) {
  if (ka + kb >= n) throw Error("proximity requires k1 + k2 < n");
  if (!(delta > 0.0)) throw Error("proximity requires delta > 0");
}

SegmentProcessSample make_header(const FlatSample& a, double delta) {
  SegmentProcessSample out;
  out.n = a.n;
  out.window_radius = a.window_radius;
  out.delta = delta;
  out.seed = a.seed;
  return out;
}

template <bool Parallel>
SegmentProcessSample enumerate(const FlatSample& a, const FlatSample* b, double delta) {
  check_proximity_dims(a.n, a.k, b ? b->k : a.k, delta);
  SegmentProcessSample out = make_header(a, delta);
  if (b) out.window_radius = std::min(a.window_radius, b->window_radius);
  const auto& fa = a.flats;
  const auto& fb = b ? b->flats : a.flats;
  const long na = static_cast<long>(fa.size());
  std::vector<std::vector<ProximitySegment>> rows(fa.size());
  auto row = [&](long i) {
    const std::size_t start = b ? 0 : static_cast<std::size_t>(i) + 1;
    for (std::size_t j = start; j < fb.size(); ++j) {
      if (auto s = proximity_pair(fa[static_cast<std::size_t>(i)], fb[j], delta)) {
        s->i = static_cast<std::size_t>(i);
        s->j = j;
        rows[static_cast<std::size_t>(i)].push_back(std::move(*s));
      }
    }
  };
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < na; ++i) row(i);
  } else {
    for (long i = 0; i < na; ++i) row(i);
  }
  for (auto& r : rows)
    for (auto& s : r) out.segments.push_back(std::move(s));
  return out;
}

void check_window(const SegmentProcessSample& seg, const WindowDescriptor& a) {
  if (seg.window_radius + 1e-12 < a.circumradius() + 0.5 * seg.delta) {
    throw Error("window too small for exact enumeration");
  }
}

}  // namespace

std::optional<ProximitySegment> proximity_pair(const Flat& e, const Flat& f, double delta) {
  if (e.k() == 1 && f.k() == 1) return line_pair(e, f, delta);
  if (subspace_determinant(e.direction(), f.direction()) <= kGeneralPositionTol) return std::nullopt;
  auto res = closest_pair(e, f);
  auto* seg = std::get_if<ProximitySegment>(&res);
  if (!seg || seg->length > delta) return std::nullopt;
  return std::move(*seg);
}

SegmentProcessSample proximity(const FlatSample& a, double delta) { return enumerate<true>(a, nullptr, delta); }

SegmentProcessSample proximity(const FlatSample& a, const FlatSample& b, double delta) {
  return enumerate<true>(a, &b, delta);
}

SegmentProcessSample proximity_serial(const FlatSample& a, double delta) {
  return enumerate<false>(a, nullptr, delta);
}

SegmentProcessSample proximity_serial(const FlatSample& a, const FlatSample& b, double delta) {
  return enumerate<false>(a, &b, delta);
}

IntersectionSample intersections(const FlatSample& s, int r) {
  if (r < 2) throw Error("intersections require r >= 2");
  if (r * s.k < (r - 1) * s.n) throw Error("intersection requires sum of dimensions >= (r-1)n");
  IntersectionSample out;
  const int count = static_cast<int>(s.flats.size());
  if (count < r) return out;
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  std::vector<Flat> tuple(r);
  std::vector<Subspace> dirs(r);
  for (;;) {
    for (int i = 0; i < r; ++i) {
      tuple[i] = s.flats[idx[i]];
      dirs[i] = tuple[i].direction();
    }
    if (subspace_determinant(dirs) > kGeneralPositionTol) {
      out.flats.push_back(intersect_flats(tuple));
      out.sources.emplace_back(idx.begin(), idx.end());
    }
    int pos = r - 1;
    while (pos >= 0 && idx[pos] == count - r + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < r; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

IntersectionSample intersections(std::span<const FlatSample> samples) {
  const int r = static_cast<int>(samples.size());
  if (r < 2) throw Error("intersections require r >= 2");
  const int n = samples.front().n;
  int total = 0;
  for (const auto& s : samples) total += s.k;
  if (total < (r - 1) * n) throw Error("intersection requires sum of dimensions >= (r-1)n");
  IntersectionSample out;
  for (const auto& s : samples)
    if (s.flats.empty()) return out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
  std::vector<Flat> tuple(static_cast<std::size_t>(r));
  std::vector<Subspace> dirs(static_cast<std::size_t>(r));
  for (;;) {
    for (int i = 0; i < r; ++i) {
      tuple[i] = samples[i].flats[idx[i]];
      dirs[i] = tuple[i].direction();
    }
    if (subspace_determinant(dirs) > kGeneralPositionTol) {
      out.flats.push_back(intersect_flats(tuple));
      out.sources.push_back(idx);
    }
    int pos = r - 1;
    while (pos >= 0 && ++idx[pos] == samples[pos].flats.size()) {
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

double f_alpha(const SegmentProcessSample& seg, double alpha, const WindowDescriptor& a, const DirectionSet& c) {
  if (alpha < 0.0) throw Error("alpha must be nonnegative");
  check_window(seg, a);
  double total = 0.0;
  for (const auto& s : seg.segments) {
    if (a.contains(s.midpoint) && c.contains(s.direction)) total += alpha == 0.0 ? 1.0 : std::pow(s.length, alpha);
  }
  return total;
}

std::vector<double> order_statistics(const SegmentProcessSample& seg, double alpha, const WindowDescriptor& a,
                                     const DirectionSet& c, std::size_t m) {
  if (alpha < 0.0) throw Error("alpha must be nonnegative");
  check_window(seg, a);
  std::vector<double> values;
  for (const auto& s : seg.segments) {
    if (a.contains(s.midpoint) && c.contains(s.direction)) values.push_back(std::pow(s.length, alpha));
  }
  std::sort(values.begin(), values.end());
  values.resize(m, std::numeric_limits<double>::infinity());
  return values;
}

void write_segment_csv(std::ostream& out, const SegmentProcessSample& seg) {
  out.precision(17);
  out << "# n=" << seg.n << " delta=" << seg.delta << " seed=" << seg.seed << '\n';
  for (int i = 0; i < seg.n; ++i) out << 'm' << i << ',';
  out << 'd';
  for (int i = 0; i < seg.n; ++i) out << ",u" << i;
  out << ",i,j\n";
  for (const auto& s : seg.segments) {
    for (int i = 0; i < seg.n; ++i) out << s.midpoint(i) << ',';
    out << s.length;
    for (int i = 0; i < seg.n; ++i) out << ',' << s.direction(i);
    out << ',' << s.i << ',' << s.j << '\n';
  }
}

}  // namespace flatproc
