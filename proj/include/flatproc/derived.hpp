#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "flatproc/measures.hpp"
#include "flatproc/simulator.hpp"
#include "flatproc/window.hpp"

namespace flatproc {

struct SegmentProcessSample {
  int n = 0;
  double window_radius = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<ProximitySegment> segments;  // ordered by (i, j)
};

struct IntersectionSample {
  std::vector<Flat> flats;
  std::vector<std::vector<std::size_t>> sources;  // generating index per input
};

// Segment for one pair when it is in general position and 0 < d <= delta.
std::optional<ProximitySegment> proximity_pair(const Flat& e, const Flat& f, double delta);

// Unordered pairs of one sample. OpenMP-parallel over the first index.
SegmentProcessSample proximity(const FlatSample& a, double delta);
// All cross pairs of two independent samples.
SegmentProcessSample proximity(const FlatSample& a, const FlatSample& b, double delta);
SegmentProcessSample proximity_serial(const FlatSample& a, double delta);
SegmentProcessSample proximity_serial(const FlatSample& a, const FlatSample& b, double delta);

// Unordered r-subsets of one sample in general position.
IntersectionSample intersections(const FlatSample& s, int r);
// One flat from each of several independent samples.
IntersectionSample intersections(std::span<const FlatSample> samples);

double f_alpha(const SegmentProcessSample& seg, double alpha, const WindowDescriptor& a, const DirectionSet& c);
std::vector<double> order_statistics(const SegmentProcessSample& seg, double alpha, const WindowDescriptor& a,
                                     const DirectionSet& c, std::size_t m);

void write_segment_csv(std::ostream& out, const SegmentProcessSample& seg);

}  // namespace flatproc
