#include <benchmark/benchmark.h>

#include "flatproc/derived.hpp"
#include "flatproc/experiments.hpp"
#include "flatproc/stats.hpp"
#include "flatproc/zonoid.hpp"

namespace {

using namespace flatproc;

FlatSample line_sample(double radius) {
  Rng rng = make_stream(42, 0);
  const auto spec = FlatProcessSpec::poisson(1.0, GrassmannMeasure::isotropic(3, 1, 1.0));
  return sample_flats(spec, radius, rng);
}

void BM_ProximityParallel(benchmark::State& state) {
  const FlatSample s = line_sample(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(proximity(s, 1.0).segments.size());
  state.counters["flats"] = static_cast<double>(s.flats.size());
}

void BM_ProximitySerial(benchmark::State& state) {
  const FlatSample s = line_sample(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(proximity_serial(s, 1.0).segments.size());
  state.counters["flats"] = static_cast<double>(s.flats.size());
}

Zonotope random_zonotope(int n, std::size_t generators) {
  Rng rng = make_stream(7, 0);
  return zonotope_from_measure(random_sphere_measure(n, generators, 1.0, rng));
}

void BM_IntrinsicVolumeParallel(benchmark::State& state) {
  const Zonotope z = random_zonotope(5, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(intrinsic_volume(z, 3));
}

void BM_IntrinsicVolumeSerial(benchmark::State& state) {
  const Zonotope z = random_zonotope(5, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(intrinsic_volume_serial(z, 3));
}

const auto kF0 = [](Rng& rng, std::size_t) {
  static const auto spec = FlatProcessSpec::poisson(1.0, GrassmannMeasure::isotropic(3, 1, 1.0));
  static const auto cube = WindowDescriptor::unit_cube(3);
  static const auto full = DirectionSet::full_sphere(3);
  return simulate_f_alpha(spec, cube, 1.0, 0.0, full, rng);
};

void BM_ReplicateParallel(benchmark::State& state) {
  const ReplicationPlan plan{static_cast<std::size_t>(state.range(0)), 3, "f0", {}};
  for (auto _ : state) benchmark::DoNotOptimize(replicate(plan, kF0).mean);
}

void BM_ReplicateSerial(benchmark::State& state) {
  const ReplicationPlan plan{static_cast<std::size_t>(state.range(0)), 3, "f0", {}};
  for (auto _ : state) benchmark::DoNotOptimize(replicate_serial(plan, kF0).mean);
}

}  // namespace

BENCHMARK(BM_ProximityParallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProximitySerial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntrinsicVolumeParallel)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntrinsicVolumeSerial)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicateParallel)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicateSerial)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
