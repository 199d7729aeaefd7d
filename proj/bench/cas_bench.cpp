// Parallel batch kernels against their serial twins.
#include <random>

#include <benchmark/benchmark.h>

#include "cas/kernels.hpp"

namespace {

struct Inputs {
  std::vector<cas::Vec3> pos, vel;
  std::vector<cas::SensorInput> frames;
};

const Inputs& inputs() {
  static const Inputs in = [] {
    Inputs r;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> p(-2000.0, 2000.0), v(-100.0, 100.0), u(0.0, 1.0);
    for (int i = 0; i < 200000; ++i) {
      r.pos.push_back({p(rng), p(rng), p(rng) / 10.0});
      r.vel.push_back({v(rng), v(rng), v(rng) / 10.0});
    }
    for (int i = 0; i < 4000; ++i) {
      cas::SensorInput f;
      f.orientation = {360.0 * u(rng), 0.0};
      f.position = {p(rng), p(rng), 1000.0};
      for (int j = 0; j < 20; ++j) f.measures.push_back({{p(rng), p(rng), p(rng) / 20.0}, "T" + std::to_string(j)});
      r.frames.push_back(std::move(f));
    }
    return r;
  }();
  return in;
}

void BM_cpa_parallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(cas::kernels::cpa_batch(inputs().pos, inputs().vel));
}
void BM_cpa_serial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(cas::kernels::cpa_batch_serial(inputs().pos, inputs().vel));
}
void BM_detect_parallel(benchmark::State& s) {
  const cas::RegionParams region{2500.0, 300.0};
  for (auto _ : s) benchmark::DoNotOptimize(cas::kernels::detect_batch(inputs().frames, region));
}
void BM_detect_serial(benchmark::State& s) {
  const cas::RegionParams region{2500.0, 300.0};
  for (auto _ : s) benchmark::DoNotOptimize(cas::kernels::detect_batch_serial(inputs().frames, region));
}
void BM_validate_parallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(cas::kernels::validate_batch(inputs().frames));
}
void BM_validate_serial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(cas::kernels::validate_batch_serial(inputs().frames));
}

}  // namespace

BENCHMARK(BM_cpa_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cpa_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_detect_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_detect_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_validate_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_validate_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
