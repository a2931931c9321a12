#include <cmath>

#include <benchmark/benchmark.h>

#include "kgstab/evolve.hpp"
#include "kgstab/soliton.hpp"
#include "kgstab/spectrum.hpp"
#include "kgstab/stability.hpp"

namespace {

const kgstab::ModelParams unit(1, 1, 1);

void profile_build(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto pr = kgstab::build_profile(unit, 0.9, {h});
    benchmark::DoNotOptimize(pr.values().data());
  }
}

void charge_quadrature(benchmark::State& state) {
  const auto pr = kgstab::build_profile(unit, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(kgstab::charge(pr));
}

void tau_star_search(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kgstab::tau_star());
}

// range(0): 0 skips the quadrature oracle, 1 runs it.
void classify_window(benchmark::State& state) {
  const kgstab::ModelParams p(1, 1, std::sqrt(1.005 / 2));
  kgstab::ClassifyOptions opts;
  opts.verify_with_oracle = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(kgstab::classify(p, opts));
}

void spectral(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto r = kgstab::spectral_report(unit, 0.9, {h});
    benchmark::DoNotOptimize(r.lplus_eigenvalues.data());
  }
}

void leapfrog_steps(benchmark::State& state) {
  const auto pr = kgstab::build_profile(
      unit, 0.9, {0.02, kgstab::default_half_length(unit, 0.9) + 20.0, 1e-12});
  const auto start = kgstab::init_state(pr, kgstab::Perturbation::parse("scale:0.01"), 0.01);
  for (auto _ : state) {
    auto s = start;
    for (int k = 0; k < 100; ++k) kgstab::advance(s, unit);
    benchmark::DoNotOptimize(s.phi.data());
  }
  state.SetItemsProcessed(state.iterations() * 100 * static_cast<int64_t>(start.size()));
}

void distance(benchmark::State& state) {
  const auto pr = kgstab::build_profile(
      unit, 0.9, {0.02, kgstab::default_half_length(unit, 0.9) + 20.0, 1e-12});
  const auto s = kgstab::init_state(pr, kgstab::Perturbation::parse("bump:0.01"), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(kgstab::orbital_distance(s, pr, unit));
}

}  // namespace

BENCHMARK(profile_build)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);
BENCHMARK(charge_quadrature)->Unit(benchmark::kMicrosecond);
BENCHMARK(tau_star_search)->Unit(benchmark::kMicrosecond);
BENCHMARK(classify_window)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(spectral)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(leapfrog_steps)->Unit(benchmark::kMillisecond);
BENCHMARK(distance)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
