#include <benchmark/benchmark.h>

#include <vector>

#include "claimrep/effects.hpp"
#include "claimrep/rng.hpp"

namespace {

std::vector<double> random_zs(std::size_t k) {
  claimrep::Rng rng(7);
  std::vector<double> zs(k);
  for (auto& z : zs) z = rng.normal();
  return zs;
}

void BM_StoufferCombine(benchmark::State& state) {
  const auto zs = random_zs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(claimrep::stouffer_combine(zs));
  }
}
BENCHMARK(BM_StoufferCombine)->Arg(4)->Arg(64);

void BM_BootstrapSignificance(benchmark::State& state) {
  const auto zs = random_zs(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(claimrep::bootstrap_significance(
        zs, static_cast<std::size_t>(state.range(0)), 0.05, 11));
  }
}
BENCHMARK(BM_BootstrapSignificance)->Arg(1000)->Arg(10000);

}  // namespace
