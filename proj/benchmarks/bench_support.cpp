#include <benchmark/benchmark.h>

#include "claimrep/support.hpp"

namespace {

void BM_BetaQuantile(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(claimrep::posterior_quantile(8, 3, 0.025));
  }
}
BENCHMARK(BM_BetaQuantile);

void BM_SupportPosterior(benchmark::State& state) {
  const claimrep::ClaimId claim{"drug", "gene"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(claimrep::make_support_posterior(claim, 5, 9));
  }
}
BENCHMARK(BM_SupportPosterior);

void BM_McmcPosterior(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(claimrep::mcmc_sample_posterior(3, 9, 10000, 2500, 5));
  }
}
BENCHMARK(BM_McmcPosterior);

}  // namespace
