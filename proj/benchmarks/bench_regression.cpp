#include <benchmark/benchmark.h>

#include <cmath>

#include "claimrep/regression.hpp"
#include "claimrep/rng.hpp"

namespace {

claimrep::DesignMatrix planted_design(std::size_t n) {
  claimrep::Rng rng(23);
  claimrep::DesignMatrix d;
  d.columns = {"intercept", "a", "b", "c"};
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.uniform(), b = rng.uniform(), c = rng.uniform();
    d.rows.push_back({1.0, a, b, c});
    const double eta = -0.5 + 1.5 * a - 1.0 * c;
    d.response.push_back(rng.bernoulli(1.0 / (1.0 + std::exp(-eta))) ? 1 : 0);
  }
  return d;
}

void BM_FitLogistic(benchmark::State& state) {
  const auto d = planted_design(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(claimrep::fit_logistic(d));
  }
}
BENCHMARK(BM_FitLogistic)->Arg(500)->Arg(5000);

void BM_VarianceInflation(benchmark::State& state) {
  const auto d = planted_design(1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(claimrep::variance_inflation(d));
  }
}
BENCHMARK(BM_VarianceInflation);

}  // namespace
