#include <benchmark/benchmark.h>

#include "claimrep/claim_index.hpp"
#include "claimrep/networks.hpp"
#include "claimrep/synthetic.hpp"

namespace {

const claimrep::Corpus& corpus() {
  static const claimrep::Corpus instance = [] {
    claimrep::GeneratorSpec spec;
    spec.n_claims = 300;
    spec.findings_per_claim.p_one = 0.2;
    spec.findings_per_claim.p_two = 0.4;
    spec.seed = 17;
    return claimrep::generate_corpus(spec).first;
  }();
  return instance;
}

void BM_BuildClaimNetworks(benchmark::State& state) {
  const auto& c = corpus();
  const auto index = claimrep::build_claim_index(c);
  for (auto _ : state) {
    std::size_t edges = 0;
    for (const auto& [claim, lit] : index) {
      if (lit.papers.size() < 2) continue;
      const auto net = claimrep::build_claim_network(c, claim);
      edges += net.agreement.size();
    }
    benchmark::DoNotOptimize(edges);
  }
}
BENCHMARK(BM_BuildClaimNetworks);

void BM_Gini(benchmark::State& state) {
  std::vector<double> degrees;
  for (int i = 0; i < state.range(0); ++i) {
    degrees.push_back(1.0 + (i % 7 == 0 ? 5.0 : 0.0));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(claimrep::gini_centralization(degrees));
  }
}
BENCHMARK(BM_Gini)->Arg(32)->Arg(1024);

}  // namespace
