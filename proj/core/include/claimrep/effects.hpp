#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "claimrep/types.hpp"

namespace claimrep {

// Per-claim combined experimental effect. `significant` holds exactly when
// the bootstrap percentile interval excludes 0; `cv` is absent for k < 2 or
// a zero mean.
struct CombinedEffect {
  ClaimId claim;
  double z_combined = 0.0;
  std::size_t k = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool significant = false;
  std::optional<double> cv;
};

// Stouffer combination: sum(z) / sqrt(k). Throws on an empty list.
double stouffer_combine(std::span<const double> zs);

struct BootstrapInterval {
  double low = 0.0;
  double high = 0.0;
  bool significant = false;
};

// Percentile bootstrap of the combined z-score: resample zs with
// replacement, recombine, take the alpha/2 and 1-alpha/2 quantiles.
// Deterministic given seed. When `strata` is non-empty it must have one
// label per z and resampling preserves per-stratum counts (the stratified
// variant; default is uniform resampling).
BootstrapInterval bootstrap_significance(std::span<const double> zs,
                                         std::size_t iters, double alpha,
                                         std::uint64_t seed,
                                         std::span<const std::size_t> strata = {});

// Sample SD (k-1 denominator) over |mean|; nullopt when the mean is zero.
// Throws on fewer than 2 values.
std::optional<double> coefficient_of_variation(std::span<const double> zs);

struct AggregateResult {
  std::map<ClaimId, CombinedEffect> effects;
  std::size_t claims_without_signatures = 0;  // findings-only claims skipped
};

// One CombinedEffect per signature-bearing claim. Each claim draws its
// bootstrap stream from (seed, claim), so serial and parallel runs agree
// bit-for-bit.
AggregateResult aggregate_claim_effects(const Corpus& corpus, std::size_t iters,
                                        double alpha, std::uint64_t seed,
                                        unsigned threads = 1,
                                        bool stratify_by_cell_line = false);

}  // namespace claimrep
