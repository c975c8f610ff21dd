#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "claimrep/types.hpp"

namespace claimrep {

// R = 1 when the literature direction is matched by the sign of the combined
// z-score; z == 0 counts as non-replication.
bool replication_indicator(Direction literature_direction, double z_combined);

struct ReplicationOutcome {
  ClaimId claim;
  Direction literature_direction = Direction::Increase;
  double z_combined = 0.0;
  bool replicated = false;
};

struct RateEstimate {
  double mean = 0.0;
  double sem = 0.0;
  std::size_t iterations = 0;
};

struct RateResult {
  RateEstimate estimate;
  std::vector<double> replicates;  // per-iteration rates, in iteration order
};

// RR_obs: mean = observed fraction replicated; sem = SD of bootstrap
// replicate means (resampling the replication vector with replacement).
RateResult observed_replication_rate(const std::vector<ReplicationOutcome>& outcomes,
                                     std::size_t iters, std::uint64_t seed);
RateResult observed_replication_rate(const std::vector<bool>& replicated,
                                     std::size_t iters, std::uint64_t seed);

// RR_rand: per iteration, permute the effects vector uniformly at random and
// score replication against the fixed claim directions. Direction imbalance
// in the claims propagates into the null by construction.
RateResult null_replication_rate(const std::vector<Direction>& directions,
                                 const std::vector<double>& effects,
                                 std::size_t iters, std::uint64_t seed);

// RRI = 100 * (RR_obs - RR_rand) / RR_rand. Throws on a zero null rate.
double relative_replication_increase(const RateEstimate& obs,
                                     const RateEstimate& rand);

struct RriEstimate {
  double percent = 0.0;
  double ci_low = 0.0;   // percentile spread over paired replicate vectors
  double ci_high = 0.0;
};

RriEstimate rri_with_interval(const RateResult& obs, const RateResult& rand);

struct AgreementTestResult {
  double rate_shared = 0.0;
  double rate_distinct = 0.0;
  double diff = 0.0;
  double p_value = 1.0;
  std::size_t shared_pairs = 0;
  std::size_t distinct_pairs = 0;
};

// All unordered pairs of papers reporting the same claim, split by whether
// the papers share at least one author; a pair agrees when both papers
// report the same direction. Two-tailed bootstrap test on the difference of
// mean agreement rates (bootstrap distribution centered at zero for the
// null). Throws when either partition is empty.
AgreementTestResult shared_author_agreement_test(const Corpus& corpus,
                                                 std::size_t iters,
                                                 std::uint64_t seed);

}  // namespace claimrep
