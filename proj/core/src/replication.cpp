#include "claimrep/replication.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "claimrep/claim_index.hpp"
#include "claimrep/rng.hpp"
#include "claimrep/stats.hpp"

namespace claimrep {

bool replication_indicator(Direction literature_direction, double z_combined) {
  if (!std::isfinite(z_combined)) {
    throw std::invalid_argument("z_combined must be finite");
  }
  if (z_combined > 0.0) return literature_direction == Direction::Increase;
  if (z_combined < 0.0) return literature_direction == Direction::Decrease;
  return false;  // z == 0 never replicates
}

namespace {

RateResult bootstrap_rate(const std::vector<double>& values, std::size_t iters,
                          std::uint64_t seed) {
  const std::size_t n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;

  RateResult result;
  result.estimate.mean = sum / static_cast<double>(n);
  result.estimate.iterations = iters;
  result.replicates.resize(iters);
  Rng rng(seed);
  for (std::size_t it = 0; it < iters; ++it) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[rng.index(n)];
    result.replicates[it] = s / static_cast<double>(n);
  }
  result.estimate.sem =
      iters >= 2 ? sample_sd(result.replicates) : 0.0;
  return result;
}

}  // namespace

RateResult observed_replication_rate(const std::vector<bool>& replicated,
                                     std::size_t iters, std::uint64_t seed) {
  if (replicated.empty()) {
    throw std::invalid_argument("observed_replication_rate of empty list");
  }
  if (iters == 0) throw std::invalid_argument("iters must be positive");
  std::vector<double> values(replicated.size());
  for (std::size_t i = 0; i < replicated.size(); ++i) {
    values[i] = replicated[i] ? 1.0 : 0.0;
  }
  return bootstrap_rate(values, iters, seed);
}

RateResult observed_replication_rate(const std::vector<ReplicationOutcome>& outcomes,
                                     std::size_t iters, std::uint64_t seed) {
  std::vector<bool> flags(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) flags[i] = outcomes[i].replicated;
  return observed_replication_rate(flags, iters, seed);
}

RateResult null_replication_rate(const std::vector<Direction>& directions,
                                 const std::vector<double>& effects,
                                 std::size_t iters, std::uint64_t seed) {
  if (directions.empty() || effects.empty()) {
    throw std::invalid_argument("null_replication_rate of empty lists");
  }
  if (directions.size() != effects.size()) {
    throw std::invalid_argument("directions and effects must have equal size");
  }
  if (iters == 0) throw std::invalid_argument("iters must be positive");
  const std::size_t n = directions.size();

  RateResult result;
  result.estimate.iterations = iters;
  result.replicates.resize(iters);
  std::vector<double> permuted = effects;
  Rng rng(seed);
  for (std::size_t it = 0; it < iters; ++it) {
    rng.shuffle(permuted);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (replication_indicator(directions[i], permuted[i])) ++hits;
    }
    result.replicates[it] = static_cast<double>(hits) / static_cast<double>(n);
  }
  result.estimate.mean = mean(result.replicates);
  result.estimate.sem = iters >= 2 ? sample_sd(result.replicates) : 0.0;
  return result;
}

double relative_replication_increase(const RateEstimate& obs,
                                     const RateEstimate& rand) {
  if (!(rand.mean > 0.0)) {
    throw std::invalid_argument("null replication rate must be positive");
  }
  return 100.0 * (obs.mean - rand.mean) / rand.mean;
}

RriEstimate rri_with_interval(const RateResult& obs, const RateResult& rand) {
  RriEstimate rri;
  rri.percent = relative_replication_increase(obs.estimate, rand.estimate);
  const std::size_t pairs = std::min(obs.replicates.size(), rand.replicates.size());
  if (pairs < 2) {
    rri.ci_low = rri.ci_high = rri.percent;
    return rri;
  }
  std::vector<double> deltas;
  deltas.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    if (rand.replicates[i] > 0.0) {
      deltas.push_back(100.0 * (obs.replicates[i] - rand.replicates[i]) /
                       rand.replicates[i]);
    }
  }
  if (deltas.empty()) {
    rri.ci_low = rri.ci_high = rri.percent;
    return rri;
  }
  std::sort(deltas.begin(), deltas.end());
  rri.ci_low = quantile_sorted(deltas, 0.025);
  rri.ci_high = quantile_sorted(deltas, 0.975);
  return rri;
}

AgreementTestResult shared_author_agreement_test(const Corpus& corpus,
                                                 std::size_t iters,
                                                 std::uint64_t seed) {
  if (iters == 0) throw std::invalid_argument("iters must be positive");
  // Direction each paper reports per claim (per-paper majority, tie ->
  // Increase; same convention as claims).
  std::map<ClaimId, std::map<std::string, std::pair<std::size_t, std::size_t>>> counts;
  for (const auto& f : corpus.findings) {
    auto& c = counts[f.claim][f.paper_id];
    (f.direction == Direction::Increase ? c.first : c.second)++;
  }
  std::vector<double> shared_agree, distinct_agree;
  for (const auto& [claim, papers] : counts) {
    std::vector<std::pair<std::string, Direction>> reporters;
    reporters.reserve(papers.size());
    for (const auto& [paper_id, c] : papers) {
      reporters.emplace_back(paper_id, c.first >= c.second ? Direction::Increase
                                                           : Direction::Decrease);
    }
    for (std::size_t i = 0; i < reporters.size(); ++i) {
      for (std::size_t j = i + 1; j < reporters.size(); ++j) {
        const auto& pa = corpus.papers.at(reporters[i].first);
        const auto& pb = corpus.papers.at(reporters[j].first);
        bool share = false;
        for (const auto& a : pa.authors) {
          if (pb.authors.count(a)) {
            share = true;
            break;
          }
        }
        const double agrees =
            reporters[i].second == reporters[j].second ? 1.0 : 0.0;
        (share ? shared_agree : distinct_agree).push_back(agrees);
      }
    }
  }
  if (shared_agree.empty() || distinct_agree.empty()) {
    throw std::invalid_argument(
        "agreement test needs both shared-author and distinct-author pairs");
  }

  AgreementTestResult result;
  result.shared_pairs = shared_agree.size();
  result.distinct_pairs = distinct_agree.size();
  result.rate_shared = mean(shared_agree);
  result.rate_distinct = mean(distinct_agree);
  result.diff = result.rate_shared - result.rate_distinct;

  // Bootstrap the difference of means; two-tailed p against the bootstrap
  // distribution recentered at zero.
  Rng rng(seed);
  std::size_t extreme = 0;
  double boot_sum = 0.0;
  std::vector<double> boot(iters);
  for (std::size_t it = 0; it < iters; ++it) {
    double s = 0.0, d = 0.0;
    for (std::size_t i = 0; i < shared_agree.size(); ++i) {
      s += shared_agree[rng.index(shared_agree.size())];
    }
    for (std::size_t i = 0; i < distinct_agree.size(); ++i) {
      d += distinct_agree[rng.index(distinct_agree.size())];
    }
    boot[it] = s / static_cast<double>(shared_agree.size()) -
               d / static_cast<double>(distinct_agree.size());
    boot_sum += boot[it];
  }
  const double boot_mean = boot_sum / static_cast<double>(iters);
  for (double b : boot) {
    if (std::fabs(b - boot_mean) >= std::fabs(result.diff)) ++extreme;
  }
  result.p_value = (static_cast<double>(extreme) + 1.0) /
                   (static_cast<double>(iters) + 1.0);
  return result;
}

}  // namespace claimrep
