#include "claimrep/effects.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "claimrep/parallel.hpp"
#include "claimrep/rng.hpp"
#include "claimrep/stats.hpp"

namespace claimrep {

double stouffer_combine(std::span<const double> zs) {
  if (zs.empty()) throw std::invalid_argument("stouffer_combine of empty list");
  double sum = 0.0;
  for (double z : zs) sum += z;
  return sum / std::sqrt(static_cast<double>(zs.size()));
}

BootstrapInterval bootstrap_significance(std::span<const double> zs,
                                         std::size_t iters, double alpha,
                                         std::uint64_t seed,
                                         std::span<const std::size_t> strata) {
  if (zs.empty()) throw std::invalid_argument("bootstrap of empty list");
  if (iters == 0) throw std::invalid_argument("bootstrap needs iters > 0");
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
  if (!strata.empty() && strata.size() != zs.size()) {
    throw std::invalid_argument("strata labels must match zs");
  }
  const std::size_t k = zs.size();
  const double sqrt_k = std::sqrt(static_cast<double>(k));

  // Index lists per stratum; uniform resampling is the single-stratum case.
  std::vector<std::vector<std::size_t>> groups;
  if (strata.empty()) {
    groups.emplace_back(k);
    for (std::size_t i = 0; i < k; ++i) groups[0][i] = i;
  } else {
    std::vector<std::size_t> labels(strata.begin(), strata.end());
    std::vector<std::size_t> distinct = labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    groups.resize(distinct.size());
    for (std::size_t i = 0; i < k; ++i) {
      const auto g = std::lower_bound(distinct.begin(), distinct.end(), labels[i]) -
                     distinct.begin();
      groups[static_cast<std::size_t>(g)].push_back(i);
    }
  }

  Rng rng(seed);
  std::vector<double> combined(iters);
  for (std::size_t it = 0; it < iters; ++it) {
    double sum = 0.0;
    for (const auto& group : groups) {
      for (std::size_t draw = 0; draw < group.size(); ++draw) {
        sum += zs[group[rng.index(group.size())]];
      }
    }
    combined[it] = sum / sqrt_k;
  }
  std::sort(combined.begin(), combined.end());
  BootstrapInterval ci;
  ci.low = quantile_sorted(combined, alpha / 2.0);
  ci.high = quantile_sorted(combined, 1.0 - alpha / 2.0);
  ci.significant = ci.low > 0.0 || ci.high < 0.0;
  return ci;
}

std::optional<double> coefficient_of_variation(std::span<const double> zs) {
  if (zs.size() < 2) {
    throw std::invalid_argument("coefficient_of_variation needs k >= 2");
  }
  std::vector<double> v(zs.begin(), zs.end());
  const double m = mean(v);
  if (m == 0.0) return std::nullopt;
  return sample_sd(v) / std::fabs(m);
}

AggregateResult aggregate_claim_effects(const Corpus& corpus, std::size_t iters,
                                        double alpha, std::uint64_t seed,
                                        unsigned threads,
                                        bool stratify_by_cell_line) {
  AggregateResult result;
  std::vector<const std::pair<const ClaimId, std::vector<SignatureRecord>>*> items;
  items.reserve(corpus.signatures.size());
  for (const auto& entry : corpus.signatures) items.push_back(&entry);

  std::vector<CombinedEffect> effects(items.size());
  parallel_for(items.size(), threads, [&](std::size_t idx) {
    const auto& [claim, sigs] = *items[idx];
    std::vector<double> zs;
    zs.reserve(sigs.size());
    std::vector<std::size_t> strata;
    std::map<std::string, std::size_t> cell_ids;
    for (const auto& s : sigs) {
      zs.push_back(s.z);
      if (stratify_by_cell_line) {
        strata.push_back(cell_ids.emplace(s.cell_line, cell_ids.size()).first->second);
      }
    }
    CombinedEffect eff;
    eff.claim = claim;
    eff.k = zs.size();
    eff.z_combined = stouffer_combine(zs);
    const auto ci = bootstrap_significance(
        zs, iters, alpha, derive_seed(seed, "effects/" + to_string(claim)),
        stratify_by_cell_line ? std::span<const std::size_t>(strata)
                              : std::span<const std::size_t>{});
    eff.ci_low = ci.low;
    eff.ci_high = ci.high;
    eff.significant = ci.significant;
    if (zs.size() >= 2) eff.cv = coefficient_of_variation(zs);
    effects[idx] = std::move(eff);
  });

  for (auto& eff : effects) {
    result.effects.emplace(eff.claim, std::move(eff));
  }
  // Findings-only claims carry no experimental signal; count them for the
  // caller's warning.
  std::set<ClaimId> finding_claims;
  for (const auto& f : corpus.findings) finding_claims.insert(f.claim);
  for (const auto& claim : finding_claims) {
    if (!corpus.signatures.count(claim)) ++result.claims_without_signatures;
  }
  return result;
}

}  // namespace claimrep
