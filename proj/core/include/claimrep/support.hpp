#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "claimrep/types.hpp"

namespace claimrep {

enum class SupportCategory { VeryHigh, High, Moderate, Low, Contradictory };

std::string_view to_string(SupportCategory c);

struct CredibleInterval {
  double low = 0.0;
  double high = 1.0;
};

// Posterior of the probability of literature support for one claim, under a
// uniform prior on [0,1] and a binomial likelihood for the gamma supporting
// findings out of n. The conjugate closed form Beta(gamma+1, n-gamma+1) is
// the production path; the MH sampler below exists for cross-validation.
struct SupportPosterior {
  ClaimId claim;
  std::size_t gamma = 0;
  std::size_t n = 0;
  double alpha_post = 1.0;
  double beta_post = 1.0;
  CredibleInterval pci68, pci80, pci95;  // equal-tailed
  SupportCategory category = SupportCategory::Low;
  double support_point = 0.0;  // lower bound of the 95% PCI
};

// (gamma+1, n-gamma+1). Throws on gamma > n or n == 0.
std::pair<double, double> posterior_params(std::size_t gamma, std::size_t n);

// q-quantile of Beta(alpha_post, beta_post); see beta.hpp for accuracy.
double posterior_quantile(double alpha_post, double beta_post, double q);

// Random-walk Metropolis on theta in [0,1] targeting
// theta^gamma (1-theta)^(n-gamma), initialized at the MAP gamma/n clamped
// away from the boundary, with a Gaussian step reflected at [0,1]. Returns
// the post-burn-in samples. Deterministic given seed.
std::vector<double> mcmc_sample_posterior(std::size_t gamma, std::size_t n,
                                          std::size_t iters, std::size_t burn_in,
                                          std::uint64_t seed, double step = 0.1);

// Strictest interval whose lower bound clears 0.5 wins; a 68% interval
// entirely below 0.5 is Contradictory; everything else is Low. Exact
// equality with 0.5 falls through to Low.
SupportCategory classify_claim(const SupportPosterior& posterior);

// The L_SUPT predictor: lower bound of the 95% PCI.
double support_in_literature(const SupportPosterior& posterior);

// Closed-form construction of the full posterior summary.
SupportPosterior make_support_posterior(const ClaimId& claim, std::size_t gamma,
                                        std::size_t n);

}  // namespace claimrep
