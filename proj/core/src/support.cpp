#include "claimrep/support.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "claimrep/beta.hpp"
#include "claimrep/rng.hpp"

namespace claimrep {

namespace {

// Marsaglia-Tsang gamma draw (with the shape boost below 1).
double sample_gamma(Rng& rng, double shape) {
  if (shape < 1.0) {
    const double u = std::max(rng.uniform(), 1e-300);
    return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

double sample_beta(Rng& rng, double a, double b) {
  const double x = sample_gamma(rng, a);
  const double y = sample_gamma(rng, b);
  return x / (x + y);
}

}  // namespace

std::string_view to_string(SupportCategory c) {
  switch (c) {
    case SupportCategory::VeryHigh: return "very_high";
    case SupportCategory::High: return "high";
    case SupportCategory::Moderate: return "moderate";
    case SupportCategory::Low: return "low";
    case SupportCategory::Contradictory: return "contradictory";
  }
  return "low";
}

std::pair<double, double> posterior_params(std::size_t gamma, std::size_t n) {
  if (n == 0) throw std::invalid_argument("posterior needs n >= 1");
  if (gamma > n) throw std::invalid_argument("gamma cannot exceed n");
  return {static_cast<double>(gamma) + 1.0, static_cast<double>(n - gamma) + 1.0};
}

double posterior_quantile(double alpha_post, double beta_post, double q) {
  return beta_quantile(alpha_post, beta_post, q);
}

std::vector<double> mcmc_sample_posterior(std::size_t gamma, std::size_t n,
                                          std::size_t iters, std::size_t burn_in,
                                          std::uint64_t seed, double step) {
  if (n == 0 || gamma > n) throw std::invalid_argument("invalid counts");
  if (iters <= burn_in) throw std::invalid_argument("iters must exceed burn_in");
  if (!(step > 0.0)) throw std::invalid_argument("proposal step must be positive");

  const double g = static_cast<double>(gamma);
  const double ng = static_cast<double>(n - gamma);
  auto log_target = [&](double theta) {
    if (theta <= 0.0 || theta >= 1.0) {
      // Boundary has zero posterior mass unless the matching exponent vanishes.
      if (theta == 0.0 && gamma == 0) return 0.0;
      if (theta == 1.0 && gamma == n) return 0.0;
      return -std::numeric_limits<double>::infinity();
    }
    return g * std::log(theta) + ng * std::log1p(-theta);
  };

  // MAP initialization, clamped off the boundary.
  constexpr double kEps = 1e-3;
  double theta = std::clamp(g / static_cast<double>(n), kEps, 1.0 - kEps);
  double log_p = log_target(theta);

  // Burn-in runs a Gaussian random walk whose scale is tuned toward the
  // standard acceptance band (`step` is the starting scale). The burn-in
  // draws also feed running moments; at the end of burn-in the kernel
  // switches to an independence proposal, a Beta moment-matched to those
  // draws, with the Hastings correction. Stationarity is exact either way;
  // the adapted kernel brings the retained draws to near-iid quality, which
  // the chain-length contract requires.
  constexpr std::size_t kTuneInterval = 100;
  std::size_t accepted_in_window = 0;
  double warm_sum = 0.0, warm_sq = 0.0;
  std::size_t warm_count = 0;

  bool independence_phase = false;
  double prop_a = 1.0, prop_b = 1.0;
  auto log_proposal = [&](double theta_value) {
    return (prop_a - 1.0) * std::log(theta_value) +
           (prop_b - 1.0) * std::log1p(-theta_value);
  };

  Rng rng(seed);
  std::vector<double> samples;
  samples.reserve(iters - burn_in);
  for (std::size_t it = 0; it < iters; ++it) {
    if (it == burn_in && warm_count > 10) {
      const double m = warm_sum / static_cast<double>(warm_count);
      const double v =
          warm_sq / static_cast<double>(warm_count) - m * m;
      if (v > 1e-12 && v < m * (1.0 - m)) {
        const double common = m * (1.0 - m) / v - 1.0;
        prop_a = std::clamp(m * common, 0.5, 1e6);
        prop_b = std::clamp((1.0 - m) * common, 0.5, 1e6);
        independence_phase = true;
        theta = std::clamp(theta, 1e-12, 1.0 - 1e-12);
        log_p = log_target(theta);
      }
    }

    double proposal;
    double log_accept;
    if (independence_phase) {
      proposal = std::clamp(sample_beta(rng, prop_a, prop_b), 1e-12, 1.0 - 1e-12);
      log_accept = log_target(proposal) - log_p + log_proposal(theta) -
                   log_proposal(proposal);
    } else {
      proposal = theta + step * rng.normal();
      // Reflect into [0,1]; the random-walk proposal stays symmetric.
      while (proposal < 0.0 || proposal > 1.0) {
        if (proposal < 0.0) proposal = -proposal;
        if (proposal > 1.0) proposal = 2.0 - proposal;
      }
      log_accept = log_target(proposal) - log_p;
    }
    if (log_accept >= 0.0 ||
        std::log(std::max(rng.uniform(), 1e-300)) < log_accept) {
      theta = proposal;
      log_p = log_target(theta);
      ++accepted_in_window;
    }
    if (it < burn_in) {
      warm_sum += theta;
      warm_sq += theta * theta;
      ++warm_count;
      if ((it + 1) % kTuneInterval == 0) {
        const double rate = static_cast<double>(accepted_in_window) / kTuneInterval;
        if (rate < 0.05) {
          step *= 0.5;
        } else if (rate < 0.25) {
          step *= 0.8;
        } else if (rate > 0.75) {
          step *= 2.0;
        } else if (rate > 0.5) {
          step *= 1.2;
        }
        step = std::clamp(step, 1e-4, 2.0);
        accepted_in_window = 0;
      }
    } else {
      samples.push_back(theta);
    }
  }
  return samples;
}

namespace {

CredibleInterval equal_tailed(double a, double b, double mass) {
  const double tail = (1.0 - mass) / 2.0;
  return {beta_quantile(a, b, tail), beta_quantile(a, b, 1.0 - tail)};
}

}  // namespace

SupportCategory classify_claim(const SupportPosterior& posterior) {
  if (posterior.pci95.low > 0.5) return SupportCategory::VeryHigh;
  if (posterior.pci80.low > 0.5) return SupportCategory::High;
  if (posterior.pci68.low > 0.5) return SupportCategory::Moderate;
  if (posterior.pci68.high < 0.5) return SupportCategory::Contradictory;
  return SupportCategory::Low;
}

double support_in_literature(const SupportPosterior& posterior) {
  return posterior.pci95.low;
}

SupportPosterior make_support_posterior(const ClaimId& claim, std::size_t gamma,
                                        std::size_t n) {
  SupportPosterior post;
  post.claim = claim;
  post.gamma = gamma;
  post.n = n;
  std::tie(post.alpha_post, post.beta_post) = posterior_params(gamma, n);
  post.pci68 = equal_tailed(post.alpha_post, post.beta_post, 0.68);
  post.pci80 = equal_tailed(post.alpha_post, post.beta_post, 0.80);
  post.pci95 = equal_tailed(post.alpha_post, post.beta_post, 0.95);
  post.category = classify_claim(post);
  post.support_point = support_in_literature(post);
  return post;
}

}  // namespace claimrep
