#include <algorithm>
#include <cmath>
#include <vector>

#include "claimrep/beta.hpp"
#include "claimrep/rng.hpp"
#include "claimrep/stats.hpp"
#include "claimrep/support.hpp"
#include "doctest.h"

using namespace claimrep;

namespace {

const ClaimId kClaim{"drug", "gene"};

int category_rank(SupportCategory c) {
  switch (c) {
    case SupportCategory::VeryHigh: return 4;
    case SupportCategory::High: return 3;
    case SupportCategory::Moderate: return 2;
    case SupportCategory::Low: return 1;
    case SupportCategory::Contradictory: return 0;
  }
  return 1;
}

}  // namespace

TEST_CASE("posterior parameters: conjugate closed form") {
  CHECK(posterior_params(1, 1) == std::pair{2.0, 1.0});
  CHECK(posterior_params(0, 5) == std::pair{1.0, 6.0});
  CHECK(posterior_params(7, 7) == std::pair{8.0, 1.0});
  CHECK_THROWS_AS(posterior_params(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(posterior_params(0, 0), std::invalid_argument);
  // Beta(2,1) mean = 2/3.
  const auto [a, b] = posterior_params(1, 1);
  CHECK(a / (a + b) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("beta quantiles against analytic CDF inversions") {
  // Beta(8,1): F(x) = x^8.
  CHECK(posterior_quantile(8, 1, 0.025) ==
        doctest::Approx(0.6305833524471807).epsilon(1e-10));
  // Beta(2,1): F(x) = x^2.
  CHECK(posterior_quantile(2, 1, 0.16) == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(posterior_quantile(2, 1, 0.84) ==
        doctest::Approx(0.916515138991168).epsilon(1e-10));
  CHECK(posterior_quantile(2, 1, 0.025) ==
        doctest::Approx(0.15811388300841897).epsilon(1e-10));
  // Beta(1,1): uniform.
  CHECK(posterior_quantile(1, 1, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  // Beta(1,2): F(x) = 1-(1-x)^2.
  CHECK(posterior_quantile(1, 2, 0.025) ==
        doctest::Approx(0.012579117093425074).epsilon(1e-10));
  // Beta(1,6): F(x) = 1-(1-x)^6.
  CHECK(posterior_quantile(1, 6, 0.16) ==
        doctest::Approx(0.028640748196988364).epsilon(1e-10));
  CHECK(posterior_quantile(1, 6, 0.84) ==
        doctest::Approx(0.2631937002719227).epsilon(1e-10));
  CHECK_THROWS_AS(posterior_quantile(2, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(posterior_quantile(2, 1, 1.0), std::invalid_argument);

  SUBCASE("quantile inverts the CDF to high precision") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const double a = 1.0 + rng.index(30);
      const double b = 1.0 + rng.index(30);
      const double q = 0.01 + 0.98 * rng.uniform();
      const double x = beta_quantile(a, b, q);
      CHECK(beta_cdf(a, b, x) == doctest::Approx(q).epsilon(1e-9));
    }
  }
}

TEST_CASE("claim typology on analytic cases") {
  CHECK(make_support_posterior(kClaim, 7, 7).category == SupportCategory::VeryHigh);
  CHECK(make_support_posterior(kClaim, 1, 1).category == SupportCategory::Low);
  CHECK(make_support_posterior(kClaim, 0, 5).category == SupportCategory::Contradictory);

  const auto one_of_one = make_support_posterior(kClaim, 1, 1);
  CHECK(one_of_one.pci68.low == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(one_of_one.pci68.high == doctest::Approx(0.916515138991168).epsilon(1e-10));

  const auto none_of_five = make_support_posterior(kClaim, 0, 5);
  CHECK(none_of_five.pci68.high < 0.5);
}

TEST_CASE("support_in_literature is the 95% PCI lower bound") {
  CHECK(support_in_literature(make_support_posterior(kClaim, 7, 7)) ==
        doctest::Approx(0.6305833524471807).epsilon(1e-10));
  CHECK(support_in_literature(make_support_posterior(kClaim, 1, 1)) ==
        doctest::Approx(0.15811388300841897).epsilon(1e-10));
  CHECK(support_in_literature(make_support_posterior(kClaim, 0, 1)) ==
        doctest::Approx(0.012579117093425074).epsilon(1e-10));
}

TEST_CASE("typology properties over (gamma, n) grids") {
  SUBCASE("unanimous support eventually VeryHigh, unanimous opposition Contradictory") {
    CHECK(make_support_posterior(kClaim, 30, 30).category == SupportCategory::VeryHigh);
    CHECK(make_support_posterior(kClaim, 0, 30).category ==
          SupportCategory::Contradictory);
  }
  SUBCASE("monotone in gamma for fixed n; PCIs nested; L_SUPT strictly increasing") {
    for (std::size_t n = 1; n <= 20; ++n) {
      int prev_rank = -1;
      double prev_support = -1.0;
      for (std::size_t gamma = 0; gamma <= n; ++gamma) {
        const auto post = make_support_posterior(kClaim, gamma, n);
        CHECK(post.pci95.low <= post.pci80.low);
        CHECK(post.pci80.low <= post.pci68.low);
        CHECK(post.pci68.high <= post.pci80.high);
        CHECK(post.pci80.high <= post.pci95.high);
        CHECK(category_rank(post.category) >= prev_rank);
        prev_rank = category_rank(post.category);
        CHECK(post.support_point > prev_support);
        prev_support = post.support_point;
      }
    }
  }
}

TEST_CASE("Metropolis sampler matches the conjugate posterior") {
  SUBCASE("(1,1): mean near 2/3") {
    const auto samples = mcmc_sample_posterior(1, 1, 10000, 2500, 42);
    CHECK(samples.size() == 7500);
    CHECK(mean(samples) == doctest::Approx(2.0 / 3.0).epsilon(0.015));
  }
  SUBCASE("(0,5): tail quantiles near Beta(1,6)") {
    auto samples = mcmc_sample_posterior(0, 5, 10000, 2500, 7);
    std::sort(samples.begin(), samples.end());
    CHECK(std::fabs(quantile_sorted(samples, 0.025) - beta_quantile(1, 6, 0.025)) <
          0.02);
    CHECK(std::fabs(quantile_sorted(samples, 0.975) - beta_quantile(1, 6, 0.975)) <
          0.02);
  }
  SUBCASE("(5,10): KS distance to Beta(6,6) below 0.03") {
    auto samples = mcmc_sample_posterior(5, 10, 10000, 2500, 99);
    std::sort(samples.begin(), samples.end());
    double ks = 0.0;
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double cdf = beta_cdf(6, 6, samples[i]);
      ks = std::max(ks, std::fabs(cdf - static_cast<double>(i) / n));
      ks = std::max(ks, std::fabs(cdf - static_cast<double>(i + 1) / n));
    }
    CHECK(ks < 0.03);
  }
  SUBCASE("deterministic given seed") {
    const auto a = mcmc_sample_posterior(3, 9, 2000, 500, 123);
    const auto b = mcmc_sample_posterior(3, 9, 2000, 500, 123);
    CHECK(a == b);
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(mcmc_sample_posterior(2, 1, 100, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(mcmc_sample_posterior(1, 2, 100, 100, 1), std::invalid_argument);
  }
}
