#include <cmath>
#include <vector>

#include "claimrep/effects.hpp"
#include "claimrep/rng.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace claimrep;

TEST_CASE("stouffer combination") {
  CHECK(stouffer_combine(std::vector<double>{2.0}) == 2.0);
  CHECK(stouffer_combine(std::vector<double>{1, 1, 1, 1}) == doctest::Approx(2.0));
  CHECK(stouffer_combine(std::vector<double>{3, -3}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(stouffer_combine(std::vector<double>{}), std::invalid_argument);

  SUBCASE("scaling and replication laws") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<double> zs(1 + rng.index(10));
      for (auto& z : zs) z = 4.0 * rng.normal();
      const double c = -3.0 + 6.0 * rng.uniform();
      std::vector<double> scaled = zs;
      for (auto& z : scaled) z *= c;
      CHECK(stouffer_combine(scaled) ==
            doctest::Approx(c * stouffer_combine(zs)).epsilon(1e-12));

      const double z0 = zs[0];
      const std::size_t k = 1 + rng.index(9);
      std::vector<double> copies(k, z0);
      CHECK(stouffer_combine(copies) ==
            doctest::Approx(z0 * std::sqrt(static_cast<double>(k))).epsilon(1e-12));
    }
  }
}

TEST_CASE("bootstrap significance") {
  SUBCASE("constant list gives a degenerate interval at z*sqrt(k)") {
    const auto ci = bootstrap_significance(std::vector<double>{2, 2, 2}, 500, 0.05, 9);
    CHECK(ci.low == doctest::Approx(3.4641016151377544).epsilon(1e-12));
    CHECK(ci.high == doctest::Approx(3.4641016151377544).epsilon(1e-12));
    CHECK(ci.significant);
  }
  SUBCASE("symmetric pair spans zero") {
    // Resample space is {-7.071, 0, 7.071} with weights 1/4, 1/2, 1/4, so the
    // 95% interval must straddle 0.
    const auto ci =
        bootstrap_significance(std::vector<double>{-5, 5}, 4000, 0.05, 10);
    CHECK(ci.low < 0.0);
    CHECK(ci.high > 0.0);
    CHECK_FALSE(ci.significant);
    CHECK(ci.low == doctest::Approx(-7.0710678118654755).epsilon(1e-9));
    CHECK(ci.high == doctest::Approx(7.0710678118654755).epsilon(1e-9));
  }
  SUBCASE("single zero: degenerate interval containing zero is insignificant") {
    const auto ci = bootstrap_significance(std::vector<double>{0.0}, 100, 0.05, 1);
    CHECK(ci.low == 0.0);
    CHECK(ci.high == 0.0);
    CHECK_FALSE(ci.significant);
  }
  SUBCASE("significance flag is invariant under permutation of zs") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> zs(2 + rng.index(8));
      for (auto& z : zs) z = 1.5 + rng.normal();
      std::vector<double> shuffled = zs;
      rng.shuffle(shuffled);
      const auto a = bootstrap_significance(zs, 2000, 0.05, 77);
      const auto b = bootstrap_significance(shuffled, 2000, 0.05, 77);
      CHECK(a.significant == b.significant);
    }
  }
  SUBCASE("deterministic given seed") {
    const std::vector<double> zs{0.3, -1.2, 2.2, 0.9};
    const auto a = bootstrap_significance(zs, 1000, 0.05, 123);
    const auto b = bootstrap_significance(zs, 1000, 0.05, 123);
    CHECK(a.low == b.low);
    CHECK(a.high == b.high);
  }
  SUBCASE("stratified resampling preserves per-stratum counts") {
    // With singleton strata every resample reproduces the input, so the
    // interval collapses to the combined value.
    const std::vector<double> zs{1.0, 2.0, 3.0};
    const std::vector<std::size_t> strata{0, 1, 2};
    const auto ci = bootstrap_significance(zs, 300, 0.05, 5, strata);
    const double combined = stouffer_combine(zs);
    CHECK(ci.low == combined);
    CHECK(ci.high == combined);

    // Two strata: the singleton stratum contributes its value exactly once
    // per resample, so with zeros elsewhere the interval is again a point.
    const std::vector<double> wide{10.0, 0.0, 0.0};
    const std::vector<std::size_t> two_strata{7, 3, 3};
    const auto ci2 = bootstrap_significance(wide, 2000, 0.05, 6, two_strata);
    CHECK(ci2.low == doctest::Approx(10.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(ci2.high == doctest::Approx(10.0 / std::sqrt(3.0)).epsilon(1e-12));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(bootstrap_significance(std::vector<double>{1.0}, 0, 0.05, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(bootstrap_significance(std::vector<double>{}, 10, 0.05, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("coefficient of variation") {
  CHECK(*coefficient_of_variation(std::vector<double>{1, 3}) ==
        doctest::Approx(0.7071067811865476).epsilon(1e-12));
  CHECK(*coefficient_of_variation(std::vector<double>{5, 5, 5}) == 0.0);
  CHECK_FALSE(coefficient_of_variation(std::vector<double>{-1, 1}).has_value());
  CHECK_THROWS_AS(coefficient_of_variation(std::vector<double>{1}),
                  std::invalid_argument);

  SUBCASE("scale invariance for positive scalars") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> zs(2 + rng.index(6));
      for (auto& z : zs) z = 1.0 + rng.normal();
      const auto base = coefficient_of_variation(zs);
      if (!base) continue;
      const double c = 0.1 + 3.0 * rng.uniform();
      std::vector<double> scaled = zs;
      for (auto& z : scaled) z *= c;
      CHECK(*coefficient_of_variation(scaled) == doctest::Approx(*base).epsilon(1e-10));
    }
  }
}

TEST_CASE("aggregate_claim_effects") {
  test_helpers::CorpusBuilder b;
  b.paper("p1", {"a1"});
  b.finding("drugx", "gene1", Direction::Increase, "p1");
  b.finding("drugx", "gene2", Direction::Increase, "p1");
  b.signature("drugx", "gene1", 1.9);
  b.signature("drugx", "gene2", 0.4, "a375", "10um", "24h");
  b.signature("drugx", "gene2", 1.2, "mcf7", "1um", "6h");
  b.finding("drugx", "gene3", Direction::Decrease, "p1");  // no experiment

  const auto result = aggregate_claim_effects(b.corpus, 400, 0.05, 99, 1);
  CHECK(result.claims_without_signatures == 1);
  REQUIRE(result.effects.size() == 2);

  const auto& single = result.effects.at(make_claim_id("drugx", "gene1"));
  CHECK(single.k == 1);
  CHECK(single.z_combined == doctest::Approx(1.9));
  CHECK(single.significant);  // degenerate CI at 1.9 excludes 0
  CHECK_FALSE(single.cv.has_value());

  const auto& pair = result.effects.at(make_claim_id("drugx", "gene2"));
  CHECK(pair.k == 2);
  CHECK(pair.cv.has_value());

  SUBCASE("parallel and serial runs agree bit-for-bit") {
    const auto parallel = aggregate_claim_effects(b.corpus, 400, 0.05, 99, 8);
    for (const auto& [claim, eff] : result.effects) {
      const auto& other = parallel.effects.at(claim);
      CHECK(eff.ci_low == other.ci_low);
      CHECK(eff.ci_high == other.ci_high);
      CHECK(eff.z_combined == other.z_combined);
    }
  }
}

TEST_CASE("aggregate: planted zero-mean fraction lands near expectation") {
  // 200 claims, a planted 50% with pure-noise signatures; the observed
  // insignificant fraction should land within 3 SE of the planted mix's
  // expectation estimated from per-claim significance probabilities.
  Rng rng(2024);
  test_helpers::CorpusBuilder b;
  b.paper("p1", {"a1"});
  std::size_t null_claims = 0;
  const std::size_t n_claims = 200;
  for (std::size_t c = 0; c < n_claims; ++c) {
    const std::string gene = "g" + std::to_string(c);
    b.finding("drug", gene, Direction::Increase, "p1");
    const bool null_claim = c % 2 == 0;
    if (null_claim) ++null_claims;
    const double mu = null_claim ? 0.0 : 3.0;
    for (int k = 0; k < 4; ++k) {
      b.signature("drug", gene, mu + rng.normal(), "cell" + std::to_string(k));
    }
  }
  const auto result = aggregate_claim_effects(b.corpus, 600, 0.05, 31, 4);
  std::size_t insignificant = 0;
  for (const auto& [claim, eff] : result.effects) {
    if (!eff.significant) ++insignificant;
  }
  // Null claims: P(bootstrap CI of 4 N(0,1) draws excludes 0) is well below 1;
  // planted claims at mu=3 are essentially always significant. Bound loosely:
  // every insignificant claim must be a null claim modulo a 3-sigma binomial
  // band around the simulated expectation (see acceptance suite for the
  // sharper generator-driven version).
  CHECK(insignificant <= null_claims);
  CHECK(insignificant > null_claims / 4);
}
