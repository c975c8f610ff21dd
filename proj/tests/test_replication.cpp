#include <cmath>
#include <vector>

#include "claimrep/replication.hpp"
#include "claimrep/rng.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace claimrep;

TEST_CASE("replication indicator") {
  CHECK(replication_indicator(Direction::Increase, 2.3));
  CHECK_FALSE(replication_indicator(Direction::Decrease, 0.4));
  CHECK_FALSE(replication_indicator(Direction::Increase, 0.0));
  CHECK(replication_indicator(Direction::Decrease, -1.0));

  SUBCASE("flip symmetry: R(flip(d), -z) == R(d, z) for z != 0") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      const double z = rng.normal();
      if (z == 0.0) continue;
      const auto d = rng.bernoulli(0.5) ? Direction::Increase : Direction::Decrease;
      CHECK(replication_indicator(flip(d), -z) == replication_indicator(d, z));
    }
  }
}

TEST_CASE("observed replication rate") {
  SUBCASE("all replicated: degenerate") {
    const auto r = observed_replication_rate(std::vector<bool>{true, true, true},
                                             500, 3);
    CHECK(r.estimate.mean == 1.0);
    CHECK(r.estimate.sem == 0.0);
  }
  SUBCASE("[true,false]: sem near the exact 4-resample enumeration value") {
    // Resample means {1, .5, .5, 0} equiprobable: SD = sqrt(0.125) = 0.35355.
    const auto r = observed_replication_rate(std::vector<bool>{true, false},
                                             100000, 5);
    CHECK(r.estimate.mean == 0.5);
    CHECK(r.estimate.sem == doctest::Approx(0.3535533905932738).epsilon(0.02));
  }
  SUBCASE("planted rate recovered within 3 binomial SE") {
    Rng rng(77);
    const double p = 0.37;
    const std::size_t n = 1000;
    std::vector<bool> flags(n);
    std::size_t planted = 0;
    for (auto&& f : flags) {
      const bool v = rng.bernoulli(p);
      f = v;
      planted += v;
    }
    const auto r = observed_replication_rate(flags, 4000, 9);
    CHECK(r.estimate.mean ==
          doctest::Approx(static_cast<double>(planted) / n).epsilon(1e-12));
    CHECK(std::fabs(r.estimate.mean - p) < 3.0 * std::sqrt(p * (1 - p) / n));
  }
  SUBCASE("empty input throws") {
    CHECK_THROWS_AS(observed_replication_rate(std::vector<bool>{}, 10, 1),
                    std::invalid_argument);
  }
  SUBCASE("outcome-record overload agrees with the flag form") {
    std::vector<ReplicationOutcome> outcomes;
    std::vector<bool> flags;
    for (int i = 0; i < 20; ++i) {
      ReplicationOutcome o;
      o.claim = make_claim_id("d" + std::to_string(i), "g");
      o.literature_direction = i % 2 ? Direction::Increase : Direction::Decrease;
      o.z_combined = i % 3 ? 1.0 : -1.0;
      o.replicated = replication_indicator(o.literature_direction, o.z_combined);
      flags.push_back(o.replicated);
      outcomes.push_back(std::move(o));
    }
    const auto a = observed_replication_rate(outcomes, 500, 12);
    const auto b = observed_replication_rate(flags, 500, 12);
    CHECK(a.estimate.mean == b.estimate.mean);
    CHECK(a.estimate.sem == b.estimate.sem);
  }
}

TEST_CASE("null replication rate propagates direction bias") {
  SUBCASE("all-Increase claims, half positive effects") {
    std::vector<Direction> dirs(100, Direction::Increase);
    std::vector<double> effects;
    for (int i = 0; i < 50; ++i) effects.push_back(1.0 + i);
    for (int i = 0; i < 50; ++i) effects.push_back(-1.0 - i);
    const auto r = null_replication_rate(dirs, effects, 200, 21);
    CHECK(r.estimate.mean == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.estimate.sem == 0.0);  // every permutation scores exactly 0.5
  }
  SUBCASE("all-Increase claims, 80% positive effects") {
    std::vector<Direction> dirs(200, Direction::Increase);
    std::vector<double> effects;
    for (int i = 0; i < 160; ++i) effects.push_back(0.5 + i);
    for (int i = 0; i < 40; ++i) effects.push_back(-0.5 - i);
    const auto r = null_replication_rate(dirs, effects, 200, 22);
    CHECK(r.estimate.mean == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("relabeling which claim got which effect leaves the null invariant") {
    // The permutation destroys exactly the claim-effect alignment, so any
    // initial pairing of the same direction and effect multisets gives the
    // same null distribution.
    std::vector<Direction> dirs;
    for (int i = 0; i < 30; ++i) {
      dirs.push_back(i % 3 == 0 ? Direction::Decrease : Direction::Increase);
    }
    std::vector<double> effects;
    Rng rng(4);
    for (int i = 0; i < 30; ++i) effects.push_back(rng.normal());
    auto relabeled = effects;
    rng.shuffle(relabeled);
    const auto a = null_replication_rate(dirs, effects, 6000, 31);
    const auto b = null_replication_rate(dirs, relabeled, 6000, 32);
    // Monte Carlo error of each mean is sem/sqrt(iters) ~ 0.001.
    CHECK(std::fabs(a.estimate.mean - b.estimate.mean) < 0.01);
  }
  SUBCASE("size mismatch throws") {
    CHECK_THROWS_AS(null_replication_rate({Direction::Increase}, {1.0, 2.0}, 10, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("relative replication increase") {
  CHECK(relative_replication_increase({0.6, 0.0, 1}, {0.5, 0.0, 1}) ==
        doctest::Approx(20.0));
  CHECK(relative_replication_increase({0.5, 0.0, 1}, {0.5, 0.0, 1}) ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(relative_replication_increase({0.5, 0.0, 1}, {0.0, 0.0, 1}),
                  std::invalid_argument);

  SUBCASE("sign of RRI tracks the rate difference, interval from paired replicates") {
    std::vector<bool> obs_flags(60, true);
    for (int i = 0; i < 24; ++i) obs_flags[i] = false;  // 60% observed
    const auto obs = observed_replication_rate(obs_flags, 3000, 41);
    std::vector<Direction> dirs(60, Direction::Increase);
    std::vector<double> effects;
    for (int i = 0; i < 30; ++i) effects.push_back(1.0 + i);
    for (int i = 0; i < 30; ++i) effects.push_back(-1.0 - i);
    const auto rand = null_replication_rate(dirs, effects, 3000, 42);
    const auto rri = rri_with_interval(obs, rand);
    CHECK(rri.percent == doctest::Approx(20.0).epsilon(1e-9));
    CHECK((rri.percent > 0) == (obs.estimate.mean > rand.estimate.mean));
    CHECK(rri.ci_low <= rri.percent);
    CHECK(rri.ci_high >= rri.percent);
  }
}

TEST_CASE("shared-author agreement test") {
  SUBCASE("planted difference: shared pairs all agree, distinct pairs mixed") {
    test_helpers::CorpusBuilder b;
    // 4 shared-author pairs that agree (same-direction papers with a common
    // author), 4 distinct pairs of which 2 agree.
    std::size_t paper_id = 0;
    auto add_pair = [&](const std::string& gene, bool share, bool agree) {
      const std::string p1 = "p" + std::to_string(paper_id++);
      const std::string p2 = "p" + std::to_string(paper_id++);
      b.paper(p1, {"hub_" + gene, "x_" + p1});
      b.paper(p2, share ? std::vector<std::string>{"hub_" + gene, "y_" + p2}
                        : std::vector<std::string>{"y_" + p2});
      b.finding("drug", gene, Direction::Increase, p1);
      b.finding("drug", gene, agree ? Direction::Increase : Direction::Decrease, p2);
    };
    int gene_no = 0;
    for (int i = 0; i < 4; ++i) add_pair("g" + std::to_string(gene_no++), true, true);
    for (int i = 0; i < 2; ++i) add_pair("g" + std::to_string(gene_no++), false, true);
    for (int i = 0; i < 2; ++i) add_pair("g" + std::to_string(gene_no++), false, false);

    const auto result = shared_author_agreement_test(b.corpus, 20000, 8);
    CHECK(result.shared_pairs == 4);
    CHECK(result.distinct_pairs == 4);
    CHECK(result.rate_shared == 1.0);
    CHECK(result.rate_distinct == 0.5);
    CHECK(result.diff == doctest::Approx(0.5));
    CHECK(result.p_value < 0.15);  // k=4 per side bounds attainable evidence
  }
  SUBCASE("identical agreement in both partitions: diff 0, p near 1") {
    test_helpers::CorpusBuilder b;
    std::size_t paper_id = 0;
    auto add_pair = [&](const std::string& gene, bool share) {
      const std::string p1 = "p" + std::to_string(paper_id++);
      const std::string p2 = "p" + std::to_string(paper_id++);
      b.paper(p1, {"hub_" + gene, "x_" + p1});
      b.paper(p2, share ? std::vector<std::string>{"hub_" + gene}
                        : std::vector<std::string>{"y_" + p2});
      b.finding("drug", gene, Direction::Increase, p1);
      b.finding("drug", gene, Direction::Increase, p2);
    };
    for (int i = 0; i < 6; ++i) add_pair("g" + std::to_string(i), i % 2 == 0);
    const auto result = shared_author_agreement_test(b.corpus, 5000, 9);
    CHECK(result.diff == 0.0);
    CHECK(result.p_value > 0.9);
  }
  SUBCASE("one empty partition throws") {
    test_helpers::CorpusBuilder b;
    b.paper("p0", {"a"}).paper("p1", {"a", "b"});
    b.finding("drug", "g", Direction::Increase, "p0");
    b.finding("drug", "g", Direction::Increase, "p1");
    CHECK_THROWS_AS(shared_author_agreement_test(b.corpus, 100, 1),
                    std::invalid_argument);
  }
}
