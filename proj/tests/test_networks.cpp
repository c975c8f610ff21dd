#include <cmath>
#include <set>
#include <vector>

#include "claimrep/networks.hpp"
#include "claimrep/rng.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace claimrep;

TEST_CASE("jaccard coefficient") {
  CHECK(jaccard({"A", "B"}, {"B", "C"}) == doctest::Approx(1.0 / 3.0));
  CHECK(jaccard({"A", "B"}, {"A", "B"}) == 1.0);
  CHECK(jaccard({"A"}, {"B"}) == 0.0);
  CHECK(jaccard({}, {}) == 0.0);

  SUBCASE("symmetric and bounded") {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
      std::set<std::string> a, b;
      for (std::size_t i = 0; i < rng.index(8); ++i) {
        a.insert("e" + std::to_string(rng.index(12)));
      }
      for (std::size_t i = 0; i < rng.index(8); ++i) {
        b.insert("e" + std::to_string(rng.index(12)));
      }
      const double jab = jaccard(a, b);
      CHECK(jab == jaccard(b, a));
      CHECK(jab >= 0.0);
      CHECK(jab <= 1.0);
      if (!a.empty()) CHECK(jaccard(a, a) == 1.0);
    }
  }
}

TEST_CASE("independence score") {
  // 3 papers, one overlapping pair at 0.5: IND = 1 - 0.5/3.
  CHECK(independence_score({0.5, 0.0, 0.0}, 3) ==
        doctest::Approx(1.0 - 0.5 / 3.0).epsilon(1e-12));
  CHECK(independence_score({1.0, 1.0, 1.0}, 3) == 0.0);
  CHECK(independence_score({0.0, 0.0, 0.0}, 3) == 1.0);
  CHECK(independence_score({}, 2) == 1.0);
  CHECK_THROWS_AS(independence_score({0.5}, 1), std::invalid_argument);

  SUBCASE("monotonically non-increasing in any edge weight") {
    Rng rng(29);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 3 + rng.index(4);
      std::vector<double> weights(n * (n - 1) / 2);
      for (auto& w : weights) w = rng.uniform();
      const double base = independence_score(weights, n);
      auto bumped = weights;
      const std::size_t at = rng.index(weights.size());
      bumped[at] = std::min(1.0, bumped[at] + rng.uniform() * (1.0 - bumped[at]));
      CHECK(independence_score(bumped, n) <= base + 1e-12);
    }
  }
}

TEST_CASE("gini centralization") {
  CHECK(gini_centralization({1, 1, 1, 1}) == doctest::Approx(0.0));
  CHECK(gini_centralization({3, 1, 1, 1}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(gini_centralization({}), std::invalid_argument);
  CHECK_THROWS_AS(gini_centralization({0, 0}), std::invalid_argument);

  SUBCASE("monotone in the hub degree") {
    double prev = 0.0;
    for (double k = 2; k <= 10; ++k) {
      const double g = gini_centralization({k, 1, 1, 1});
      CHECK(g > prev);
      prev = g;
    }
  }
  SUBCASE("scale and permutation invariance") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<double> degrees(2 + rng.index(10));
      for (auto& d : degrees) d = 1.0 + rng.index(7);
      const double g = gini_centralization(degrees);
      const double c = 0.5 + 4.0 * rng.uniform();
      auto scaled = degrees;
      for (auto& d : scaled) d *= c;
      CHECK(gini_centralization(scaled) == doctest::Approx(g).epsilon(1e-12));
      auto shuffled = degrees;
      rng.shuffle(shuffled);
      CHECK(gini_centralization(shuffled) == doctest::Approx(g).epsilon(1e-12));
    }
  }
}

TEST_CASE("lorenz curve") {
  const auto equal = lorenz_curve({1, 1});
  REQUIRE(equal.size() == 3);
  CHECK(equal[0].population_share == 0.0);
  CHECK(equal[1].degree_share == doctest::Approx(0.5));
  CHECK(equal[2].degree_share == 1.0);

  const auto skewed = lorenz_curve({1, 3});
  REQUIRE(skewed.size() == 3);
  CHECK(skewed[1].population_share == doctest::Approx(0.5));
  CHECK(skewed[1].degree_share == doctest::Approx(0.25));

  CHECK_THROWS_AS(lorenz_curve({}), std::invalid_argument);

  SUBCASE("never rises above the diagonal, convex, anchored") {
    Rng rng(37);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<double> degrees(1 + rng.index(12));
      for (auto& d : degrees) d = 1.0 + rng.index(9);
      const auto curve = lorenz_curve(degrees);
      CHECK(curve.front().population_share == 0.0);
      CHECK(curve.front().degree_share == 0.0);
      CHECK(curve.back().population_share == 1.0);
      CHECK(curve.back().degree_share == doctest::Approx(1.0));
      for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        CHECK(curve[i].degree_share <= curve[i].population_share + 1e-12);
        // Convexity: slopes non-decreasing (degrees sorted ascending).
        if (i + 2 < curve.size()) {
          const double s1 = curve[i + 1].degree_share - curve[i].degree_share;
          const double s2 = curve[i + 2].degree_share - curve[i + 1].degree_share;
          CHECK(s1 <= s2 + 1e-12);
        }
      }
    }
  }
  SUBCASE("Gini equals twice the area between diagonal and curve") {
    Rng rng(41);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<double> degrees(2 + rng.index(10));
      for (auto& d : degrees) d = 1.0 + rng.index(6);
      const auto curve = lorenz_curve(degrees);
      double area = 0.0;  // trapezoid under the curve
      for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        area += (curve[i + 1].population_share - curve[i].population_share) *
                (curve[i].degree_share + curve[i + 1].degree_share) / 2.0;
      }
      CHECK(gini_centralization(degrees) ==
            doctest::Approx(1.0 - 2.0 * area).epsilon(1e-9));
    }
  }
}

TEST_CASE("claim network construction") {
  test_helpers::CorpusBuilder b;
  b.paper("p1", {"a1", "a2", "a3"}, {"m1"}, {"r1"}, "j1", 0.02);
  b.paper("p2", {"a1"}, {"m1", "m2"}, {"r2"}, "j2", 0.04);
  b.paper("p3", {"a9"}, {"m9"}, {"r9"}, "j3");
  b.finding("x", "g", Direction::Increase, "p1")
      .finding("x", "g", Direction::Increase, "p2")
      .finding("x", "g", Direction::Decrease, "p3");

  const auto net = build_claim_network(b.corpus, make_claim_id("x", "g"));
  CHECK(net.nodes.size() == 3);
  CHECK(net.supporting_nodes == std::vector<std::string>{"p1", "p2"});
  REQUIRE(net.agreement.size() == 3);
  std::size_t opposing_edges = 0;
  for (const auto& e : net.agreement) {
    if (!e.agrees) ++opposing_edges;
  }
  CHECK(opposing_edges == 2);  // p3 disagrees with both supporters

  const auto& authors = net.overlap.at(OverlapLayer::Authors);
  REQUIRE(authors.size() == 1);
  CHECK(authors[0].jc == doctest::Approx(1.0 / 3.0));  // {a1,a2,a3} vs {a1}
  CHECK(authors[0].shared == 1);

  CHECK_THROWS_AS(build_claim_network(b.corpus, make_claim_id("nope", "g")),
                  IngestError);

  SUBCASE("indices") {
    const auto idx = claim_indices(net, b.corpus.papers);
    REQUIRE(idx.has_value());
    CHECK(idx->social_independence == doctest::Approx(1.0 - 1.0 / 3.0));
    CHECK(idx->community_size == 4);  // a1,a2,a3 from supporters + a9 opposing
    // Bipartite degrees over supporting papers: a1 -> 2 papers, a2/a3 -> 1.
    CHECK(idx->centralization ==
          doctest::Approx(gini_centralization({2, 1, 1})).epsilon(1e-12));
    REQUIRE(idx->journal_prominence.has_value());
    CHECK(*idx->journal_prominence == doctest::Approx(0.03));
  }
  SUBCASE("two disjoint supporting papers score fully independent") {
    test_helpers::CorpusBuilder d;
    d.paper("q1", {"a1"}, {"m1"}, {"r1"});
    d.paper("q2", {"a2"}, {"m2"}, {"r2"});
    d.finding("y", "g", Direction::Increase, "q1")
        .finding("y", "g", Direction::Increase, "q2");
    const auto dnet = build_claim_network(d.corpus, make_claim_id("y", "g"));
    const auto didx = claim_indices(dnet, d.corpus.papers);
    REQUIRE(didx.has_value());
    CHECK(didx->social_independence == 1.0);
    CHECK(didx->method_independence == 1.0);
    CHECK(didx->knowledge_independence == 1.0);
    CHECK_FALSE(didx->journal_prominence.has_value());  // no eigenfactors given
  }
  SUBCASE("single-paper claims carry no indices") {
    test_helpers::CorpusBuilder d;
    d.paper("q1", {"a1"});
    d.finding("z", "g", Direction::Increase, "q1");
    const auto dnet = build_claim_network(d.corpus, make_claim_id("z", "g"));
    CHECK_FALSE(claim_indices(dnet, d.corpus.papers).has_value());
  }
}

TEST_CASE("duplicating a paper never raises social independence") {
  Rng rng(43);
  for (int trial = 0; trial < 25; ++trial) {
    test_helpers::CorpusBuilder b;
    const std::size_t n_papers = 2 + rng.index(4);
    std::vector<std::vector<std::string>> author_sets;
    for (std::size_t p = 0; p < n_papers; ++p) {
      std::set<std::string> authors;
      const std::size_t team = 1 + rng.index(4);
      while (authors.size() < team) {
        authors.insert("a" + std::to_string(rng.index(8)));
      }
      author_sets.emplace_back(authors.begin(), authors.end());
      b.paper("p" + std::to_string(p), author_sets.back());
      b.finding("x", "g", Direction::Increase, "p" + std::to_string(p));
    }
    const auto claim = make_claim_id("x", "g");
    const auto before =
        claim_indices(build_claim_network(b.corpus, claim), b.corpus.papers);
    // Duplicate the first paper's author set under a fresh id.
    b.paper("pdup", author_sets[0]);
    b.finding("x", "g", Direction::Increase, "pdup");
    const auto after =
        claim_indices(build_claim_network(b.corpus, claim), b.corpus.papers);
    REQUIRE(before.has_value());
    REQUIRE(after.has_value());
    CHECK(after->social_independence <= before->social_independence + 1e-12);
  }
}
