#include <fstream>
#include <cmath>
#include <sstream>

#include "claimrep/claim_index.hpp"
#include "claimrep/corpus_io.hpp"
#include "claimrep/networks.hpp"
#include "claimrep/synthetic.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace claimrep;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GeneratorSpec small_spec(std::uint64_t seed) {
  GeneratorSpec spec;
  spec.n_claims = 120;
  spec.author_pool = 2000;
  spec.reference_pool = 4000;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("generated corpora pass ingestion validation") {
  const auto [corpus, truth] = generate_corpus(small_spec(5));
  CHECK(truth.claims.size() == 120);
  const auto files = test_helpers::write_corpus_files(corpus, "synth");
  const Corpus again = ingest_corpus(files.findings, files.papers, files.signatures);
  CHECK(again == corpus);

  SUBCASE("findings-per-claim histogram equals generator bookkeeping") {
    const auto index = build_claim_index(corpus);
    REQUIRE(index.size() == truth.claims.size());
    for (const auto& ct : truth.claims) {
      CHECK(index.at(ct.claim).total() == ct.n_findings);
      CHECK(corpus.signatures.at(ct.claim).size() == ct.n_signatures);
    }
  }
}

TEST_CASE("smallest viable spec is ingestible") {
  GeneratorSpec spec;
  spec.n_claims = 1;
  spec.findings_per_claim.p_one = 0.0;
  spec.findings_per_claim.p_two = 1.0;  // exactly two papers
  spec.author_pool = 500;
  spec.seed = 3;
  const auto [corpus, truth] = generate_corpus(spec);
  CHECK(corpus.papers.size() == 2);
  const auto files = test_helpers::write_corpus_files(corpus, "synth-min");
  CHECK_NOTHROW(ingest_corpus(files.findings, files.papers, files.signatures));
}

TEST_CASE("determinism: identical spec and seed give byte-identical files") {
  const auto [corpus_a, truth_a] = generate_corpus(small_spec(11));
  const auto [corpus_b, truth_b] = generate_corpus(small_spec(11));
  const auto files_a = test_helpers::write_corpus_files(corpus_a, "det-a");
  const auto files_b = test_helpers::write_corpus_files(corpus_b, "det-b");
  CHECK(slurp(files_a.findings) == slurp(files_b.findings));
  CHECK(slurp(files_a.papers) == slurp(files_b.papers));
  CHECK(slurp(files_a.signatures) == slurp(files_b.signatures));

  const auto gt_a = files_a.dir / "gt.csv";
  const auto gt_b = files_b.dir / "gt.csv";
  write_ground_truth_csv(truth_a, gt_a);
  write_ground_truth_csv(truth_b, gt_b);
  CHECK(slurp(gt_a) == slurp(gt_b));

  const auto [corpus_c, truth_c] = generate_corpus(small_spec(12));
  const auto files_c = test_helpers::write_corpus_files(corpus_c, "det-c");
  CHECK(slurp(files_a.findings) != slurp(files_c.findings));
}

TEST_CASE("regime separation: centralized claims have strictly higher mean Gini") {
  GeneratorSpec spec = small_spec(21);
  spec.n_claims = 400;
  // Force multi-paper claims so the bipartite Gini is defined everywhere.
  spec.findings_per_claim.p_one = 0.0;
  spec.findings_per_claim.p_two = 0.55;
  const auto [corpus, truth] = generate_corpus(spec);

  double cent_sum = 0.0, dec_sum = 0.0;
  std::size_t cent_n = 0, dec_n = 0;
  for (const auto& ct : truth.claims) {
    const auto net = build_claim_network(corpus, ct.claim);
    if (net.supporting_nodes.size() < 2) continue;
    const auto idx = claim_indices(net, corpus.papers);
    if (!idx) continue;
    if (ct.centralized) {
      cent_sum += idx->centralization;
      ++cent_n;
    } else {
      dec_sum += idx->centralization;
      ++dec_n;
    }
  }
  REQUIRE(cent_n > 20);
  REQUIRE(dec_n > 20);
  CHECK(cent_sum / cent_n > dec_sum / dec_n);
}

TEST_CASE("oracle statistics agree with the production modules exactly") {
  GeneratorSpec spec = small_spec(31);
  spec.n_claims = 150;
  spec.findings_per_claim.p_one = 0.3;
  spec.findings_per_claim.p_two = 0.4;
  const auto [corpus, truth] = generate_corpus(spec);
  const OracleStatistics oracle = oracle_statistics(corpus, truth);
  const auto index = build_claim_index(corpus);

  for (const auto& [claim, lit] : index) {
    CHECK(oracle.findings_per_claim.at(claim) == lit.total());
    const auto net = build_claim_network(corpus, claim);
    const auto idx = claim_indices(net, corpus.papers);

    if (const auto it = oracle.author_jaccard.find(claim);
        it != oracle.author_jaccard.end()) {
      const auto& edges = net.overlap.at(OverlapLayer::Authors);
      REQUIRE(edges.size() == it->second.size());
      for (const auto& e : edges) {
        CHECK(e.jc == it->second.at({e.u, e.v}));  // bitwise equal
      }
    }
    if (idx) {
      CHECK(idx->social_independence ==
            doctest::Approx(oracle.social_independence.at(claim)).epsilon(1e-12));
      CHECK(idx->method_independence ==
            doctest::Approx(oracle.method_independence.at(claim)).epsilon(1e-12));
      CHECK(idx->knowledge_independence ==
            doctest::Approx(oracle.knowledge_independence.at(claim)).epsilon(1e-12));
      CHECK(idx->centralization ==
            doctest::Approx(oracle.gini.at(claim)).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero replication link decouples community structure from replication") {
  GeneratorSpec spec;
  spec.n_claims = 2000;
  spec.replication_link = 0.0;
  spec.seed = 77;
  const auto [corpus, truth] = generate_corpus(spec);
  const auto oracle = oracle_statistics(corpus, truth);

  // Pearson correlation between the planted hub propensity and the realized
  // replication indicator across all claims.
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& ct : truth.claims) {
    const auto it = oracle.replication.find(ct.claim);
    if (it == oracle.replication.end()) continue;
    const double x = ct.propensity;
    const double y = it->second ? 1.0 : 0.0;
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
    ++n;
  }
  REQUIRE(n == 2000);
  const double nd = static_cast<double>(n);
  const double r = (nd * sxy - sx * sy) /
                   std::sqrt((nd * sxx - sx * sx) * (nd * syy - sy * sy));
  CHECK(std::fabs(r) < 0.05);
}

TEST_CASE("infeasible specs are rejected") {
  GeneratorSpec spec;
  spec.author_pool = 10;  // cannot host disjoint teams
  CHECK_THROWS_AS(generate_corpus(spec), ConfigError);

  GeneratorSpec bad_window = small_spec(1);
  bad_window.method_window = bad_window.method_pool + 1;
  CHECK_THROWS_AS(generate_corpus(bad_window), ConfigError);

  GeneratorSpec bad_sigs = small_spec(1);
  bad_sigs.signatures_min = 0;
  CHECK_THROWS_AS(generate_corpus(bad_sigs), ConfigError);
}

TEST_CASE("generator vocabulary round-trips through the loader") {
  const GeneratorSpec spec = small_spec(41);
  const Vocabulary vocab = generator_vocabulary(spec);
  CHECK(vocab.canonical_terms.size() == spec.method_pool);
  CHECK(vocab.synonym_map.size() == spec.method_pool);
  const auto dir = test_helpers::make_temp_dir("vocab-rt");
  write_vocabulary_tsv(vocab, dir / "vocabulary.tsv");
  const Vocabulary loaded = load_vocabulary(dir / "vocabulary.tsv");
  CHECK(loaded.canonical_terms == vocab.canonical_terms);
  CHECK(loaded.synonym_map == vocab.synonym_map);
}
