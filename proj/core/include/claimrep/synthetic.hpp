#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "claimrep/types.hpp"
#include "claimrep/vocabulary.hpp"

namespace claimrep {

// Findings-per-claim distribution: P(1)=p_one, P(2)=p_two, remaining mass on
// a geometric tail from 3 up. Defaults follow the long-tail shape where most
// claims are reported once or twice.
struct FindingsDistribution {
  double p_one = 0.89;
  double p_two = 0.08;
  double tail_decay = 0.55;
  std::size_t max_findings = 30;
};

// Seeded generator of a synthetic corpus with planted ground truth.
//
// Each claim gets a latent direction and a hub-reuse propensity x in [0,1]
// (high for the Centralized regime, low for Decentralized). With
// replication_link > 0, a higher x raises the chance the claim is unsound --
// published opposite to the latent experimental effect -- which is what makes
// centralization predict replication failure, and unsound claims attract more
// opposing findings, which is what ties literature support to replication.
struct GeneratorSpec {
  std::size_t n_claims = 12000;
  FindingsDistribution findings_per_claim;
  double centralized_fraction = 0.5;

  std::size_t author_pool = 20000;
  std::size_t method_pool = 400;
  std::size_t reference_pool = 50000;
  std::size_t journal_pool = 150;
  double missing_eigenfactor_rate = 0.05;  // journals without a score

  std::size_t team_size_min = 2, team_size_max = 6;
  std::size_t methods_min = 3, methods_max = 6;
  std::size_t references_min = 6, references_max = 15;
  std::size_t method_window = 8;      // centralized draws cluster in a window
  std::size_t reference_window = 25;

  std::size_t signatures_min = 2, signatures_max = 5;

  double effect_magnitude = 1.0;
  double noise_sd = 1.0;
  double base_unsound = 0.10;
  double link_slope = 1.0;        // unsound prob += link * slope * x
  double q_sound = 0.97;          // P(finding supports published direction)
  double q_unsound = 0.68;

  double replication_link = 0.8;  // 0 decouples community structure entirely
  std::uint64_t seed = 1;
};

struct ClaimTruth {
  ClaimId claim;
  Direction latent_direction = Direction::Increase;
  bool centralized = false;
  bool sound = true;
  double propensity = 0.0;             // hub-reuse propensity x
  double planted_independence = 1.0;   // 1 - x
  double expected_replication = 0.5;   // P(sign of combined z matches published)
  std::size_t n_findings = 0;
  std::size_t n_supporting_planted = 0;  // findings drawn in the published direction
  std::size_t n_signatures = 0;
};

struct GroundTruth {
  std::vector<ClaimTruth> claims;
};

// Deterministic given spec.seed (byte-identical corpus files, see
// write_corpus). Throws ConfigError on infeasible specs.
std::pair<Corpus, GroundTruth> generate_corpus(const GeneratorSpec& spec);

// The generator's companion vocabulary: every method term canonical, plus a
// "<term> protocol" synonym per term, so ingestion with --vocabulary has a
// populated synonym map to resolve against.
Vocabulary generator_vocabulary(const GeneratorSpec& spec);

void write_ground_truth_csv(const GroundTruth& truth,
                            const std::filesystem::path& path);
void write_vocabulary_tsv(const Vocabulary& vocab,
                          const std::filesystem::path& path);

// Brute-force recomputation of corpus statistics in straight-line code that
// shares nothing with the production modules; used for equivalence testing.
struct OracleStatistics {
  std::map<ClaimId, std::size_t> findings_per_claim;
  // Per claim, per supporting-paper pair (u < v): Jaccard weight by layer.
  std::map<ClaimId, std::map<std::pair<std::string, std::string>, double>>
      author_jaccard, method_jaccard, reference_jaccard;
  std::map<ClaimId, std::map<std::string, std::size_t>> author_degrees;
  std::map<ClaimId, double> gini;  // pairwise |xi-xj| formula, supporting side
  std::map<ClaimId, double> social_independence, method_independence,
      knowledge_independence;
  std::map<ClaimId, double> combined_z;
  std::map<ClaimId, bool> replication;  // vs the majority literature direction
};

OracleStatistics oracle_statistics(const Corpus& corpus,
                                   const GroundTruth& truth);

}  // namespace claimrep
