#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "claimrep/types.hpp"

namespace claimrep {

// |a n b| / |a u b|; both empty -> 0 by convention.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

enum class OverlapLayer { Authors, Methods, References };

std::string_view to_string(OverlapLayer layer);

struct AgreementEdge {
  std::string u, v;  // paper ids, u < v
  bool agrees = true;
};

struct OverlapEdge {
  std::string u, v;          // paper ids, u < v
  double jc = 0.0;           // Jaccard weight
  std::size_t shared = 0;    // raw intersection size
};

// Multilayer view of one claim. The agreement layer covers every pair of
// reporting papers; the weighted overlap layers (authors, methods,
// references) are built over the supporting papers only, as are the
// bipartite author degrees used for centralization.
struct ClaimNetwork {
  ClaimId claim;
  std::vector<std::string> nodes;             // all reporting papers, sorted
  std::vector<std::string> supporting_nodes;  // papers in the majority direction
  std::vector<AgreementEdge> agreement;
  std::map<OverlapLayer, std::vector<OverlapEdge>> overlap;
  std::map<std::string, std::set<std::string>> author_papers;  // supporting side
};

// Throws IngestError for an unknown claim. A paper's direction on the claim
// is the majority of its own findings (tie -> Increase, same convention as
// claims).
ClaimNetwork build_claim_network(const Corpus& corpus, const ClaimId& claim);

// Batch form: groups the findings once instead of scanning the corpus per
// claim; what the pipeline uses.
std::map<ClaimId, std::vector<const FindingRecord*>> group_findings_by_claim(
    const Corpus& corpus);
ClaimNetwork build_claim_network(
    const Corpus& corpus, const ClaimId& claim,
    const std::vector<const FindingRecord*>& claim_findings);

// IND = 1 - W / (n(n-1)/2), clamped to [0,1]; W is the summed Jaccard weight
// over present edges. Throws for n_nodes < 2 (single-paper claims carry no
// independence score).
double independence_score(const std::vector<double>& edge_weights,
                          std::size_t n_nodes);

// Gini of the degree list via the mean-absolute-difference form
// sum_ij |x_i - x_j| / (2 n^2 mean). Throws on empty or all-zero input.
double gini_centralization(const std::vector<double>& author_degrees);

struct LorenzPoint {
  double population_share = 0.0;
  double degree_share = 0.0;
};

// Ascending cumulative shares from (0,0) to (1,1).
std::vector<LorenzPoint> lorenz_curve(const std::vector<double>& author_degrees);

struct ClaimIndices {
  double social_independence = 1.0;
  double method_independence = 1.0;
  double knowledge_independence = 1.0;
  double centralization = 0.0;
  std::size_t community_size = 0;  // distinct authors over all reporting papers
  std::optional<double> journal_prominence;  // mean eigenfactor, supporting papers
};

// nullopt when the claim has fewer than 2 supporting papers (excluded from
// network-based analyses, matching the treatment of single-paper claims).
// journal_prominence averages over supporting papers with a known
// eigenfactor and is absent only when none has one.
std::optional<ClaimIndices> claim_indices(
    const ClaimNetwork& network, const std::map<std::string, PaperRecord>& papers);

}  // namespace claimrep
