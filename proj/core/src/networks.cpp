#include "claimrep/networks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "claimrep/claim_index.hpp"

namespace claimrep {

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& x : small) {
    if (large.count(x)) ++inter;
  }
  return static_cast<double>(inter) /
         static_cast<double>(a.size() + b.size() - inter);
}

std::string_view to_string(OverlapLayer layer) {
  switch (layer) {
    case OverlapLayer::Authors: return "authors";
    case OverlapLayer::Methods: return "methods";
    case OverlapLayer::References: return "references";
  }
  return "authors";
}

namespace {

std::size_t intersection_size(const std::set<std::string>& a,
                              const std::set<std::string>& b) {
  std::size_t inter = 0;
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& x : small) {
    if (large.count(x)) ++inter;
  }
  return inter;
}

const std::set<std::string>& layer_attributes(const PaperRecord& paper,
                                              OverlapLayer layer) {
  switch (layer) {
    case OverlapLayer::Authors: return paper.authors;
    case OverlapLayer::Methods: return paper.methods;
    case OverlapLayer::References: return paper.references;
  }
  return paper.authors;
}

}  // namespace

std::map<ClaimId, std::vector<const FindingRecord*>> group_findings_by_claim(
    const Corpus& corpus) {
  std::map<ClaimId, std::vector<const FindingRecord*>> grouped;
  for (const auto& f : corpus.findings) grouped[f.claim].push_back(&f);
  return grouped;
}

ClaimNetwork build_claim_network(const Corpus& corpus, const ClaimId& claim) {
  std::vector<const FindingRecord*> claim_findings;
  for (const auto& f : corpus.findings) {
    if (f.claim == claim) claim_findings.push_back(&f);
  }
  return build_claim_network(corpus, claim, claim_findings);
}

ClaimNetwork build_claim_network(
    const Corpus& corpus, const ClaimId& claim,
    const std::vector<const FindingRecord*>& claim_findings) {
  // Per-paper direction counts for this claim.
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (const auto* f : claim_findings) {
    auto& c = counts[f->paper_id];
    (f->direction == Direction::Increase ? c.first : c.second)++;
  }
  if (counts.empty()) {
    throw IngestError("no findings for claim " + to_string(claim));
  }
  std::size_t inc = 0, dec = 0;
  for (const auto& [paper, c] : counts) {
    inc += c.first;
    dec += c.second;
  }
  const Direction majority = inc >= dec ? Direction::Increase : Direction::Decrease;

  ClaimNetwork net;
  net.claim = claim;
  std::map<std::string, Direction> paper_direction;
  for (const auto& [paper, c] : counts) {
    net.nodes.push_back(paper);
    const Direction d =
        c.first >= c.second ? Direction::Increase : Direction::Decrease;
    paper_direction.emplace(paper, d);
    if (d == majority) net.supporting_nodes.push_back(paper);
  }

  // Agreement layer: every pair of reporting papers.
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < net.nodes.size(); ++j) {
      AgreementEdge e;
      e.u = net.nodes[i];
      e.v = net.nodes[j];
      e.agrees = paper_direction.at(e.u) == paper_direction.at(e.v);
      net.agreement.push_back(std::move(e));
    }
  }

  // Weighted overlap layers over supporting papers only.
  for (OverlapLayer layer : {OverlapLayer::Authors, OverlapLayer::Methods,
                             OverlapLayer::References}) {
    auto& edges = net.overlap[layer];
    for (std::size_t i = 0; i < net.supporting_nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < net.supporting_nodes.size(); ++j) {
        const auto& pa = corpus.papers.at(net.supporting_nodes[i]);
        const auto& pb = corpus.papers.at(net.supporting_nodes[j]);
        OverlapEdge e;
        e.u = net.supporting_nodes[i];
        e.v = net.supporting_nodes[j];
        const auto& sa = layer_attributes(pa, layer);
        const auto& sb = layer_attributes(pb, layer);
        e.shared = intersection_size(sa, sb);
        e.jc = jaccard(sa, sb);
        edges.push_back(std::move(e));
      }
    }
  }

  for (const auto& paper_id : net.supporting_nodes) {
    for (const auto& author : corpus.papers.at(paper_id).authors) {
      net.author_papers[author].insert(paper_id);
    }
  }
  return net;
}

double independence_score(const std::vector<double>& edge_weights,
                          std::size_t n_nodes) {
  if (n_nodes < 2) {
    throw std::invalid_argument("independence score undefined for < 2 papers");
  }
  const double max_edges =
      static_cast<double>(n_nodes) * static_cast<double>(n_nodes - 1) / 2.0;
  double w = 0.0;
  for (double jc : edge_weights) w += jc;
  return std::clamp(1.0 - w / max_edges, 0.0, 1.0);
}

double gini_centralization(const std::vector<double>& author_degrees) {
  if (author_degrees.empty()) {
    throw std::invalid_argument("gini of empty degree list");
  }
  double total = 0.0;
  for (double x : author_degrees) {
    if (x < 0.0) throw std::invalid_argument("degrees must be non-negative");
    total += x;
  }
  if (total == 0.0) throw std::invalid_argument("gini of all-zero degrees");
  const std::size_t n = author_degrees.size();
  // Sorted form of sum_ij |xi - xj| / (2 n^2 mean), O(n log n).
  std::vector<double> sorted = author_degrees;
  std::sort(sorted.begin(), sorted.end());
  double weighted = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weighted += (2.0 * static_cast<double>(i) - static_cast<double>(n) + 1.0) *
                sorted[i];
  }
  return weighted / (static_cast<double>(n) * total);
}

std::vector<LorenzPoint> lorenz_curve(const std::vector<double>& author_degrees) {
  if (author_degrees.empty()) {
    throw std::invalid_argument("lorenz curve of empty degree list");
  }
  std::vector<double> sorted = author_degrees;
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (double x : sorted) total += x;
  if (total == 0.0) throw std::invalid_argument("lorenz curve of all-zero degrees");
  std::vector<LorenzPoint> points;
  points.reserve(sorted.size() + 1);
  points.push_back({0.0, 0.0});
  double cum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cum += sorted[i];
    points.push_back({static_cast<double>(i + 1) / static_cast<double>(sorted.size()),
                      cum / total});
  }
  return points;
}

std::optional<ClaimIndices> claim_indices(
    const ClaimNetwork& network, const std::map<std::string, PaperRecord>& papers) {
  if (network.supporting_nodes.size() < 2) return std::nullopt;

  ClaimIndices idx;
  auto layer_score = [&](OverlapLayer layer) {
    std::vector<double> weights;
    const auto it = network.overlap.find(layer);
    if (it != network.overlap.end()) {
      weights.reserve(it->second.size());
      for (const auto& e : it->second) weights.push_back(e.jc);
    }
    return independence_score(weights, network.supporting_nodes.size());
  };
  idx.social_independence = layer_score(OverlapLayer::Authors);
  idx.method_independence = layer_score(OverlapLayer::Methods);
  idx.knowledge_independence = layer_score(OverlapLayer::References);

  std::vector<double> degrees;
  degrees.reserve(network.author_papers.size());
  for (const auto& [author, paper_set] : network.author_papers) {
    degrees.push_back(static_cast<double>(paper_set.size()));
  }
  idx.centralization = gini_centralization(degrees);

  std::set<std::string> community;
  for (const auto& paper_id : network.nodes) {
    const auto& p = papers.at(paper_id);
    community.insert(p.authors.begin(), p.authors.end());
  }
  idx.community_size = community.size();

  double ef_sum = 0.0;
  std::size_t ef_count = 0;
  for (const auto& paper_id : network.supporting_nodes) {
    const auto& p = papers.at(paper_id);
    if (p.eigenfactor) {
      ef_sum += *p.eigenfactor;
      ++ef_count;
    }
  }
  if (ef_count > 0) {
    idx.journal_prominence = ef_sum / static_cast<double>(ef_count);
  }
  return idx;
}

}  // namespace claimrep
