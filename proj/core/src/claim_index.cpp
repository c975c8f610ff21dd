#include "claimrep/claim_index.hpp"

namespace claimrep {

std::map<ClaimId, ClaimLiterature> build_claim_index(const Corpus& corpus) {
  std::map<ClaimId, ClaimLiterature> index;
  std::map<ClaimId, std::pair<std::size_t, std::size_t>> counts;  // (inc, dec)
  for (const auto& f : corpus.findings) {
    auto& c = counts[f.claim];
    (f.direction == Direction::Increase ? c.first : c.second)++;
  }
  for (const auto& [claim, c] : counts) {
    ClaimLiterature lit;
    lit.claim = claim;
    if (c.first == c.second) {
      lit.majority = Direction::Increase;  // reference direction on ties
      lit.determined = false;
    } else {
      lit.majority = c.first > c.second ? Direction::Increase : Direction::Decrease;
      lit.determined = true;
    }
    index.emplace(claim, std::move(lit));
  }
  for (std::size_t i = 0; i < corpus.findings.size(); ++i) {
    const auto& f = corpus.findings[i];
    auto& lit = index.at(f.claim);
    (f.direction == lit.majority ? lit.supporting : lit.opposing).push_back(i);
    lit.papers.insert(f.paper_id);
  }
  return index;
}

}  // namespace claimrep
