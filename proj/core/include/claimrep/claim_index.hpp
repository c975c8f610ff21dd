#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "claimrep/types.hpp"

namespace claimrep {

// Literature view of one claim. Findings are partitioned relative to the
// claim's majority direction; `supporting`/`opposing` hold indices into
// Corpus::findings. On an exact tie the majority is reported as Increase and
// `determined` is false; undetermined claims are excluded from replication
// scoring downstream.
struct ClaimLiterature {
  ClaimId claim;
  Direction majority = Direction::Increase;
  bool determined = true;
  std::vector<std::size_t> supporting;
  std::vector<std::size_t> opposing;
  std::set<std::string> papers;  // all papers reporting the claim

  std::size_t total() const { return supporting.size() + opposing.size(); }
};

std::map<ClaimId, ClaimLiterature> build_claim_index(const Corpus& corpus);

}  // namespace claimrep
