#include "claimrep/types.hpp"

#include <cctype>

namespace claimrep {

std::string normalize_token(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char ch : raw) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string_view to_string(Direction d) {
  return d == Direction::Increase ? "increases" : "decreases";
}

std::optional<Direction> parse_direction(std::string_view token) {
  const std::string t = normalize_token(token);
  if (t == "increases") return Direction::Increase;
  if (t == "decreases") return Direction::Decrease;
  return std::nullopt;
}

ClaimId make_claim_id(std::string_view drug, std::string_view gene) {
  ClaimId id{normalize_token(drug), normalize_token(gene)};
  if (id.drug.empty() || id.gene.empty()) {
    throw IngestError("claim requires non-empty drug and gene tokens");
  }
  return id;
}

std::string to_string(const ClaimId& id) { return id.drug + ":" + id.gene; }

}  // namespace claimrep
