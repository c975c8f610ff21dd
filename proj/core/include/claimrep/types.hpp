#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace claimrep {

// Input data failed validation (file, line and column in the message where
// available). The CLI maps this to exit code 2.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure (non-convergence, rank deficiency, empty designs).
// CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration. CLI exit code 4.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Trim, case-fold and collapse internal whitespace. Every string key in the
// corpus (drug, gene, author, method, reference, paper id) passes through
// here, so equality is exact token equality after normalization.
std::string normalize_token(std::string_view raw);

enum class Direction { Increase, Decrease };

std::string_view to_string(Direction d);  // "increases" / "decreases"
std::optional<Direction> parse_direction(std::string_view token);

inline Direction flip(Direction d) {
  return d == Direction::Increase ? Direction::Decrease : Direction::Increase;
}

struct ClaimId {
  std::string drug;
  std::string gene;
  auto operator<=>(const ClaimId&) const = default;
};

// Normalizes both tokens; throws IngestError on empty drug or gene.
ClaimId make_claim_id(std::string_view drug, std::string_view gene);

// Human-readable label, used in messages and export file names.
std::string to_string(const ClaimId& id);

struct FindingRecord {
  std::string finding_id;
  ClaimId claim;
  Direction direction = Direction::Increase;
  std::string paper_id;
  bool operator==(const FindingRecord&) const = default;
};

struct PaperRecord {
  std::string paper_id;
  std::set<std::string> authors;
  std::set<std::string> methods;
  std::set<std::string> references;
  std::string journal_id;
  std::optional<double> eigenfactor;
  std::optional<int> year;
  bool operator==(const PaperRecord&) const = default;
};

struct SignatureRecord {
  ClaimId claim;
  std::string cell_line;
  std::string dose;
  std::string duration;
  double z = 0.0;
  bool operator==(const SignatureRecord&) const = default;
};

// Validated, immutable after ingestion. Findings are sorted by finding_id and
// per-claim signatures by condition key, so the in-memory corpus does not
// depend on input row order.
struct Corpus {
  std::vector<FindingRecord> findings;
  std::map<std::string, PaperRecord> papers;
  std::map<ClaimId, std::vector<SignatureRecord>> signatures;
  bool operator==(const Corpus&) const = default;
};

}  // namespace claimrep
