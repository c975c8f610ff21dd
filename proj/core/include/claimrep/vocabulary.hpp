#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace claimrep {

// Controlled vocabulary of method terms. Canonical terms and synonyms are
// stored normalized; every synonym maps to an existing canonical term.
struct Vocabulary {
  std::set<std::string> canonical_terms;
  std::map<std::string, std::string> synonym_map;  // synonym -> canonical

  bool empty() const { return canonical_terms.empty(); }
};

// Format: `canonical<TAB>synonym` per line; canonical-only lines allowed.
// Lines starting with '#' are comments.
Vocabulary load_vocabulary(const std::filesystem::path& tsv_path);

// Normalized Levenshtein similarity: 1 - distance / max(len). This is the
// similarity oracle used for fuzzy vocabulary matching; both-empty -> 1.
double normalized_edit_similarity(std::string_view a, std::string_view b);

// Canonical terms whose canonical form or any synonym matches a span of
// `text` (word n-grams of the same length as the term) at similarity
// >= threshold. Exact case-insensitive matches are always included.
std::set<std::string> match_vocabulary_terms(std::string_view text,
                                             const Vocabulary& vocab,
                                             double threshold = 0.9);

// Map one already-extracted term through the vocabulary: exact or synonym
// hit first, then best fuzzy hit >= threshold; returns the input
// (normalized) when nothing matches.
std::string canonicalize_term(std::string_view term, const Vocabulary& vocab,
                              double threshold = 0.9);

}  // namespace claimrep
