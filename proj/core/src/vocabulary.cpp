#include "claimrep/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "claimrep/types.hpp"

namespace claimrep {

namespace {

std::vector<std::string> words_of(std::string_view normalized) {
  std::vector<std::string> words;
  std::istringstream ss{std::string(normalized)};
  std::string w;
  while (ss >> w) words.push_back(w);
  return words;
}

std::string join_words(const std::vector<std::string>& words, std::size_t begin,
                       std::size_t count) {
  std::string out;
  for (std::size_t i = begin; i < begin + count; ++i) {
    if (i > begin) out.push_back(' ');
    out += words[i];
  }
  return out;
}

}  // namespace

Vocabulary load_vocabulary(const std::filesystem::path& tsv_path) {
  std::ifstream in(tsv_path);
  if (!in) throw IngestError("cannot open " + tsv_path.string());
  Vocabulary vocab;
  std::string line;
  std::size_t line_no = 0;
  // First pass collects canonical terms so synonym targets can be checked.
  std::vector<std::pair<std::string, std::string>> synonym_rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    const std::string canonical = normalize_token(
        tab == std::string::npos ? line : line.substr(0, tab));
    if (canonical.empty()) {
      throw IngestError(tsv_path.string() + ":" + std::to_string(line_no) +
                        ": empty canonical term");
    }
    vocab.canonical_terms.insert(canonical);
    if (tab != std::string::npos) {
      const std::string synonym = normalize_token(line.substr(tab + 1));
      if (!synonym.empty()) synonym_rows.emplace_back(synonym, canonical);
    }
  }
  for (auto& [synonym, canonical] : synonym_rows) {
    vocab.synonym_map[synonym] = canonical;
  }
  return vocab;
}

double normalized_edit_similarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  const std::size_t na = a.size(), nb = b.size();
  // Two-row Levenshtein.
  std::vector<std::size_t> prev(nb + 1), cur(nb + 1);
  for (std::size_t j = 0; j <= nb; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= na; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= nb; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  const double dist = static_cast<double>(prev[nb]);
  return 1.0 - dist / static_cast<double>(std::max(na, nb));
}

std::set<std::string> match_vocabulary_terms(std::string_view text,
                                             const Vocabulary& vocab,
                                             double threshold) {
  if (!(threshold >= 0.0) || !(threshold <= 1.0)) {
    throw ConfigError("similarity threshold must lie in [0,1]");
  }
  std::set<std::string> matched;
  const std::string normalized = normalize_token(text);
  if (normalized.empty()) return matched;
  const std::vector<std::string> words = words_of(normalized);

  auto scan = [&](const std::string& term, const std::string& canonical) {
    const std::vector<std::string> term_words = words_of(term);
    const std::size_t tn = term_words.size();
    if (tn == 0 || tn > words.size()) return;
    const std::string joined_term = join_words(term_words, 0, tn);
    for (std::size_t i = 0; i + tn <= words.size(); ++i) {
      const std::string span = join_words(words, i, tn);
      if (span == joined_term ||
          normalized_edit_similarity(span, joined_term) >= threshold) {
        matched.insert(canonical);
        return;
      }
    }
  };

  for (const auto& canonical : vocab.canonical_terms) scan(canonical, canonical);
  for (const auto& [synonym, canonical] : vocab.synonym_map) scan(synonym, canonical);
  return matched;
}

std::string canonicalize_term(std::string_view term, const Vocabulary& vocab,
                              double threshold) {
  const std::string t = normalize_token(term);
  if (vocab.canonical_terms.count(t)) return t;
  if (auto it = vocab.synonym_map.find(t); it != vocab.synonym_map.end()) {
    return it->second;
  }
  std::string best;
  double best_sim = threshold;
  auto consider = [&](const std::string& candidate, const std::string& canonical) {
    const double sim = normalized_edit_similarity(t, candidate);
    if (sim > best_sim || (sim == best_sim && !canonical.empty() &&
                           (best.empty() || canonical < best))) {
      best_sim = sim;
      best = canonical;
    }
  };
  for (const auto& canonical : vocab.canonical_terms) consider(canonical, canonical);
  for (const auto& [synonym, canonical] : vocab.synonym_map) consider(synonym, canonical);
  return best.empty() ? t : best;
}

}  // namespace claimrep
