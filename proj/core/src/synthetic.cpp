#include "claimrep/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "claimrep/csv.hpp"
#include "claimrep/rng.hpp"
#include "claimrep/stats.hpp"

namespace claimrep {

namespace {

std::string padded(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, i);
  return buf;
}

void validate(const GeneratorSpec& spec) {
  auto fail = [](const std::string& what) { throw ConfigError("generator spec: " + what); };
  if (spec.n_claims == 0) fail("n_claims must be positive");
  const auto& fd = spec.findings_per_claim;
  if (fd.p_one < 0 || fd.p_two < 0 || fd.p_one + fd.p_two > 1.0) {
    fail("findings distribution probabilities must be non-negative and sum <= 1");
  }
  if (!(fd.tail_decay > 0.0) || !(fd.tail_decay < 1.0)) fail("tail_decay must lie in (0,1)");
  if (fd.max_findings < 3) fail("max_findings must be >= 3");
  if (spec.centralized_fraction < 0 || spec.centralized_fraction > 1) {
    fail("centralized_fraction must lie in [0,1]");
  }
  if (spec.team_size_min == 0 || spec.team_size_max < spec.team_size_min) {
    fail("bad team size range");
  }
  if (spec.methods_min == 0 || spec.methods_max < spec.methods_min) fail("bad methods range");
  if (spec.references_min == 0 || spec.references_max < spec.references_min) {
    fail("bad references range");
  }
  if (spec.signatures_min == 0 || spec.signatures_max < spec.signatures_min) {
    fail("bad signatures range");
  }
  if (spec.signatures_max > 7 * 4 * 3) fail("signature count exceeds condition grid");
  if (spec.method_window > spec.method_pool) fail("method window exceeds pool");
  if (spec.reference_window > spec.reference_pool) fail("reference window exceeds pool");
  if (spec.author_pool < fd.max_findings * spec.team_size_max * 2 + 2) {
    fail("author pool too small for disjoint teams");
  }
  if (spec.journal_pool == 0) fail("journal pool must be positive");
  if (!(spec.effect_magnitude > 0.0) || !(spec.noise_sd > 0.0)) {
    fail("effect magnitude and noise sd must be positive");
  }
  for (double p : {spec.missing_eigenfactor_rate, spec.base_unsound, spec.q_sound,
                   spec.q_unsound, spec.replication_link}) {
    if (p < 0.0 || p > 1.0) fail("probabilities must lie in [0,1]");
  }
}

std::size_t sample_findings_count(const FindingsDistribution& fd, Rng& rng) {
  const double u = rng.uniform();
  if (u < fd.p_one) return 1;
  if (u < fd.p_one + fd.p_two) return 2;
  // Geometric tail from 3 up, truncated at max_findings.
  std::size_t k = 3;
  while (k < fd.max_findings && rng.uniform() < fd.tail_decay) ++k;
  return k;
}

}  // namespace

Vocabulary generator_vocabulary(const GeneratorSpec& spec) {
  Vocabulary vocab;
  for (std::size_t m = 0; m < spec.method_pool; ++m) {
    const std::string term = padded("assay ", m, 3);
    vocab.canonical_terms.insert(term);
    vocab.synonym_map[term + " protocol"] = term;
  }
  return vocab;
}

std::pair<Corpus, GroundTruth> generate_corpus(const GeneratorSpec& spec) {
  validate(spec);
  Rng rng(derive_seed(spec.seed, "synthetic-corpus"));

  static const std::vector<std::string> kCells = {"a375", "mcf7", "pc3",    "ht29",
                                                  "vcap", "a549", "hepg2"};
  static const std::vector<std::string> kDoses = {"10um", "1um", "100nm", "10nm"};
  static const std::vector<std::string> kDurations = {"6h", "24h", "48h"};
  const std::size_t n_conditions = kCells.size() * kDoses.size() * kDurations.size();

  // Journal table: eigenfactor per journal, a few journals unscored.
  std::vector<std::optional<double>> journal_scores(spec.journal_pool);
  for (auto& score : journal_scores) {
    const bool missing = rng.bernoulli(spec.missing_eigenfactor_rate);
    const double value = 0.002 * std::exp(0.9 * rng.normal());
    if (!missing) score = value;
  }

  Corpus corpus;
  GroundTruth truth;
  truth.claims.reserve(spec.n_claims);
  const std::size_t drugs = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(spec.n_claims))));
  std::size_t paper_counter = 0, finding_counter = 0;

  std::vector<std::size_t> condition_indices(n_conditions);
  for (std::size_t i = 0; i < n_conditions; ++i) condition_indices[i] = i;

  for (std::size_t c = 0; c < spec.n_claims; ++c) {
    const ClaimId claim = make_claim_id(padded("d", c % drugs, 4),
                                        padded("g", c / drugs, 4));

    const bool centralized = rng.bernoulli(spec.centralized_fraction);
    // Hub-reuse propensity: high for centralized communities, low otherwise.
    const double x = centralized ? 0.6 + 0.4 * rng.uniform() : 0.25 * rng.uniform();
    const double p_unsound = std::clamp(
        spec.base_unsound + spec.replication_link * spec.link_slope * x, 0.0, 0.95);
    const bool sound = !rng.bernoulli(p_unsound);

    const Direction published = rng.bernoulli(0.5) ? Direction::Increase
                                                   : Direction::Decrease;
    const Direction latent = sound ? published : flip(published);
    const double magnitude = spec.effect_magnitude * std::exp(0.25 * rng.normal());
    const double sigma =
        spec.noise_sd * (!sound && centralized ? 1.0 + spec.replication_link : 1.0);
    const double q = sound ? spec.q_sound : spec.q_unsound;

    const std::size_t n_findings = sample_findings_count(spec.findings_per_claim, rng);

    // Community structure: a centralized claim reuses its hub author on every
    // paper (plus a second hub with probability x); a decentralized claim
    // draws disjoint teams, occasionally reusing one author w.p. x.
    std::vector<std::string> hubs;
    if (centralized) {
      hubs.push_back(padded("a", rng.index(spec.author_pool), 6));
      if (rng.bernoulli(x)) {
        std::string second;
        do {
          second = padded("a", rng.index(spec.author_pool), 6);
        } while (second == hubs[0]);
        hubs.push_back(second);
      }
    }
    const std::size_t method_offset = rng.index(spec.method_pool - spec.method_window + 1);
    const std::size_t reference_offset =
        rng.index(spec.reference_pool - spec.reference_window + 1);
    // Method/reference clustering gets its own regime-linked draw, so the
    // overlap layers correlate with the regime without tracking the author
    // structure one-for-one.
    const double window_propensity =
        centralized ? 0.45 + 0.55 * rng.uniform() : 0.35 * rng.uniform();
    const double p_window = 0.1 + 0.8 * window_propensity;

    std::set<std::string> used_authors(hubs.begin(), hubs.end());
    std::string previous_author;  // decentralized occasional reuse
    std::size_t supporting_planted = 0;

    for (std::size_t f = 0; f < n_findings; ++f) {
      PaperRecord paper;
      paper.paper_id = padded("p", paper_counter++, 6);

      const std::size_t team =
          spec.team_size_min + rng.index(spec.team_size_max - spec.team_size_min + 1);
      if (centralized) {
        paper.authors.insert(hubs[0]);
        if (hubs.size() > 1 && rng.bernoulli(x)) paper.authors.insert(hubs[1]);
      } else if (!previous_author.empty() && rng.bernoulli(x)) {
        paper.authors.insert(previous_author);
      }
      while (paper.authors.size() < team) {
        const std::string a = padded("a", rng.index(spec.author_pool), 6);
        if (centralized || !used_authors.count(a)) {
          paper.authors.insert(a);
          used_authors.insert(a);
        }
      }
      if (!centralized) previous_author = *paper.authors.begin();

      const std::size_t n_methods =
          spec.methods_min + rng.index(spec.methods_max - spec.methods_min + 1);
      while (paper.methods.size() < n_methods) {
        const std::size_t m = rng.bernoulli(p_window)
                                  ? method_offset + rng.index(spec.method_window)
                                  : rng.index(spec.method_pool);
        paper.methods.insert(padded("assay ", m, 3));
      }
      const std::size_t n_refs = spec.references_min +
                                 rng.index(spec.references_max - spec.references_min + 1);
      while (paper.references.size() < n_refs) {
        const std::size_t r = rng.bernoulli(p_window)
                                  ? reference_offset + rng.index(spec.reference_window)
                                  : rng.index(spec.reference_pool);
        paper.references.insert(padded("ref ", r, 5));
      }

      const std::size_t journal = rng.index(spec.journal_pool);
      paper.journal_id = padded("journal ", journal, 3);
      paper.eigenfactor = journal_scores[journal];
      paper.year = 1995 + static_cast<int>(rng.index(22));

      FindingRecord finding;
      finding.finding_id = padded("f", finding_counter++, 6);
      finding.claim = claim;
      finding.direction = rng.bernoulli(q) ? published : flip(published);
      if (finding.direction == published) ++supporting_planted;
      finding.paper_id = paper.paper_id;

      corpus.papers.emplace(paper.paper_id, std::move(paper));
      corpus.findings.push_back(std::move(finding));
    }

    // Experimental signatures under k distinct (cell, dose, duration) keys.
    const std::size_t k = spec.signatures_min +
                          rng.index(spec.signatures_max - spec.signatures_min + 1);
    for (std::size_t i = 0; i < k; ++i) {
      // Partial Fisher-Yates over the condition grid.
      const std::size_t j = i + rng.index(n_conditions - i);
      std::swap(condition_indices[i], condition_indices[j]);
    }
    const double effect =
        (latent == Direction::Increase ? magnitude : -magnitude);
    auto& sigs = corpus.signatures[claim];
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t combo = condition_indices[i];
      SignatureRecord sig;
      sig.claim = claim;
      sig.cell_line = kCells[combo / (kDoses.size() * kDurations.size())];
      sig.dose = kDoses[(combo / kDurations.size()) % kDoses.size()];
      sig.duration = kDurations[combo % kDurations.size()];
      sig.z = effect + sigma * rng.normal();
      sigs.push_back(std::move(sig));
    }

    ClaimTruth ct;
    ct.claim = claim;
    ct.latent_direction = latent;
    ct.centralized = centralized;
    ct.sound = sound;
    ct.propensity = x;
    ct.planted_independence = 1.0 - x;
    const double shift = std::sqrt(static_cast<double>(k)) *
                         (sound ? magnitude : -magnitude) / sigma;
    ct.expected_replication = normal_cdf(shift);
    ct.n_findings = n_findings;
    ct.n_supporting_planted = supporting_planted;
    ct.n_signatures = k;
    truth.claims.push_back(std::move(ct));
  }

  // Canonical ordering, matching what ingestion produces.
  std::sort(corpus.findings.begin(), corpus.findings.end(),
            [](const FindingRecord& a, const FindingRecord& b) {
              return a.finding_id < b.finding_id;
            });
  for (auto& [claim, sigs] : corpus.signatures) {
    std::sort(sigs.begin(), sigs.end(),
              [](const SignatureRecord& a, const SignatureRecord& b) {
                return std::tie(a.cell_line, a.dose, a.duration, a.z) <
                       std::tie(b.cell_line, b.dose, b.duration, b.z);
              });
  }
  return {std::move(corpus), std::move(truth)};
}

void write_ground_truth_csv(const GroundTruth& truth,
                            const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path.string());
  out << "drug,gene,latent_direction,regime,sound,propensity,"
         "planted_independence,expected_replication,n_findings,"
         "n_supporting_planted,n_signatures\n";
  for (const auto& ct : truth.claims) {
    out << csv_escape(ct.claim.drug) << ',' << csv_escape(ct.claim.gene) << ','
        << to_string(ct.latent_direction) << ','
        << (ct.centralized ? "centralized" : "decentralized") << ','
        << (ct.sound ? "true" : "false") << ',' << format_double(ct.propensity)
        << ',' << format_double(ct.planted_independence) << ','
        << format_double(ct.expected_replication) << ',' << ct.n_findings << ','
        << ct.n_supporting_planted << ',' << ct.n_signatures << '\n';
  }
}

void write_vocabulary_tsv(const Vocabulary& vocab,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path.string());
  for (const auto& term : vocab.canonical_terms) out << term << '\n';
  for (const auto& [synonym, canonical] : vocab.synonym_map) {
    out << canonical << '\t' << synonym << '\n';
  }
}

// ---------------------------------------------------------------------------
// Brute-force oracle. Everything below recomputes statistics with plain loops
// and shares no code with the production modules it checks.

namespace {

double oracle_jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t inter = 0;
  for (const auto& x : a) {
    inter += b.count(x);
  }
  const std::size_t uni = a.size() + b.size() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double oracle_gini(const std::vector<double>& xs) {
  double abs_diff = 0.0, total = 0.0;
  for (double a : xs) {
    total += a;
    for (double b : xs) abs_diff += std::fabs(a - b);
  }
  const double n = static_cast<double>(xs.size());
  const double mean_x = total / n;
  return abs_diff / (2.0 * n * n * mean_x);
}

}  // namespace

OracleStatistics oracle_statistics(const Corpus& corpus, const GroundTruth&) {
  OracleStatistics stats;

  // Group findings by claim, then by paper.
  std::map<ClaimId, std::vector<const FindingRecord*>> by_claim;
  for (const auto& f : corpus.findings) by_claim[f.claim].push_back(&f);

  for (const auto& [claim, findings] : by_claim) {
    stats.findings_per_claim[claim] = findings.size();

    std::size_t inc = 0, dec = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_paper;
    for (const auto* f : findings) {
      if (f->direction == Direction::Increase) {
        ++inc;
        ++per_paper[f->paper_id].first;
      } else {
        ++dec;
        ++per_paper[f->paper_id].second;
      }
    }
    const Direction majority =
        inc >= dec ? Direction::Increase : Direction::Decrease;

    std::vector<std::string> supporting;
    for (const auto& [paper_id, cnt] : per_paper) {
      const Direction d =
          cnt.first >= cnt.second ? Direction::Increase : Direction::Decrease;
      if (d == majority) supporting.push_back(paper_id);
    }
    std::sort(supporting.begin(), supporting.end());

    std::map<std::string, std::size_t> degrees;
    for (const auto& paper_id : supporting) {
      for (const auto& author : corpus.papers.at(paper_id).authors) {
        degrees[author] += 1;
      }
    }
    stats.author_degrees[claim] = degrees;
    if (!degrees.empty()) {
      std::vector<double> ds;
      for (const auto& [author, d] : degrees) ds.push_back(static_cast<double>(d));
      stats.gini[claim] = oracle_gini(ds);
    }

    if (supporting.size() >= 2) {
      double w_auth = 0.0, w_meth = 0.0, w_ref = 0.0;
      for (std::size_t i = 0; i < supporting.size(); ++i) {
        for (std::size_t j = i + 1; j < supporting.size(); ++j) {
          const auto& pa = corpus.papers.at(supporting[i]);
          const auto& pb = corpus.papers.at(supporting[j]);
          const auto key = std::make_pair(supporting[i], supporting[j]);
          const double ja = oracle_jaccard(pa.authors, pb.authors);
          const double jm = oracle_jaccard(pa.methods, pb.methods);
          const double jr = oracle_jaccard(pa.references, pb.references);
          stats.author_jaccard[claim][key] = ja;
          stats.method_jaccard[claim][key] = jm;
          stats.reference_jaccard[claim][key] = jr;
          w_auth += ja;
          w_meth += jm;
          w_ref += jr;
        }
      }
      const double pairs = static_cast<double>(supporting.size()) *
                           static_cast<double>(supporting.size() - 1) / 2.0;
      stats.social_independence[claim] = 1.0 - w_auth / pairs;
      stats.method_independence[claim] = 1.0 - w_meth / pairs;
      stats.knowledge_independence[claim] = 1.0 - w_ref / pairs;
    }

    const auto sig_it = corpus.signatures.find(claim);
    if (sig_it != corpus.signatures.end() && !sig_it->second.empty()) {
      double sum = 0.0;
      for (const auto& s : sig_it->second) sum += s.z;
      const double z =
          sum / std::sqrt(static_cast<double>(sig_it->second.size()));
      stats.combined_z[claim] = z;
      stats.replication[claim] =
          (majority == Direction::Increase && z > 0.0) ||
          (majority == Direction::Decrease && z < 0.0);
    }
  }
  return stats;
}

}  // namespace claimrep
