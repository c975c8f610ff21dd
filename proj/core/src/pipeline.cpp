#include "claimrep/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "claimrep/claim_index.hpp"
#include "claimrep/corpus_io.hpp"
#include "claimrep/csv.hpp"
#include "claimrep/effects.hpp"
#include "claimrep/hash.hpp"
#include "claimrep/networks.hpp"
#include "claimrep/parallel.hpp"
#include "claimrep/replication.hpp"
#include "claimrep/rng.hpp"
#include "claimrep/support.hpp"
#include "json.hpp"

namespace claimrep {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void validate_config(const PipelineConfig& cfg) {
  if (cfg.bootstrap_iters == 0 || cfg.null_iters == 0) {
    throw ConfigError("iteration counts must be positive");
  }
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0,1)");
  }
  if (cfg.output_dir.empty()) throw ConfigError("output_dir is required");
  if (cfg.pci_levels.empty()) throw ConfigError("at least one PCI level required");
  for (int level : cfg.pci_levels) {
    if (level <= 0 || level >= 100) {
      throw ConfigError("PCI levels must lie strictly between 0 and 100");
    }
  }
  if (cfg.grid_resolution < 2) throw ConfigError("grid resolution must be >= 2");
  if (cfg.vocab_threshold < 0.0 || cfg.vocab_threshold > 1.0) {
    throw ConfigError("vocabulary threshold must lie in [0,1]");
  }
}

std::string sanitize_filename(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') {
      out.push_back(c);
    } else {
      out.push_back('_');
    }
  }
  return out;
}

std::string trimmed_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", fraction * 100.0);
  std::string s = buf;
  if (s.size() > 2 && s.ends_with(".0")) s.resize(s.size() - 2);
  return s + "%";
}

struct LedgerEntry {
  std::string stage;
  std::size_t input = 0;
  std::size_t dropped = 0;
  std::size_t output = 0;
};

// Everything downstream stages need about one claim, in claim order.
struct ClaimSummary {
  ClaimId claim;
  const ClaimLiterature* literature = nullptr;
  const CombinedEffect* effect = nullptr;  // null for no-experiment claims
  SupportPosterior posterior;
  bool replicated = false;
};

json coefficient_json(const Coefficient& c) {
  json j;
  j["name"] = c.name;
  j["b"] = c.b;
  j["se"] = c.se;
  j["or"] = c.odds_ratio;
  j["ci_low"] = c.ci_low;
  j["ci_high"] = c.ci_high;
  j["p"] = c.p;
  j["stars"] = c.p < 0.001 ? "***" : (c.p < 0.01 ? "**" : (c.p < 0.05 ? "*" : ""));
  return j;
}

json fit_json(const FitResult& fit) {
  json j;
  j["n"] = fit.n;
  j["converged"] = fit.converged;
  j["log_likelihood"] = fit.log_likelihood;
  j["iterations"] = fit.iterations;
  if (fit.separation) j["separation"] = true;
  if (!fit.diagnostic.empty()) j["diagnostic"] = fit.diagnostic;
  j["coefficients"] = json::array();
  for (const auto& c : fit.coefficients) j["coefficients"].push_back(coefficient_json(c));
  return j;
}

// Single-predictor fits additionally carry the predicted-probability curve
// with 95% bounds over the rescaled [0,1] range.
json fit_json_with_pp(const FitResult& fit) {
  json j = fit_json(fit);
  if (fit.converged && fit.coefficients.size() == 2) {
    json pp = json::array();
    for (int i = 0; i <= 10; ++i) {
      const double x = static_cast<double>(i) / 10.0;
      const Prediction pred = predicted_probability(fit, {x});
      pp.push_back({{"x", x},
                    {"p", pred.p},
                    {"ci_low", pred.ci_low},
                    {"ci_high", pred.ci_high}});
    }
    j["predicted_probability"] = std::move(pp);
  }
  return j;
}

// Value a named model term takes at grid point (x, y): the axes vary, a
// product term multiplies its parts, anything else is held at its design mean.
double surface_value(const std::string& name, double x, double y,
                     const std::string& x_axis, const std::string& y_axis,
                     const std::map<std::string, double>& means) {
  if (name == x_axis) return x;
  if (name == y_axis) return y;
  const auto colon = name.find(':');
  if (colon != std::string::npos) {
    return surface_value(name.substr(0, colon), x, y, x_axis, y_axis, means) *
           surface_value(name.substr(colon + 1), x, y, x_axis, y_axis, means);
  }
  const auto it = means.find(name);
  if (it == means.end()) {
    throw NumericalError("no mean available for control '" + name + "'");
  }
  return it->second;
}

}  // namespace

void emit_surface_grid(const FitResult& fit, const DesignMatrix& design,
                       const std::string& x_axis, const std::string& y_axis,
                       std::size_t resolution, const fs::path& out_path) {
  if (resolution < 2) throw ConfigError("grid resolution must be >= 2");
  if (!fit.converged) {
    throw NumericalError("cannot emit a probability surface from an unconverged fit" +
                         (fit.diagnostic.empty() ? "" : ": " + fit.diagnostic));
  }
  bool has_x = false, has_y = false;
  for (const auto& c : fit.coefficients) {
    if (c.name == x_axis) has_x = true;
    if (c.name == y_axis) has_y = true;
  }
  if (!has_x || !has_y) {
    throw NumericalError("surface grid predictor absent from model: " +
                         (!has_x ? x_axis : y_axis));
  }

  std::map<std::string, double> means;
  for (std::size_t j = 0; j < design.p(); ++j) {
    double s = 0.0;
    for (const auto& row : design.rows) s += row[j];
    means[design.columns[j]] =
        design.n() > 0 ? s / static_cast<double>(design.n()) : 0.0;
  }

  std::ofstream out(out_path);
  if (!out) throw IngestError("cannot write " + out_path.string());
  out << "x,y,p\n";
  for (std::size_t ix = 0; ix < resolution; ++ix) {
    const double x = static_cast<double>(ix) / static_cast<double>(resolution - 1);
    for (std::size_t iy = 0; iy < resolution; ++iy) {
      const double y = static_cast<double>(iy) / static_cast<double>(resolution - 1);
      std::vector<double> xv;
      xv.reserve(fit.coefficients.size() - 1);
      for (std::size_t j = 1; j < fit.coefficients.size(); ++j) {
        xv.push_back(surface_value(fit.coefficients[j].name, x, y, x_axis, y_axis,
                                   means));
      }
      out << format_double(x) << ',' << format_double(y) << ','
          << format_double(predicted_probability(fit, xv).p) << '\n';
    }
  }
}

void emit_lorenz_svg(const std::vector<double>& degrees, const fs::path& out_path) {
  const std::vector<LorenzPoint> points = lorenz_curve(degrees);
  const double gini = gini_centralization(degrees);

  constexpr double kSize = 420.0, kMargin = 50.0;
  const double span = kSize - 2.0 * kMargin;
  auto px = [&](double x) { return kMargin + x * span; };
  auto py = [&](double y) { return kSize - kMargin - y * span; };

  std::ofstream out(out_path);
  if (!out) throw IngestError("cannot write " + out_path.string());
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize
      << "\" height=\"" << kSize << "\" viewBox=\"0 0 " << kSize << " " << kSize
      << "\">\n"
      << "  <rect width=\"" << kSize << "\" height=\"" << kSize
      << "\" fill=\"white\"/>\n"
      << "  <line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1)
      << "\" y2=\"" << py(0) << "\" stroke=\"black\"/>\n"
      << "  <line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0)
      << "\" y2=\"" << py(1) << "\" stroke=\"black\"/>\n"
      << "  <line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1)
      << "\" y2=\"" << py(1) << "\" stroke=\"#888\" stroke-dasharray=\"6,4\"/>\n";
  out << "  <polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out << ' ';
    out << format_double(px(points[i].population_share)) << ','
        << format_double(py(points[i].degree_share));
  }
  out << "\"/>\n";
  out << "  <text x=\"" << px(0.05) << "\" y=\"" << py(0.92)
      << "\" font-family=\"sans-serif\" font-size=\"16\">Gini "
      << trimmed_percent(gini) << "</text>\n";
  out << "  <text x=\"" << px(0.25) << "\" y=\"" << (kSize - 12.0)
      << "\" font-family=\"sans-serif\" font-size=\"12\">cumulative share of "
         "authors</text>\n";
  out << "</svg>\n";
}

int run_pipeline(const PipelineConfig& cfg) {
  std::vector<fs::path> written;
  std::string stage = "configure";
  auto cleanup = [&]() {
    std::error_code ec;
    for (const auto& path : written) fs::remove(path, ec);
    fs::remove(cfg.output_dir / "manifest.json", ec);
  };
  auto wants = [&](PipelineStage s) {
    return static_cast<int>(cfg.last_stage) >= static_cast<int>(s);
  };

  try {
    validate_config(cfg);

    stage = "ingest";
    fs::create_directories(cfg.output_dir);
    Corpus corpus;
    if (!cfg.vocabulary_path.empty()) {
      const Vocabulary vocab = load_vocabulary(cfg.vocabulary_path);
      corpus = ingest_corpus(cfg.findings_path, cfg.papers_path,
                             cfg.signatures_path, vocab, cfg.vocab_threshold);
    } else {
      corpus = ingest_corpus(cfg.findings_path, cfg.papers_path, cfg.signatures_path);
    }
    const auto index = build_claim_index(corpus);

    stage = "aggregate";
    const AggregateResult aggregate = aggregate_claim_effects(
        corpus, cfg.bootstrap_iters, cfg.alpha, cfg.seed, cfg.threads,
        cfg.stratified_bootstrap);
    {
      const fs::path path = cfg.output_dir / "effects.csv";
      std::ofstream out(path);
      if (!out) throw IngestError("cannot write " + path.string());
      out << "drug,gene,k,z_combined,ci_low,ci_high,significant,cv\n";
      for (const auto& [claim, eff] : aggregate.effects) {
        out << csv_escape(claim.drug) << ',' << csv_escape(claim.gene) << ','
            << eff.k << ',' << format_double(eff.z_combined) << ','
            << format_double(eff.ci_low) << ',' << format_double(eff.ci_high)
            << ',' << (eff.significant ? "true" : "false") << ','
            << (eff.cv ? format_double(*eff.cv) : "") << '\n';
      }
      written.push_back(path);
    }

    std::vector<ClaimSummary> summaries;
    std::vector<LedgerEntry> ledger;
    std::vector<const ClaimSummary*> eval;
    DesignMatrix design;
    bool have_design = false;

    if (wants(PipelineStage::Support)) {
      stage = "support";
      summaries.reserve(index.size());
      for (const auto& [claim, lit] : index) {
        ClaimSummary s;
        s.claim = claim;
        s.literature = &lit;
        const auto eff = aggregate.effects.find(claim);
        if (eff != aggregate.effects.end()) s.effect = &eff->second;
        summaries.push_back(std::move(s));
      }
      // Posteriors depend only on (gamma, n); compute each distinct pair once,
      // in parallel, then fan out to the claims.
      std::map<std::pair<std::size_t, std::size_t>, SupportPosterior> memo;
      for (const auto& s : summaries) {
        memo.try_emplace({s.literature->supporting.size(), s.literature->total()});
      }
      {
        std::vector<std::pair<const std::pair<std::size_t, std::size_t>,
                              SupportPosterior>*> slots;
        slots.reserve(memo.size());
        for (auto& entry : memo) slots.push_back(&entry);
        parallel_for(slots.size(), cfg.threads, [&](std::size_t i) {
          slots[i]->second = make_support_posterior({}, slots[i]->first.first,
                                                    slots[i]->first.second);
        });
      }
      for (auto& s : summaries) {
        s.posterior =
            memo.at({s.literature->supporting.size(), s.literature->total()});
        s.posterior.claim = s.claim;
        if (s.effect) {
          s.replicated = s.literature->determined &&
                         replication_indicator(s.literature->majority,
                                               s.effect->z_combined);
        }
      }

      const fs::path path = cfg.output_dir / "support.csv";
      std::ofstream out(path);
      if (!out) throw IngestError("cannot write " + path.string());
      std::vector<int> levels = cfg.pci_levels;
      std::sort(levels.begin(), levels.end());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
      out << "drug,gene,gamma,n,l_supt";
      for (int level : levels) out << ",pci" << level << "_lo,pci" << level << "_hi";
      out << ",category\n";
      std::map<std::pair<std::size_t, std::size_t>,
               std::vector<std::pair<double, double>>>
          level_memo;
      for (const auto& s : summaries) {
        out << csv_escape(s.claim.drug) << ',' << csv_escape(s.claim.gene) << ','
            << s.posterior.gamma << ',' << s.posterior.n << ','
            << format_double(s.posterior.support_point);
        auto [mit, inserted] =
            level_memo.try_emplace({s.posterior.gamma, s.posterior.n});
        if (inserted) {
          for (int level : levels) {
            const double tail = (1.0 - static_cast<double>(level) / 100.0) / 2.0;
            mit->second.emplace_back(
                posterior_quantile(s.posterior.alpha_post, s.posterior.beta_post,
                                   tail),
                posterior_quantile(s.posterior.alpha_post, s.posterior.beta_post,
                                   1.0 - tail));
          }
        }
        for (const auto& [lo, hi] : mit->second) {
          out << ',' << format_double(lo) << ',' << format_double(hi);
        }
        out << ',' << to_string(s.posterior.category) << '\n';
      }
      written.push_back(path);
    }

    if (wants(PipelineStage::Replicate)) {
      stage = "replicate";
      for (const auto& s : summaries) eval.push_back(&s);
      auto apply_filter = [&](const std::string& name, auto keep) {
        LedgerEntry entry;
        entry.stage = name;
        entry.input = eval.size();
        std::vector<const ClaimSummary*> kept;
        kept.reserve(eval.size());
        for (const auto* s : eval) {
          if (keep(*s)) kept.push_back(s);
        }
        eval = std::move(kept);
        entry.output = eval.size();
        entry.dropped = entry.input - entry.output;
        ledger.push_back(std::move(entry));
      };

      apply_filter("signature-bearing",
                   [](const ClaimSummary& s) { return s.effect != nullptr; });
      apply_filter("determined-majority",
                   [](const ClaimSummary& s) { return s.literature->determined; });

      // replication.csv covers the mandatory evaluation set, before optional
      // filters, so consumers can re-slice.
      {
        const fs::path path = cfg.output_dir / "replication.csv";
        std::ofstream out(path);
        if (!out) throw IngestError("cannot write " + path.string());
        out << "drug,gene,direction,z_combined,k,significant,category,l_supt,"
               "replicated\n";
        for (const auto* s : eval) {
          out << csv_escape(s->claim.drug) << ',' << csv_escape(s->claim.gene)
              << ',' << to_string(s->literature->majority) << ','
              << format_double(s->effect->z_combined) << ',' << s->effect->k << ','
              << (s->effect->significant ? "true" : "false") << ','
              << to_string(s->posterior.category) << ','
              << format_double(s->posterior.support_point) << ','
              << (s->replicated ? "true" : "false") << '\n';
        }
        written.push_back(path);
      }

      if (cfg.filters.significant_only) {
        apply_filter("significant-only",
                     [](const ClaimSummary& s) { return s.effect->significant; });
      }
      if (cfg.filters.determined_direction_only) {
        apply_filter("determined-direction-68pci", [](const ClaimSummary& s) {
          return s.posterior.pci68.low > 0.5 || s.posterior.pci68.high < 0.5;
        });
      }
      if (cfg.filters.drop_low_support) {
        apply_filter("drop-low-support", [](const ClaimSummary& s) {
          return s.posterior.category != SupportCategory::Low;
        });
      }
      if (cfg.filters.drop_ge_10_findings) {
        apply_filter("drop-ge-10-findings", [](const ClaimSummary& s) {
          return s.literature->supporting.size() < 10;
        });
      }
      if (cfg.filters.drop_pair_of_papers) {
        apply_filter("drop-pair-of-papers", [](const ClaimSummary& s) {
          return s.literature->papers.size() != 2;
        });
      }

      json rri_doc;
      rri_doc["iterations"] = {{"bootstrap", cfg.bootstrap_iters},
                               {"permutation", cfg.null_iters}};
      rri_doc["strata"] = json::array();

      auto stratum_json = [&](const std::string& name,
                              const std::vector<const ClaimSummary*>& claims) {
        json j;
        j["category"] = name;
        j["n_claims"] = claims.size();
        if (claims.empty()) return j;
        std::vector<bool> replicated;
        std::vector<Direction> directions;
        std::vector<double> effects;
        for (const auto* s : claims) {
          replicated.push_back(s->replicated);
          directions.push_back(s->literature->majority);
          effects.push_back(s->effect->z_combined);
        }
        const RateResult obs = observed_replication_rate(
            replicated, cfg.bootstrap_iters,
            derive_seed(cfg.seed, "rri-obs/" + name));
        const RateResult rand = null_replication_rate(
            directions, effects, cfg.null_iters,
            derive_seed(cfg.seed, "rri-rand/" + name));
        j["rr_obs"] = obs.estimate.mean;
        j["sem_obs"] = obs.estimate.sem;
        j["rr_rand"] = rand.estimate.mean;
        j["sem_rand"] = rand.estimate.sem;
        if (rand.estimate.mean > 0.0) {
          const RriEstimate rri = rri_with_interval(obs, rand);
          j["rri_percent"] = rri.percent;
          j["rri_ci_low"] = rri.ci_low;
          j["rri_ci_high"] = rri.ci_high;
        } else {
          j["rri_percent"] = nullptr;
        }
        return j;
      };

      rri_doc["strata"].push_back(stratum_json("all", eval));
      for (SupportCategory cat :
           {SupportCategory::VeryHigh, SupportCategory::High,
            SupportCategory::Moderate, SupportCategory::Low,
            SupportCategory::Contradictory}) {
        std::vector<const ClaimSummary*> members;
        for (const auto* s : eval) {
          if (s->posterior.category == cat) members.push_back(s);
        }
        if (!members.empty()) {
          rri_doc["strata"].push_back(
              stratum_json(std::string(to_string(cat)), members));
        }
      }

      try {
        const AgreementTestResult agreement = shared_author_agreement_test(
            corpus, cfg.null_iters, derive_seed(cfg.seed, "agreement"));
        rri_doc["shared_author_agreement"] = {
            {"rate_shared", agreement.rate_shared},
            {"rate_distinct", agreement.rate_distinct},
            {"diff", agreement.diff},
            {"p_value", agreement.p_value},
            {"shared_pairs", agreement.shared_pairs},
            {"distinct_pairs", agreement.distinct_pairs}};
      } catch (const std::invalid_argument&) {
        rri_doc["shared_author_agreement"] = nullptr;
      }

      const fs::path path = cfg.output_dir / "rri.json";
      std::ofstream out(path);
      if (!out) throw IngestError("cannot write " + path.string());
      out << rri_doc.dump(2) << '\n';
      written.push_back(path);
    }

    std::vector<std::optional<ClaimIndices>> indices;
    if (wants(PipelineStage::Network)) {
      stage = "network";
      indices.resize(eval.size());
      std::vector<ClaimNetwork> networks(eval.size());
      const auto grouped = group_findings_by_claim(corpus);
      parallel_for(eval.size(), cfg.threads, [&](std::size_t i) {
        networks[i] =
            build_claim_network(corpus, eval[i]->claim, grouped.at(eval[i]->claim));
        indices[i] = claim_indices(networks[i], corpus.papers);
      });
      {
        const fs::path path = cfg.output_dir / "indices.csv";
        std::ofstream out(path);
        if (!out) throw IngestError("cannot write " + path.string());
        out << "drug,gene,s_ind,m_ind,k_ind,centralization,community_size,"
               "journal_prominence\n";
        for (std::size_t i = 0; i < eval.size(); ++i) {
          if (!indices[i]) continue;
          const auto& idx = *indices[i];
          out << csv_escape(eval[i]->claim.drug) << ','
              << csv_escape(eval[i]->claim.gene) << ','
              << format_double(idx.social_independence) << ','
              << format_double(idx.method_independence) << ','
              << format_double(idx.knowledge_independence) << ','
              << format_double(idx.centralization) << ',' << idx.community_size
              << ','
              << (idx.journal_prominence ? format_double(*idx.journal_prominence)
                                         : "")
              << '\n';
        }
        written.push_back(path);
      }
      if (cfg.export_networks) {
        const fs::path dir = cfg.output_dir / "networks";
        fs::create_directories(dir);
        std::set<std::string> used_names;
        for (std::size_t i = 0; i < eval.size(); ++i) {
          const auto& net = networks[i];
          if (net.nodes.size() < 2) continue;
          json doc;
          doc["nodes"] = net.nodes;
          json layers;
          layers["agreement"] = json::array();
          for (const auto& e : net.agreement) {
            layers["agreement"].push_back(
                {{"u", e.u}, {"v", e.v}, {"agrees", e.agrees}});
          }
          for (const auto& [layer, edges] : net.overlap) {
            json arr = json::array();
            for (const auto& e : edges) {
              if (e.jc < cfg.export_jc_threshold) continue;
              arr.push_back(
                  {{"u", e.u}, {"v", e.v}, {"jc", e.jc}, {"shared", e.shared}});
            }
            layers[std::string(to_string(layer))] = std::move(arr);
          }
          doc["layers"] = std::move(layers);
          json bip = json::object();
          for (const auto& [author, paper_set] : net.author_papers) {
            bip[author] = paper_set;
          }
          doc["bipartite"] = std::move(bip);

          std::string name = sanitize_filename(eval[i]->claim.drug) + "__" +
                             sanitize_filename(eval[i]->claim.gene);
          while (!used_names.insert(name).second) name += "~";
          const fs::path path = dir / (name + ".json");
          std::ofstream out(path);
          if (!out) throw IngestError("cannot write " + path.string());
          out << doc.dump(2) << '\n';
          written.push_back(path);
        }
      }
    }

    if (wants(PipelineStage::Regress)) {
      stage = "regress";
      std::vector<ClaimRow> rows;
      for (std::size_t i = 0; i < eval.size(); ++i) {
        if (!indices[i]) continue;
        const auto* s = eval[i];
        ClaimRow row;
        row.claim = s->claim;
        row.replicated = s->replicated;
        row.l_supt = s->posterior.support_point;
        row.s_ind = indices[i]->social_independence;
        row.m_ind = indices[i]->method_independence;
        row.k_ind = indices[i]->knowledge_independence;
        row.centralization = indices[i]->centralization;
        row.journal = indices[i]->journal_prominence;
        if (s->effect->cv) row.variability = s->effect->cv;
        row.supporting_findings = s->literature->supporting.size();
        row.total_findings = s->literature->total();
        row.reporting_papers = s->literature->papers.size();
        rows.push_back(std::move(row));
      }
      {
        LedgerEntry entry;
        entry.stage = "network-eligible";
        entry.input = eval.size();
        entry.output = rows.size();
        entry.dropped = entry.input - entry.output;
        ledger.push_back(entry);
      }

      design = build_design(rows);
      have_design = true;
      {
        LedgerEntry entry;
        entry.stage = "complete-predictors";
        entry.input = rows.size();
        entry.output = design.n();
        entry.dropped = design.dropped_rows;
        ledger.push_back(entry);
      }

      const ModelSuite suite = fit_model_suite(design);
      json models;
      models["n"] = design.n();
      models["dropped_missing"] = design.dropped_rows;
      models["scaling"] = json::object();
      for (const auto& [name, mm] : design.scaling) {
        models["scaling"][name] = {{"min", mm.first}, {"max", mm.second}};
      }
      models["single"] = json::array();
      for (const auto& fit : suite.single) {
        models["single"].push_back(fit_json_with_pp(fit));
      }
      models["simultaneous"] = fit_json(suite.simultaneous);
      models["interactions"] = {
          {"l_supt_x_c", fit_json(suite.interaction_support_centralization)},
          {"l_supt_x_s_ind", fit_json(suite.interaction_support_social)}};

      try {
        const auto vif = variance_inflation(design);
        json vj;
        for (const auto& [name, value] : vif) {
          if (std::isinf(value)) {
            vj[name] = "inf";
          } else {
            vj[name] = value;
          }
        }
        models["vif"] = std::move(vj);

        // Refit excluding the (up to two) highest-VIF predictors above 4.
        std::vector<std::pair<double, std::string>> high;
        for (const auto& [name, value] : vif) {
          if (value > 4.0) high.emplace_back(value, name);
        }
        if (!high.empty()) {
          std::sort(high.rbegin(), high.rend());
          std::set<std::string> drop;
          for (std::size_t i = 0; i < std::min<std::size_t>(2, high.size()); ++i) {
            drop.insert(high[i].second);
          }
          DesignMatrix pruned;
          pruned.response = design.response;
          pruned.scaling = design.scaling;
          std::vector<std::size_t> keep;
          for (std::size_t j = 0; j < design.p(); ++j) {
            if (!drop.count(design.columns[j])) {
              pruned.columns.push_back(design.columns[j]);
              keep.push_back(j);
            }
          }
          pruned.rows.reserve(design.n());
          for (const auto& row : design.rows) {
            std::vector<double> r;
            r.reserve(keep.size());
            for (std::size_t j : keep) r.push_back(row[j]);
            pruned.rows.push_back(std::move(r));
          }
          json dropped = json::array();
          for (const auto& name : drop) dropped.push_back(name);
          models["robustness"]["low_vif_refit"] = fit_json(fit_logistic(pruned));
          models["robustness"]["low_vif_refit"]["dropped_predictors"] = dropped;
        }
      } catch (const NumericalError& e) {
        models["vif"] = nullptr;
        models["vif_error"] = e.what();
      }

      try {
        const RobustnessDesigns robust = robustness_filters(rows);
        models["robustness"]["drop_many_findings"] =
            fit_json(fit_logistic(robust.drop_many_findings));
        models["robustness"]["drop_many_findings"]["removed_claims"] =
            robust.removed_many_findings;
        models["robustness"]["drop_paper_pairs"] =
            fit_json(fit_logistic(robust.drop_paper_pairs));
        models["robustness"]["drop_paper_pairs"]["removed_claims"] =
            robust.removed_paper_pairs;
      } catch (const NumericalError& e) {
        models["robustness"]["error"] = e.what();
      }

      {
        const fs::path path = cfg.output_dir / "models.json";
        std::ofstream out(path);
        if (!out) throw IngestError("cannot write " + path.string());
        out << models.dump(2) << '\n';
        written.push_back(path);
      }

      stage = "write-surfaces";
      const fs::path path_c = cfg.output_dir / "surface_l_supt_x_c.csv";
      emit_surface_grid(suite.interaction_support_centralization, design, "l_supt",
                        "c", cfg.grid_resolution, path_c);
      written.push_back(path_c);
      const fs::path path_s = cfg.output_dir / "surface_l_supt_x_s_ind.csv";
      emit_surface_grid(suite.interaction_support_social, design, "l_supt",
                        "s_ind", cfg.grid_resolution, path_s);
      written.push_back(path_s);
    }

    stage = "manifest";
    {
      json manifest;
      manifest["schema"] = "claimrep-manifest-v1";
      json jc;
      jc["findings_path"] = cfg.findings_path.string();
      jc["papers_path"] = cfg.papers_path.string();
      jc["signatures_path"] = cfg.signatures_path.string();
      jc["vocabulary_path"] = cfg.vocabulary_path.string();
      jc["seed"] = cfg.seed;
      jc["bootstrap_iters"] = cfg.bootstrap_iters;
      jc["null_iters"] = cfg.null_iters;
      jc["alpha"] = cfg.alpha;
      jc["pci_levels"] = cfg.pci_levels;
      jc["filters"] = {{"significant_only", cfg.filters.significant_only},
                       {"determined_direction_only",
                        cfg.filters.determined_direction_only},
                       {"drop_low_support", cfg.filters.drop_low_support},
                       {"drop_ge_10_findings", cfg.filters.drop_ge_10_findings},
                       {"drop_pair_of_papers", cfg.filters.drop_pair_of_papers}};
      jc["grid_resolution"] = cfg.grid_resolution;
      jc["vocab_threshold"] = cfg.vocab_threshold;
      jc["stratified_bootstrap"] = cfg.stratified_bootstrap;
      jc["export_networks"] = cfg.export_networks;
      jc["export_jc_threshold"] = cfg.export_jc_threshold;
      manifest["config"] = std::move(jc);

      json counts;
      counts["findings"] = corpus.findings.size();
      counts["papers"] = corpus.papers.size();
      counts["claims"] = index.size();
      counts["signature_claims"] = aggregate.effects.size();
      counts["no_experiment_claims"] = aggregate.claims_without_signatures;
      if (have_design) counts["regression_rows"] = design.n();
      manifest["counts"] = std::move(counts);

      manifest["filter_ledger"] = json::array();
      for (const auto& entry : ledger) {
        manifest["filter_ledger"].push_back({{"stage", entry.stage},
                                             {"input", entry.input},
                                             {"dropped", entry.dropped},
                                             {"output", entry.output}});
      }

      json artifacts;
      for (const auto& path : written) {
        artifacts[fs::relative(path, cfg.output_dir).generic_string()] =
            hash_file(path);
      }
      manifest["artifacts"] = std::move(artifacts);

      const fs::path path = cfg.output_dir / "manifest.json";
      std::ofstream out(path);
      if (!out) throw IngestError("cannot write " + path.string());
      out << manifest.dump(2) << '\n';
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    cleanup();
    std::cerr << "stage " << stage << ": " << e.what() << '\n';
    return kExitConfigError;
  } catch (const IngestError& e) {
    cleanup();
    std::cerr << "stage " << stage << ": " << e.what() << '\n';
    return kExitInputError;
  } catch (const NumericalError& e) {
    cleanup();
    std::cerr << "stage " << stage << ": " << e.what() << '\n';
    return kExitNumericalError;
  } catch (const std::exception& e) {
    cleanup();
    std::cerr << "stage " << stage << ": " << e.what() << '\n';
    return kExitNumericalError;
  }
}

}  // namespace claimrep
