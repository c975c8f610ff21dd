#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "claimrep/claim_index.hpp"
#include "claimrep/corpus_io.hpp"
#include "claimrep/networks.hpp"
#include "claimrep/pipeline.hpp"
#include "claimrep/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct InputFlags {
  std::string findings, papers, signatures, vocabulary;
  double vocab_threshold = 0.9;
};

void add_input_flags(CLI::App* cmd, InputFlags& flags) {
  cmd->add_option("--findings", flags.findings, "findings.csv path")->required();
  cmd->add_option("--papers", flags.papers, "papers.jsonl path")->required();
  cmd->add_option("--signatures", flags.signatures, "signatures.csv path")->required();
  cmd->add_option("--vocabulary", flags.vocabulary,
                  "vocabulary.tsv path (enables method-term matching)");
  cmd->add_option("--vocab-threshold", flags.vocab_threshold,
                  "fuzzy match similarity threshold")
      ->check(CLI::Range(0.0, 1.0));
}

claimrep::Corpus load_corpus(const InputFlags& flags) {
  if (!flags.vocabulary.empty()) {
    const auto vocab = claimrep::load_vocabulary(flags.vocabulary);
    return claimrep::ingest_corpus(flags.findings, flags.papers, flags.signatures,
                                   vocab, flags.vocab_threshold);
  }
  return claimrep::ingest_corpus(flags.findings, flags.papers, flags.signatures);
}

void add_filter_flag(CLI::App* cmd, std::vector<std::string>& filters) {
  cmd->add_option("--filter", filters,
                  "evaluation filters: significant-only, "
                  "determined-direction-only, drop-low-support, "
                  "drop-ge-10-findings, drop-pair-of-papers")
      ->expected(-1);
}

claimrep::PipelineFilters parse_filters(const std::vector<std::string>& names) {
  claimrep::PipelineFilters f;
  for (const auto& name : names) {
    if (name == "significant-only") {
      f.significant_only = true;
    } else if (name == "determined-direction-only") {
      f.determined_direction_only = true;
    } else if (name == "drop-low-support") {
      f.drop_low_support = true;
    } else if (name == "drop-ge-10-findings") {
      f.drop_ge_10_findings = true;
    } else if (name == "drop-pair-of-papers") {
      f.drop_pair_of_papers = true;
    } else {
      throw claimrep::ConfigError("unknown filter '" + name + "'");
    }
  }
  return f;
}

claimrep::GeneratorSpec spec_from_json(const json& j) {
  claimrep::GeneratorSpec spec;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("n_claims", spec.n_claims);
  if (j.contains("findings_per_claim")) {
    const auto& fd = j.at("findings_per_claim");
    if (fd.contains("p_one")) spec.findings_per_claim.p_one = fd["p_one"].get<double>();
    if (fd.contains("p_two")) spec.findings_per_claim.p_two = fd["p_two"].get<double>();
    if (fd.contains("tail_decay")) {
      spec.findings_per_claim.tail_decay = fd["tail_decay"].get<double>();
    }
    if (fd.contains("max_findings")) {
      spec.findings_per_claim.max_findings = fd["max_findings"].get<std::size_t>();
    }
  }
  get("centralized_fraction", spec.centralized_fraction);
  get("author_pool", spec.author_pool);
  get("method_pool", spec.method_pool);
  get("reference_pool", spec.reference_pool);
  get("journal_pool", spec.journal_pool);
  get("missing_eigenfactor_rate", spec.missing_eigenfactor_rate);
  get("team_size_min", spec.team_size_min);
  get("team_size_max", spec.team_size_max);
  get("methods_min", spec.methods_min);
  get("methods_max", spec.methods_max);
  get("references_min", spec.references_min);
  get("references_max", spec.references_max);
  get("method_window", spec.method_window);
  get("reference_window", spec.reference_window);
  get("signatures_min", spec.signatures_min);
  get("signatures_max", spec.signatures_max);
  get("effect_magnitude", spec.effect_magnitude);
  get("noise_sd", spec.noise_sd);
  get("base_unsound", spec.base_unsound);
  get("link_slope", spec.link_slope);
  get("q_sound", spec.q_sound);
  get("q_unsound", spec.q_unsound);
  get("replication_link", spec.replication_link);
  get("seed", spec.seed);
  return spec;
}

int guarded(const std::function<void()>& body) {
  try {
    body();
    return claimrep::kExitOk;
  } catch (const claimrep::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return claimrep::kExitConfigError;
  } catch (const claimrep::IngestError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return claimrep::kExitInputError;
  } catch (const claimrep::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return claimrep::kExitNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return claimrep::kExitNumericalError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"claimrep: high-throughput literature-claim replication analytics"};
  app.set_version_flag("--version", "claimrep 0.1.0");
  app.require_subcommand(1);

  // ---- shared state filled by the parsers
  InputFlags inputs;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t bootstrap_iters = 10000, null_iters = 10000;
  double alpha = 0.05;
  std::vector<std::string> filter_names;
  std::size_t grid_resolution = 51;
  bool stratified = false;
  bool export_networks = false;

  // ingest ------------------------------------------------------------------
  auto* cmd_ingest = app.add_subcommand("ingest", "validate inputs and print corpus counts");
  add_input_flags(cmd_ingest, inputs);

  // aggregate ---------------------------------------------------------------
  auto* cmd_aggregate =
      app.add_subcommand("aggregate", "combine signatures into per-claim effects");
  add_input_flags(cmd_aggregate, inputs);
  cmd_aggregate->add_option("--out", out_dir, "output directory");
  cmd_aggregate->add_option("--seed", seed, "master seed");
  cmd_aggregate->add_option("--bootstrap-iters", bootstrap_iters, "bootstrap iterations");
  cmd_aggregate->add_option("--alpha", alpha, "significance level");
  cmd_aggregate->add_option("--threads", threads, "worker pool size (0 = all cores)");
  cmd_aggregate->add_flag("--stratified", stratified,
                          "stratify bootstrap resampling by cell line");

  // support -----------------------------------------------------------------
  auto* cmd_support =
      app.add_subcommand("support", "posterior support and claim typology");
  add_input_flags(cmd_support, inputs);
  cmd_support->add_option("--out", out_dir, "output directory");

  // replicate ---------------------------------------------------------------
  auto* cmd_replicate = app.add_subcommand(
      "replicate", "replication indicators, null model and RRI per category");
  add_input_flags(cmd_replicate, inputs);
  cmd_replicate->add_option("--out", out_dir, "output directory");
  cmd_replicate->add_option("--seed", seed, "master seed");
  cmd_replicate->add_option("--bootstrap-iters", bootstrap_iters, "bootstrap iterations");
  cmd_replicate->add_option("--null-iters", null_iters, "permutation iterations");
  cmd_replicate->add_option("--alpha", alpha, "significance level");
  cmd_replicate->add_option("--threads", threads, "worker pool size");
  add_filter_flag(cmd_replicate, filter_names);

  // network -----------------------------------------------------------------
  auto* cmd_network =
      app.add_subcommand("network", "claim multilayer networks and indices");
  add_input_flags(cmd_network, inputs);
  cmd_network->add_option("--out", out_dir, "output directory");
  cmd_network->add_option("--threads", threads, "worker pool size");
  bool skip_export = false;
  double export_jc_threshold = 0.0;
  cmd_network->add_flag("--no-export", skip_export, "skip node-link JSON export");
  cmd_network->add_option("--export-jc-threshold", export_jc_threshold,
                          "suppress overlap edges below this weight in exports");

  // regress -----------------------------------------------------------------
  auto* cmd_regress = app.add_subcommand(
      "regress", "logistic model suite over the evaluation sub-corpus");
  add_input_flags(cmd_regress, inputs);
  cmd_regress->add_option("--out", out_dir, "output directory");
  cmd_regress->add_option("--seed", seed, "master seed");
  cmd_regress->add_option("--bootstrap-iters", bootstrap_iters, "bootstrap iterations");
  cmd_regress->add_option("--null-iters", null_iters, "permutation iterations");
  cmd_regress->add_option("--alpha", alpha, "significance level");
  cmd_regress->add_option("--threads", threads, "worker pool size");
  cmd_regress->add_option("--grid-resolution", grid_resolution,
                          "interaction surface resolution");
  add_filter_flag(cmd_regress, filter_names);

  // synth -------------------------------------------------------------------
  auto* cmd_synth =
      app.add_subcommand("synth", "generate a synthetic corpus with ground truth");
  std::string spec_path;
  claimrep::GeneratorSpec synth_defaults;
  std::size_t synth_claims = synth_defaults.n_claims;
  double synth_link = synth_defaults.replication_link;
  double synth_centralized = synth_defaults.centralized_fraction;
  cmd_synth->add_option("--out", out_dir, "output directory");
  cmd_synth->add_option("--spec", spec_path, "generator spec JSON (flag overrides apply)");
  cmd_synth->add_option("--claims", synth_claims, "number of claims");
  cmd_synth->add_option("--seed", seed, "generator seed");
  cmd_synth->add_option("--replication-link", synth_link,
                        "strength tying community structure to soundness");
  cmd_synth->add_option("--centralized-fraction", synth_centralized,
                        "fraction of claims in the centralized regime");

  // run ---------------------------------------------------------------------
  auto* cmd_run = app.add_subcommand("run", "full pipeline with manifest");
  add_input_flags(cmd_run, inputs);
  cmd_run->add_option("--out", out_dir, "output directory");
  cmd_run->add_option("--seed", seed, "master seed");
  cmd_run->add_option("--bootstrap-iters", bootstrap_iters, "bootstrap iterations");
  cmd_run->add_option("--null-iters", null_iters, "permutation iterations");
  cmd_run->add_option("--alpha", alpha, "significance level");
  cmd_run->add_option("--threads", threads, "worker pool size (0 = all cores)");
  cmd_run->add_option("--grid-resolution", grid_resolution,
                      "interaction surface resolution");
  cmd_run->add_flag("--export-networks", export_networks,
                    "also export per-claim node-link JSON");
  cmd_run->add_option("--export-jc-threshold", export_jc_threshold,
                      "suppress overlap edges below this weight in exports");
  cmd_run->add_flag("--stratified", stratified,
                    "stratify bootstrap resampling by cell line");
  add_filter_flag(cmd_run, filter_names);

  // report ------------------------------------------------------------------
  auto* cmd_report = app.add_subcommand("report", "summarize a pipeline output directory");
  std::string report_dir;
  std::string lorenz_claim, lorenz_out = "lorenz.svg";
  cmd_report->add_option("--dir", report_dir, "pipeline output directory")->required();
  auto* report_findings = cmd_report->add_option("--findings", inputs.findings, "findings.csv");
  auto* report_papers = cmd_report->add_option("--papers", inputs.papers, "papers.jsonl");
  auto* report_signatures =
      cmd_report->add_option("--signatures", inputs.signatures, "signatures.csv");
  cmd_report
      ->add_option("--lorenz", lorenz_claim,
                   "emit a Lorenz SVG for claim 'drug:gene' (requires input flags)")
      ->needs(report_findings)
      ->needs(report_papers)
      ->needs(report_signatures);
  cmd_report->add_option("--svg-out", lorenz_out, "Lorenz SVG output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return claimrep::kExitConfigError;
  }

  if (cmd_ingest->parsed()) {
    return guarded([&] {
      const auto corpus = load_corpus(inputs);
      const auto index = claimrep::build_claim_index(corpus);
      std::size_t ties = 0, no_experiment = 0;
      for (const auto& [claim, lit] : index) {
        if (!lit.determined) ++ties;
        if (!corpus.signatures.count(claim)) ++no_experiment;
      }
      std::cout << "findings:            " << corpus.findings.size() << '\n'
                << "papers:              " << corpus.papers.size() << '\n'
                << "claims:              " << index.size() << '\n'
                << "signature claims:    " << corpus.signatures.size() << '\n'
                << "no-experiment claims: " << no_experiment << '\n'
                << "direction ties:      " << ties << '\n';
    });
  }

  if (cmd_aggregate->parsed() || cmd_support->parsed() || cmd_replicate->parsed() ||
      cmd_regress->parsed() || cmd_network->parsed() || cmd_run->parsed()) {
    claimrep::PipelineConfig cfg;
    cfg.findings_path = inputs.findings;
    cfg.papers_path = inputs.papers;
    cfg.signatures_path = inputs.signatures;
    cfg.vocabulary_path = inputs.vocabulary;
    cfg.vocab_threshold = inputs.vocab_threshold;
    cfg.seed = seed;
    cfg.bootstrap_iters = bootstrap_iters;
    cfg.null_iters = null_iters;
    cfg.alpha = alpha;
    cfg.output_dir = out_dir;
    cfg.threads = threads;
    cfg.grid_resolution = grid_resolution;
    cfg.stratified_bootstrap = stratified;
    cfg.export_networks = cmd_network->parsed() ? !skip_export : export_networks;
    cfg.export_jc_threshold = export_jc_threshold;
    if (cmd_aggregate->parsed()) {
      cfg.last_stage = claimrep::PipelineStage::Effects;
    } else if (cmd_support->parsed()) {
      cfg.last_stage = claimrep::PipelineStage::Support;
    } else if (cmd_replicate->parsed()) {
      cfg.last_stage = claimrep::PipelineStage::Replicate;
    } else if (cmd_network->parsed()) {
      cfg.last_stage = claimrep::PipelineStage::Network;
    }
    int rc = claimrep::kExitConfigError;
    const int parse_rc = guarded([&] { cfg.filters = parse_filters(filter_names); });
    if (parse_rc != claimrep::kExitOk) return parse_rc;
    rc = claimrep::run_pipeline(cfg);
    if (rc == claimrep::kExitOk) {
      std::cout << "artifacts written to " << cfg.output_dir.string() << '\n';
    }
    return rc;
  }

  if (cmd_synth->parsed()) {
    return guarded([&] {
      claimrep::GeneratorSpec spec;
      if (!spec_path.empty()) {
        std::ifstream in(spec_path);
        if (!in) throw claimrep::ConfigError("cannot open spec " + spec_path);
        json j;
        try {
          j = json::parse(in);
        } catch (const json::parse_error& e) {
          throw claimrep::ConfigError("bad spec JSON: " + std::string(e.what()));
        }
        spec = spec_from_json(j);
      }
      if (cmd_synth->count("--claims")) spec.n_claims = synth_claims;
      if (cmd_synth->count("--seed")) spec.seed = seed;
      if (cmd_synth->count("--replication-link")) spec.replication_link = synth_link;
      if (cmd_synth->count("--centralized-fraction")) {
        spec.centralized_fraction = synth_centralized;
      }
      const auto [corpus, truth] = claimrep::generate_corpus(spec);
      fs::create_directories(out_dir);
      const fs::path dir(out_dir);
      claimrep::write_corpus(corpus, dir / "findings.csv", dir / "papers.jsonl",
                             dir / "signatures.csv");
      claimrep::write_vocabulary_tsv(claimrep::generator_vocabulary(spec),
                                     dir / "vocabulary.tsv");
      claimrep::write_ground_truth_csv(truth, dir / "ground_truth.csv");
      std::cout << "wrote synthetic corpus (" << truth.claims.size()
                << " claims) to " << dir.string() << '\n';
    });
  }

  if (cmd_report->parsed()) {
    return guarded([&] {
      const fs::path dir(report_dir);
      const fs::path manifest_path = dir / "manifest.json";
      std::ifstream in(manifest_path);
      if (!in) throw claimrep::IngestError("cannot open " + manifest_path.string());
      const json manifest = json::parse(in);
      std::cout << "pipeline output: " << dir.string() << '\n';
      if (manifest.contains("counts")) {
        for (const auto& [key, value] : manifest["counts"].items()) {
          std::cout << "  " << key << ": " << value << '\n';
        }
      }
      if (manifest.contains("filter_ledger")) {
        std::cout << "filter ledger:\n";
        for (const auto& entry : manifest["filter_ledger"]) {
          std::cout << "  " << entry["stage"].get<std::string>() << ": "
                    << entry["input"] << " -> " << entry["output"] << " (dropped "
                    << entry["dropped"] << ")\n";
        }
      }
      const fs::path rri_path = dir / "rri.json";
      if (std::ifstream rri_in(rri_path); rri_in) {
        const json rri = json::parse(rri_in);
        std::cout << "replication by category:\n";
        for (const auto& stratum : rri["strata"]) {
          std::cout << "  " << stratum["category"].get<std::string>()
                    << ": rr_obs=" << stratum.value("rr_obs", 0.0)
                    << " rr_rand=" << stratum.value("rr_rand", 0.0);
          if (stratum.contains("rri_percent") && !stratum["rri_percent"].is_null()) {
            std::cout << " rri=" << stratum["rri_percent"].get<double>() << "%";
          }
          std::cout << " (n=" << stratum["n_claims"] << ")\n";
        }
      }
      const fs::path models_path = dir / "models.json";
      if (std::ifstream models_in(models_path); models_in) {
        const json models = json::parse(models_in);
        std::cout << "simultaneous model (n=" << models.value("n", 0) << "):\n";
        for (const auto& coef : models["simultaneous"]["coefficients"]) {
          std::cout << "  " << coef["name"].get<std::string>() << ": or="
                    << coef["or"].get<double>() << " p=" << coef["p"].get<double>()
                    << coef["stars"].get<std::string>() << '\n';
        }
      }
      if (!lorenz_claim.empty()) {
        const auto colon = lorenz_claim.find(':');
        if (colon == std::string::npos) {
          throw claimrep::ConfigError("--lorenz expects 'drug:gene'");
        }
        const auto corpus = load_corpus(inputs);
        const auto claim = claimrep::make_claim_id(lorenz_claim.substr(0, colon),
                                                   lorenz_claim.substr(colon + 1));
        const auto network = claimrep::build_claim_network(corpus, claim);
        std::vector<double> degrees;
        for (const auto& [author, papers] : network.author_papers) {
          degrees.push_back(static_cast<double>(papers.size()));
        }
        if (degrees.empty()) {
          throw claimrep::IngestError("claim has no supporting authors");
        }
        claimrep::emit_lorenz_svg(degrees, lorenz_out);
        std::cout << "wrote " << lorenz_out << '\n';
      }
    });
  }

  return claimrep::kExitConfigError;
}
