#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "claimrep/regression.hpp"
#include "claimrep/types.hpp"

namespace claimrep {

// Pipeline stages in execution order; a run can stop early, emitting only
// the artifacts produced so far (plus the manifest).
enum class PipelineStage { Effects, Support, Replicate, Network, Regress };

struct PipelineFilters {
  bool significant_only = false;        // bootstrap CI excludes 0
  bool determined_direction_only = false;  // majority determined and 68% PCI excludes 0.5
  bool drop_low_support = false;        // drop the Low support category
  bool drop_ge_10_findings = false;     // robustness filter A
  bool drop_pair_of_papers = false;     // robustness filter B
};

struct PipelineConfig {
  std::filesystem::path findings_path;
  std::filesystem::path papers_path;
  std::filesystem::path signatures_path;
  std::filesystem::path vocabulary_path;  // optional; empty = no matching

  std::uint64_t seed = 1;
  std::size_t bootstrap_iters = 10000;
  std::size_t null_iters = 10000;
  double alpha = 0.05;
  std::vector<int> pci_levels = {68, 80, 95};
  PipelineFilters filters;
  std::filesystem::path output_dir;

  unsigned threads = 1;  // 0 = hardware concurrency; results do not depend on it
  bool export_networks = false;
  // Overlap edges below this weight are suppressed in the node-link JSON
  // exports only; analytics always use every edge.
  double export_jc_threshold = 0.0;
  std::size_t grid_resolution = 51;
  double vocab_threshold = 0.9;
  bool stratified_bootstrap = false;
  PipelineStage last_stage = PipelineStage::Regress;
};

// Exit codes shared by run_pipeline and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericalError = 3;
inline constexpr int kExitConfigError = 4;

// ingest -> aggregate -> support -> replicate -> network -> regress.
// Writes effects.csv, support.csv, replication.csv, rri.json, indices.csv,
// models.json, two interaction surface grids and manifest.json into
// output_dir. A stage failure aborts with the stage name and cause on
// stderr, removes partial outputs, and returns the matching exit code.
// Identical config + inputs produce byte-identical artifacts.
int run_pipeline(const PipelineConfig& config);

// resolution x resolution grid of predicted probabilities over [0,1]^2 for
// an interaction fit, controls fixed at their design means. CSV `x,y,p`.
void emit_surface_grid(const FitResult& fit, const DesignMatrix& design,
                       const std::string& x_axis, const std::string& y_axis,
                       std::size_t resolution,
                       const std::filesystem::path& out_path);

// Standalone SVG with the equality diagonal, the Lorenz polyline and the
// Gini coefficient as a percentage label. Throws on empty input.
void emit_lorenz_svg(const std::vector<double>& degrees,
                     const std::filesystem::path& out_path);

}  // namespace claimrep
