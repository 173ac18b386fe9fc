// commands.hpp
// Implementations behind the CLI subcommands.

#pragma once

#include <optional>
#include <string>

#include "config.hpp"
#include "mzfringe/analysis.hpp"
#include "mzfringe/metrology.hpp"

namespace mzfringe::cli {

/// Output directory used for relative paths; MZFRINGE_OUTPUT_DIR or ".".
std::string default_output_dir();

struct RunArtifacts {
  nlohmann::ordered_json summary;
  std::string csv_path;   // empty when no dataset was produced
  std::string json_path;
  std::optional<FitResult> fit;
  std::optional<HomResult> hom;
  std::optional<SensitivityReport> sensitivity;
};

/// Simulate / evaluate one configured experiment and write its artifacts.
RunArtifacts execute_run(const RunConfig& config, int threads);

struct DemoOptions {
  std::string out_dir;
  std::uint64_t seed{42};
  double accumulation_scale{1.0};
  int threads{1};
};

/// One-command reproduction: the five fringe cases plus the delay scan,
/// with a combined report of fitted visibilities, thresholds and ratios.
nlohmann::ordered_json run_demo(const DemoOptions& options);

nlohmann::ordered_json fit_to_json(const FitResult& fit);
nlohmann::ordered_json sensitivity_to_json(const SensitivityReport& report);
nlohmann::ordered_json hom_to_json(const HomResult& hom);

/// (FringeInput, FringePattern) of a fringe experiment.
std::pair<FringeInput, FringePattern> fringe_case_for(Experiment experiment);

}  // namespace mzfringe::cli
