// config.hpp
// Structured run configuration for the mzfringe CLI: JSON file plus
// --section.key=value overrides, validated before any simulation runs.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mzfringe/simulator.hpp"

namespace mzfringe::cli {

enum class Experiment {
  fringe_single,
  fringe_two,
  fringe_four,
  fringe_dist_two,
  fringe_dist_four,
  hom_delay,
  thresholds,
};

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

/// Setting units of the scan list in config files.
enum class CfgSettingKind { phase, plate_angle, delay_ps };

struct ThresholdQuery {
  int n{4};
  double eta_i{0.375};
  std::optional<double> visibility;

  friend bool operator==(const ThresholdQuery&, const ThresholdQuery&) = default;
};

struct OutputPaths {
  std::string csv;
  std::string json;

  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

struct RunConfig {
  Experiment experiment{Experiment::fringe_four};
  SourceModel source{};
  DetectorModel detector{};
  std::vector<double> settings;
  CfgSettingKind setting_kind{CfgSettingKind::phase};
  PhasePlate plate{};
  double accumulation_time_s{1.0};
  std::uint64_t seed{42};
  std::uint64_t emission_sim_cap{20'000'000};
  ThresholdQuery thresholds{};
  OutputPaths output{};

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline bool operator==(const SourceModel& a, const SourceModel& b) {
  return a.p11 == b.p11 && a.p22 == b.p22 && a.p33 == b.p33 &&
         a.repetition_interval_ns == b.repetition_interval_ns &&
         a.coherence_length_um == b.coherence_length_um &&
         a.wavelength_nm == b.wavelength_nm &&
         a.distinguishability_x == b.distinguishability_x;
}

inline bool operator==(const DetectorModel& a, const DetectorModel& b) {
  return a.efficiency == b.efficiency && a.cascade_fanout == b.cascade_fanout &&
         a.number_resolving == b.number_resolving && a.dark_rate == b.dark_rate;
}

inline bool operator==(const PhasePlate& a, const PhasePlate& b) {
  return a.thickness_mm == b.thickness_mm && a.refractive_index == b.refractive_index &&
         a.wavelength_nm == b.wavelength_nm;
}

/// Raised on malformed or invalid configuration; message carries a line
/// number for parse errors and a key path for semantic errors.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse config JSON text; overrides are "section.key=value" strings
/// applied before structural validation (flags win over the file).
RunConfig parse_config(const std::string& json_text,
                       const std::vector<std::string>& overrides = {});

/// Normalized JSON echo that re-parses to an equal RunConfig.
nlohmann::ordered_json config_to_json(const RunConfig& config);

/// Inclusive linspace used by the "linspace" scan shorthand.
std::vector<double> linspace(double start, double stop, int count);

}  // namespace mzfringe::cli
