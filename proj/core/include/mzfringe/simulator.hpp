// simulator.hpp
// Seeded Monte Carlo of the photon-counting experiments: pulsed
// down-conversion source with multi-pair emission and partial
// distinguishability, lossy SPCM detectors with a cascade in mode e,
// interferometer fringe scans and the two-photon-per-side
// beamsplitter delay scan.

#pragma once

#include <cstdint>
#include <vector>

#include "mzfringe/interferometer.hpp"
#include "mzfringe/rng.hpp"

namespace mzfringe {

/// Speed of light in micrometres per picosecond.
inline constexpr double kSpeedOfLightUmPerPs = 299.792458;

/// Pulsed source. Per-pulse emission probabilities of the pair classes;
/// at most one class fires per pulse. distinguishability_x interpolates
/// the four-photon emission between one temporal bin (0, |22>) and two
/// bins (1, |1111>).
struct SourceModel {
  double p11{1.7e-2};
  double p22{2.8e-4};
  double p33{4.7e-6};
  double repetition_interval_ns{13.0};
  double coherence_length_um{150.0};
  double wavelength_nm{780.0};
  double distinguishability_x{0.0};
};

/// SPCM bank: one detector in mode f, `cascade_fanout` detectors behind
/// an ideal symmetric splitter tree in mode e. number_resolving bypasses
/// the cascade and reports true surviving counts.
struct DetectorModel {
  double efficiency{0.6};
  int cascade_fanout{3};
  bool number_resolving{false};
  double dark_rate{0.0};
};

enum class ScanMode {
  fringe_single,
  fringe_two,
  fringe_four,
  fringe_dist_two,
  fringe_dist_four,
  hom_delay,
};

enum class SettingKind { phase, plate_angle };

struct PhasePlate {
  double thickness_mm{1.0};
  double refractive_index{1.5};
  double wavelength_nm{780.0};
};

struct ScanConfig {
  std::vector<double> settings;  // phase (rad), plate angle (deg) or delay (ps)
  double accumulation_time_s{1.0};
  std::uint64_t seed{42};
  ScanMode mode{ScanMode::fringe_four};
  SettingKind setting_kind{SettingKind::phase};
  PhasePlate plate{};
  int threads{1};
  /// Largest per-point emission count of one class that is simulated
  /// photon by photon; beyond it the class's event count is drawn in one
  /// exact binomial from the enumerated event probability.
  std::uint64_t emission_sim_cap{20'000'000};
};

struct CountRecord {
  double setting{0.0};
  std::uint64_t counts{0};
  double error{0.0};  // sqrt(counts)
  std::uint64_t pulses{0};
};

struct ClickCounts {
  int e{0};
  int f{0};
};

/// Distinguishability x(dt) = 1 - exp(-(c dt / L_coh)^2) of two wave
/// packets separated by dt.
double overlap_factor(double delay_ps, const SourceModel& source);

/// Coherence length expressed as a traversal time, L_coh / c.
double coherence_time_ps(const SourceModel& source);

/// One detection gate: each photon survives with probability
/// `efficiency`; survivors in e land uniformly on the cascade detectors
/// and the count of distinct fired SPCMs is reported (true counts when
/// number_resolving). Dark counts fire otherwise-silent detectors.
ClickCounts detect(int n_e, int n_f, const DetectorModel& detector, SplitMix64& rng);

/// Clicks for a single output with `fanout` SPCMs behind a splitter tree.
int detect_mode(int photons, int fanout, const DetectorModel& detector, SplitMix64& rng);

/// Exact P(clicks == j) for one output; vector index is j.
std::vector<double> click_distribution(int photons, int fanout, const DetectorModel& detector);

/// Fringe scan of the Mach-Zehnder. Deterministic given (source,
/// detector, scan) regardless of thread count.
std::vector<CountRecord> simulate_fringe_scan(const SourceModel& source,
                                              const DetectorModel& detector,
                                              const ScanConfig& scan);

/// Delay scan of a single 50:50 beamsplitter, counting pulses with two
/// photons detected in each output (cascade banks on both outputs).
std::vector<CountRecord> simulate_hom_scan(const SourceModel& source,
                                           const DetectorModel& detector,
                                           const std::vector<double>& delays_ps,
                                           double accumulation_time_s, std::uint64_t seed,
                                           int threads = 1,
                                           std::uint64_t emission_sim_cap = 20'000'000);

/// Exact per-pulse probability of the mode's coincidence event,
/// enumerated over emission classes, interferometer outcomes, detector
/// losses, cascade assignments and dark counts.
double expected_event_probability(ScanMode mode, const SourceModel& source,
                                  const DetectorModel& detector, double setting);

/// Phase (radians) from the tilt of a phase plate of given thickness and
/// index, referenced to zero at normal incidence:
///   phi(theta) = (2 pi d / lambda) (sqrt(n^2 - sin^2 theta) - cos theta - (n - 1))
double phase_from_plate_angle(double theta_deg, const PhasePlate& plate);

}  // namespace mzfringe
