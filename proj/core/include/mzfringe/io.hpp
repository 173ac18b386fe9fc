// io.hpp
// Dataset CSV format and the JSON text form of Fock states used by
// golden-file tests. CSV schema (fixed):
//   setting_rad,setting_deg,counts,error,pulses
// '.' decimal point, LF line endings, floats with 17 significant digits.

#pragma once

#include <string>
#include <vector>

#include "mzfringe/fock.hpp"
#include "mzfringe/simulator.hpp"

namespace mzfringe {

struct CsvRow {
  double setting_rad{0.0};
  double setting_deg{0.0};
  std::uint64_t counts{0};
  double error{0.0};
  std::uint64_t pulses{0};
};

/// Rows for a fringe scan: phase settings carry (rad, rad->deg); plate
/// angle settings carry (phase_from_plate_angle(angle), angle). Delay
/// scans carry the delay in picoseconds in both columns.
std::vector<CsvRow> csv_rows(const std::vector<CountRecord>& records, SettingKind kind,
                             const PhasePlate& plate);
std::vector<CsvRow> csv_rows_delay(const std::vector<CountRecord>& records);

std::string to_csv(const std::vector<CsvRow>& rows);
std::vector<CsvRow> parse_csv(const std::string& text);

void write_text_file_atomic(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// JSON text form of a state: mode list plus amplitude table with
/// [re, im] pairs, deterministically ordered.
std::string state_to_json(const FockStateVector& state);
FockStateVector state_from_json(const std::string& text);

/// 17-significant-digit decimal rendering used throughout the CSV/JSON
/// outputs (round-trips doubles exactly).
std::string format_double(double value);

}  // namespace mzfringe
