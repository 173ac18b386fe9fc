#include "mzfringe/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace mzfringe {

namespace {

Spatial spatial_from_char(char c) {
  switch (c) {
    case 'a': return Spatial::a;
    case 'b': return Spatial::b;
    case 'c': return Spatial::c;
    case 'd': return Spatial::d;
    case 'e': return Spatial::e;
    case 'f': return Spatial::f;
  }
  throw std::invalid_argument(std::string("unknown spatial label '") + c + "'");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::vector<CsvRow> csv_rows(const std::vector<CountRecord>& records, SettingKind kind,
                             const PhasePlate& plate) {
  std::vector<CsvRow> rows;
  rows.reserve(records.size());
  for (const CountRecord& r : records) {
    CsvRow row;
    if (kind == SettingKind::plate_angle) {
      row.setting_deg = r.setting;
      row.setting_rad = phase_from_plate_angle(r.setting, plate);
    } else {
      row.setting_rad = r.setting;
      row.setting_deg = r.setting * 180.0 / std::numbers::pi;
    }
    row.counts = r.counts;
    row.error = r.error;
    row.pulses = r.pulses;
    rows.push_back(row);
  }
  return rows;
}

std::vector<CsvRow> csv_rows_delay(const std::vector<CountRecord>& records) {
  std::vector<CsvRow> rows;
  rows.reserve(records.size());
  for (const CountRecord& r : records) {
    rows.push_back({r.setting, r.setting, r.counts, r.error, r.pulses});
  }
  return rows;
}

std::string to_csv(const std::vector<CsvRow>& rows) {
  std::string out = "setting_rad,setting_deg,counts,error,pulses\n";
  for (const CsvRow& r : rows) {
    out += format_double(r.setting_rad);
    out += ',';
    out += format_double(r.setting_deg);
    out += ',';
    out += std::to_string(r.counts);
    out += ',';
    out += format_double(r.error);
    out += ',';
    out += std::to_string(r.pulses);
    out += '\n';
  }
  return out;
}

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  if (line != "setting_rad,setting_deg,counts,error,pulses") {
    throw std::invalid_argument("unexpected CSV header: " + line);
  }
  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 5) {
      throw std::invalid_argument("CSV line " + std::to_string(lineno) +
                                  ": expected 5 fields, got " + std::to_string(fields.size()));
    }
    try {
      CsvRow row;
      row.setting_rad = std::stod(fields[0]);
      row.setting_deg = std::stod(fields[1]);
      row.counts = std::stoull(fields[2]);
      row.error = std::stod(fields[3]);
      row.pulses = std::stoull(fields[4]);
      rows.push_back(row);
    } catch (const std::exception&) {
      throw std::invalid_argument("CSV line " + std::to_string(lineno) + ": bad numeric field");
    }
  }
  return rows;
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::system_error(errno, std::generic_category(),
                              "cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw std::system_error(errno, std::generic_category(), "write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw std::system_error(ec, "rename to " + target.string() + " failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string state_to_json(const FockStateVector& state) {
  nlohmann::ordered_json j;
  j["modes"] = nlohmann::ordered_json::array();
  for (const ModeId& m : state.modes()) {
    j["modes"].push_back({{"spatial", std::string(1, to_char(m.spatial))},
                          {"temporal", m.temporal}});
  }
  j["amplitudes"] = nlohmann::ordered_json::array();
  for (const auto& [occ, amp] : state.amplitudes()) {
    j["amplitudes"].push_back({{"occupation", occ},
                               {"amplitude", {amp.real(), amp.imag()}}});
  }
  return j.dump(2) + "\n";
}

FockStateVector state_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  std::vector<ModeId> modes;
  for (const auto& m : j.at("modes")) {
    const std::string s = m.at("spatial").get<std::string>();
    if (s.size() != 1) throw std::invalid_argument("spatial label must be one character");
    modes.push_back(ModeId{spatial_from_char(s[0]), m.at("temporal").get<int>()});
  }
  FockStateVector state = FockStateVector::zero(modes);
  for (const auto& entry : j.at("amplitudes")) {
    const OccupationVector occ = entry.at("occupation").get<OccupationVector>();
    const auto& amp = entry.at("amplitude");
    state.set_amplitude(occ, Complex{amp.at(0).get<double>(), amp.at(1).get<double>()});
  }
  return state;
}

}  // namespace mzfringe
