#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mzfringe::cli {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("invalid config at " + path + ": " + what);
}

void check_known_keys(const json& j, const std::string& path,
                      const std::set<std::string>& known) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) fail(path + "/" + key, "unknown key");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

template <typename T>
void read_field(const json& j, const std::string& section, const char* key, T& out) {
  if (!j.contains(key)) return;
  const std::string path = section + "/" + key;
  const json& v = j.at(key);
  if constexpr (std::is_same_v<T, double>) {
    out = get_number(v, path);
  } else if constexpr (std::is_same_v<T, int>) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    out = v.get<int>();
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    if (!v.is_number_unsigned() && !v.is_number_integer()) fail(path, "expected an integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0) fail(path, "must be non-negative");
    out = v.get<std::uint64_t>();
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) fail(path, "expected a boolean");
    out = v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) fail(path, "expected a string");
    out = v.get<std::string>();
  }
}

SourceModel parse_source(const json& j) {
  SourceModel s;
  check_known_keys(j, "/source",
                   {"p11", "p22", "p33", "repetition_interval_ns", "coherence_length_um",
                    "wavelength_nm", "distinguishability_x"});
  read_field(j, "/source", "p11", s.p11);
  read_field(j, "/source", "p22", s.p22);
  read_field(j, "/source", "p33", s.p33);
  read_field(j, "/source", "repetition_interval_ns", s.repetition_interval_ns);
  read_field(j, "/source", "coherence_length_um", s.coherence_length_um);
  read_field(j, "/source", "wavelength_nm", s.wavelength_nm);
  read_field(j, "/source", "distinguishability_x", s.distinguishability_x);
  for (auto [name, p] : {std::pair{"p11", s.p11}, {"p22", s.p22}, {"p33", s.p33}}) {
    if (!(p >= 0.0 && p <= 1.0)) fail(std::string("/source/") + name, "must lie in [0, 1]");
  }
  if (s.p11 + s.p22 + s.p33 > 1.0) fail("/source", "emission probabilities sum above 1");
  if (s.repetition_interval_ns <= 0.0) fail("/source/repetition_interval_ns", "must be positive");
  if (s.coherence_length_um <= 0.0) fail("/source/coherence_length_um", "must be positive");
  if (s.wavelength_nm <= 0.0) fail("/source/wavelength_nm", "must be positive");
  if (!(s.distinguishability_x >= 0.0 && s.distinguishability_x <= 1.0)) {
    fail("/source/distinguishability_x", "must lie in [0, 1]");
  }
  return s;
}

DetectorModel parse_detector(const json& j) {
  DetectorModel d;
  check_known_keys(j, "/detector",
                   {"efficiency", "cascade_fanout", "number_resolving", "dark_rate"});
  read_field(j, "/detector", "efficiency", d.efficiency);
  read_field(j, "/detector", "cascade_fanout", d.cascade_fanout);
  read_field(j, "/detector", "number_resolving", d.number_resolving);
  read_field(j, "/detector", "dark_rate", d.dark_rate);
  if (!(d.efficiency >= 0.0 && d.efficiency <= 1.0)) {
    fail("/detector/efficiency", "must lie in [0, 1]");
  }
  if (d.cascade_fanout < 1) fail("/detector/cascade_fanout", "must be >= 1");
  if (!(d.dark_rate >= 0.0 && d.dark_rate < 1.0)) fail("/detector/dark_rate", "must lie in [0, 1)");
  return d;
}

PhasePlate parse_plate(const json& j) {
  PhasePlate p;
  check_known_keys(j, "/scan/plate", {"thickness_mm", "refractive_index", "wavelength_nm"});
  read_field(j, "/scan/plate", "thickness_mm", p.thickness_mm);
  read_field(j, "/scan/plate", "refractive_index", p.refractive_index);
  read_field(j, "/scan/plate", "wavelength_nm", p.wavelength_nm);
  if (p.thickness_mm <= 0.0) fail("/scan/plate/thickness_mm", "must be positive");
  if (p.refractive_index < 1.0) fail("/scan/plate/refractive_index", "must be >= 1");
  if (p.wavelength_nm <= 0.0) fail("/scan/plate/wavelength_nm", "must be positive");
  return p;
}

json parse_override_value(const std::string& text) {
  const json v = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (v.is_discarded()) return json(text);  // bare strings stay strings
  return v;
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::fringe_single: return "fringe_single";
    case Experiment::fringe_two: return "fringe_two";
    case Experiment::fringe_four: return "fringe_four";
    case Experiment::fringe_dist_two: return "fringe_dist_two";
    case Experiment::fringe_dist_four: return "fringe_dist_four";
    case Experiment::hom_delay: return "hom_delay";
    case Experiment::thresholds: return "thresholds";
  }
  return "unknown";
}

Experiment experiment_from_string(const std::string& name) {
  for (Experiment e : {Experiment::fringe_single, Experiment::fringe_two,
                       Experiment::fringe_four, Experiment::fringe_dist_two,
                       Experiment::fringe_dist_four, Experiment::hom_delay,
                       Experiment::thresholds}) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("invalid config at /experiment: unknown experiment '" + name + "'");
}

std::vector<double> linspace(double start, double stop, int count) {
  if (count < 2) throw ConfigError("invalid config at /scan/linspace/count: must be >= 2");
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = start + (stop - start) * i / (count - 1);
  return v;
}

RunConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(json_text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("invalid config at /: expected a JSON object");

  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("invalid override '" + ov + "': expected section.key=value");
    }
    std::string pointer = "/" + ov.substr(0, eq);
    std::replace(pointer.begin(), pointer.end(), '.', '/');
    try {
      j[json::json_pointer(pointer)] = parse_override_value(ov.substr(eq + 1));
    } catch (const json::exception& e) {
      throw ConfigError("invalid override '" + ov + "': " + e.what());
    }
  }

  check_known_keys(j, "", {"experiment", "source", "detector", "scan", "thresholds", "output"});
  if (!j.contains("experiment")) throw ConfigError("invalid config at /experiment: required");
  if (!j.at("experiment").is_string()) {
    throw ConfigError("invalid config at /experiment: expected a string");
  }

  RunConfig cfg;
  cfg.experiment = experiment_from_string(j.at("experiment").get<std::string>());
  if (j.contains("source")) cfg.source = parse_source(j.at("source"));
  if (j.contains("detector")) cfg.detector = parse_detector(j.at("detector"));

  if (j.contains("thresholds")) {
    const json& t = j.at("thresholds");
    check_known_keys(t, "/thresholds", {"n", "eta_i", "visibility"});
    read_field(t, "/thresholds", "n", cfg.thresholds.n);
    read_field(t, "/thresholds", "eta_i", cfg.thresholds.eta_i);
    if (t.contains("visibility")) {
      cfg.thresholds.visibility = get_number(t.at("visibility"), "/thresholds/visibility");
    }
    if (cfg.thresholds.n < 1) fail("/thresholds/n", "must be >= 1");
    if (!(cfg.thresholds.eta_i > 0.0 && cfg.thresholds.eta_i <= 1.0)) {
      fail("/thresholds/eta_i", "must lie in (0, 1]");
    }
    if (cfg.thresholds.visibility &&
        !(*cfg.thresholds.visibility > 0.0 && *cfg.thresholds.visibility <= 1.0)) {
      fail("/thresholds/visibility", "must lie in (0, 1]");
    }
  }

  if (cfg.experiment != Experiment::thresholds) {
    if (!j.contains("scan")) throw ConfigError("invalid config at /scan: required");
    const json& s = j.at("scan");
    check_known_keys(s, "/scan",
                     {"settings", "linspace", "accumulation_time_s", "seed", "setting_kind",
                      "plate", "emission_sim_cap"});
    if (s.contains("settings") == s.contains("linspace")) {
      fail("/scan", "exactly one of 'settings' and 'linspace' is required");
    }
    if (s.contains("settings")) {
      if (!s.at("settings").is_array() || s.at("settings").empty()) {
        fail("/scan/settings", "expected a non-empty array");
      }
      for (const json& v : s.at("settings")) {
        cfg.settings.push_back(get_number(v, "/scan/settings"));
      }
    } else {
      const json& ls = s.at("linspace");
      check_known_keys(ls, "/scan/linspace", {"start", "stop", "count"});
      for (const char* k : {"start", "stop", "count"}) {
        if (!ls.contains(k)) fail(std::string("/scan/linspace/") + k, "required");
      }
      int count = 0;
      read_field(ls, "/scan/linspace", "count", count);
      cfg.settings = linspace(get_number(ls.at("start"), "/scan/linspace/start"),
                              get_number(ls.at("stop"), "/scan/linspace/stop"), count);
    }
    read_field(s, "/scan", "accumulation_time_s", cfg.accumulation_time_s);
    read_field(s, "/scan", "seed", cfg.seed);
    read_field(s, "/scan", "emission_sim_cap", cfg.emission_sim_cap);
    if (cfg.accumulation_time_s <= 0.0) fail("/scan/accumulation_time_s", "must be positive");
    if (s.contains("setting_kind")) {
      const std::string kind = s.at("setting_kind").is_string()
                                   ? s.at("setting_kind").get<std::string>()
                                   : std::string();
      if (kind == "phase") {
        cfg.setting_kind = CfgSettingKind::phase;
      } else if (kind == "plate_angle") {
        cfg.setting_kind = CfgSettingKind::plate_angle;
      } else if (kind == "delay_ps") {
        cfg.setting_kind = CfgSettingKind::delay_ps;
      } else {
        fail("/scan/setting_kind", "expected phase, plate_angle or delay_ps");
      }
    } else if (cfg.experiment == Experiment::hom_delay) {
      cfg.setting_kind = CfgSettingKind::delay_ps;
    }
    if (s.contains("plate")) cfg.plate = parse_plate(s.at("plate"));

    if (cfg.experiment == Experiment::hom_delay &&
        cfg.setting_kind != CfgSettingKind::delay_ps) {
      fail("/scan/setting_kind", "hom_delay scans take delays (delay_ps)");
    }
    if (cfg.experiment != Experiment::hom_delay &&
        cfg.setting_kind == CfgSettingKind::delay_ps) {
      fail("/scan/setting_kind", "fringe scans take phase or plate_angle settings");
    }
    if (cfg.setting_kind == CfgSettingKind::plate_angle) {
      for (double a : cfg.settings) {
        if (!(std::abs(a) < 90.0)) fail("/scan/settings", "plate angles must satisfy |angle| < 90");
      }
    }
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    check_known_keys(o, "/output", {"csv", "json"});
    read_field(o, "/output", "csv", cfg.output.csv);
    read_field(o, "/output", "json", cfg.output.json);
  }
  return cfg;
}

nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(cfg.experiment);
  j["source"] = {{"p11", cfg.source.p11},
                 {"p22", cfg.source.p22},
                 {"p33", cfg.source.p33},
                 {"repetition_interval_ns", cfg.source.repetition_interval_ns},
                 {"coherence_length_um", cfg.source.coherence_length_um},
                 {"wavelength_nm", cfg.source.wavelength_nm},
                 {"distinguishability_x", cfg.source.distinguishability_x}};
  j["detector"] = {{"efficiency", cfg.detector.efficiency},
                   {"cascade_fanout", cfg.detector.cascade_fanout},
                   {"number_resolving", cfg.detector.number_resolving},
                   {"dark_rate", cfg.detector.dark_rate}};
  if (cfg.experiment != Experiment::thresholds) {
    nlohmann::ordered_json scan;
    scan["settings"] = cfg.settings;
    scan["accumulation_time_s"] = cfg.accumulation_time_s;
    scan["seed"] = cfg.seed;
    scan["emission_sim_cap"] = cfg.emission_sim_cap;
    switch (cfg.setting_kind) {
      case CfgSettingKind::phase: scan["setting_kind"] = "phase"; break;
      case CfgSettingKind::plate_angle: scan["setting_kind"] = "plate_angle"; break;
      case CfgSettingKind::delay_ps: scan["setting_kind"] = "delay_ps"; break;
    }
    scan["plate"] = {{"thickness_mm", cfg.plate.thickness_mm},
                     {"refractive_index", cfg.plate.refractive_index},
                     {"wavelength_nm", cfg.plate.wavelength_nm}};
    j["scan"] = scan;
  } else {
    nlohmann::ordered_json t;
    t["n"] = cfg.thresholds.n;
    t["eta_i"] = cfg.thresholds.eta_i;
    if (cfg.thresholds.visibility) t["visibility"] = *cfg.thresholds.visibility;
    j["thresholds"] = t;
  }
  nlohmann::ordered_json out;
  out["csv"] = cfg.output.csv;
  out["json"] = cfg.output.json;
  j["output"] = out;
  return j;
}

}  // namespace mzfringe::cli
