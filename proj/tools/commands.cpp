#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>

#include "mzfringe/io.hpp"

namespace mzfringe::cli {

namespace fs = std::filesystem;

std::string default_output_dir() {
  if (const char* env = std::getenv("MZFRINGE_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

namespace {

std::string resolve_output_path(const std::string& path) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(default_output_dir()) / p).string();
}

ScanMode scan_mode_for(Experiment e) {
  switch (e) {
    case Experiment::fringe_single: return ScanMode::fringe_single;
    case Experiment::fringe_two: return ScanMode::fringe_two;
    case Experiment::fringe_four: return ScanMode::fringe_four;
    case Experiment::fringe_dist_two: return ScanMode::fringe_dist_two;
    case Experiment::fringe_dist_four: return ScanMode::fringe_dist_four;
    case Experiment::hom_delay: return ScanMode::hom_delay;
    case Experiment::thresholds: break;
  }
  throw ConfigError("experiment has no scan mode");
}

nlohmann::ordered_json limits_to_json(int n) {
  const PrecisionLimits lim = limits(n);
  return {{"sql", lim.sql}, {"heisenberg", lim.heisenberg}};
}

}  // namespace

std::pair<FringeInput, FringePattern> fringe_case_for(Experiment experiment) {
  switch (experiment) {
    case Experiment::fringe_single:
      return {FringeInput::single_photon, FringePattern::one_in_e};
    case Experiment::fringe_two:
      return {FringeInput::photon_pair, FringePattern::one_in_e_one_in_f};
    case Experiment::fringe_four:
      return {FringeInput::double_pair, FringePattern::three_in_e_one_in_f};
    case Experiment::fringe_dist_two:
      return {FringeInput::delayed_pair, FringePattern::two_in_e};
    case Experiment::fringe_dist_four:
      return {FringeInput::delayed_double_pair, FringePattern::three_in_e_one_in_f};
    default:
      throw ConfigError("experiment is not a fringe scan");
  }
}

nlohmann::ordered_json fit_to_json(const FitResult& fit) {
  return {{"offset", fit.offset},
          {"c_cos", fit.c_cos},
          {"c_sin", fit.c_sin},
          {"visibility", fit.visibility},
          {"phase_origin", fit.phase_origin},
          {"sigma_visibility", fit.sigma_visibility},
          {"chi_squared", fit.chi_squared},
          {"dof", fit.dof}};
}

nlohmann::ordered_json sensitivity_to_json(const SensitivityReport& r) {
  return {{"n", r.n},
          {"eta_i", r.eta_i},
          {"visibility", r.visibility},
          {"v_threshold", r.v_threshold},
          {"precision", r.precision},
          {"sql_limit", r.sql_limit},
          {"heisenberg_limit", r.heisenberg_limit},
          {"beats_sql", r.beats_sql},
          {"margin", r.margin}};
}

nlohmann::ordered_json hom_to_json(const HomResult& hom) {
  return {{"ratio", hom.ratio},
          {"sigma_ratio", hom.sigma_ratio},
          {"verdict", to_string(hom.verdict)}};
}

RunArtifacts execute_run(const RunConfig& config, int threads) {
  RunArtifacts artifacts;
  nlohmann::ordered_json summary;
  summary["config"] = config_to_json(config);

  if (config.experiment == Experiment::thresholds) {
    const ThresholdQuery& q = config.thresholds;
    nlohmann::ordered_json t;
    t["n"] = q.n;
    t["eta_i"] = q.eta_i;
    t["v_threshold"] = visibility_threshold(q.n, q.eta_i);
    t["limits"] = limits_to_json(q.n);
    if (q.visibility) {
      const SensitivityReport report = assess(*q.visibility, q.n, q.eta_i);
      t["assessment"] = sensitivity_to_json(report);
      artifacts.sensitivity = report;
    }
    summary["thresholds"] = t;
  } else if (config.experiment == Experiment::hom_delay) {
    const std::vector<CountRecord> records =
        simulate_hom_scan(config.source, config.detector, config.settings,
                          config.accumulation_time_s, config.seed, threads,
                          config.emission_sim_cap);
    const std::string csv = to_csv(csv_rows_delay(records));
    artifacts.csv_path = resolve_output_path(
        config.output.csv.empty() ? to_string(config.experiment) + ".csv" : config.output.csv);
    write_text_file_atomic(artifacts.csv_path, csv);

    const HomResult hom = hom_dip_ratio(records, coherence_time_ps(config.source));
    artifacts.hom = hom;
    summary["hom"] = hom_to_json(hom);
    summary["hom"]["reference_ratios"] = {{"pure_22", 2.0 / 3.0},
                                          {"mixture_midpoint", 1.0},
                                          {"pure_1111", 4.0 / 3.0}};
  } else {
    ScanConfig scan;
    scan.settings = config.settings;
    scan.accumulation_time_s = config.accumulation_time_s;
    scan.seed = config.seed;
    scan.mode = scan_mode_for(config.experiment);
    scan.setting_kind = config.setting_kind == CfgSettingKind::plate_angle
                            ? SettingKind::plate_angle
                            : SettingKind::phase;
    scan.plate = config.plate;
    scan.threads = threads;
    scan.emission_sim_cap = config.emission_sim_cap;

    const std::vector<CountRecord> records =
        simulate_fringe_scan(config.source, config.detector, scan);
    const std::vector<CsvRow> rows = csv_rows(records, scan.setting_kind, scan.plate);
    artifacts.csv_path = resolve_output_path(
        config.output.csv.empty() ? to_string(config.experiment) + ".csv" : config.output.csv);
    write_text_file_atomic(artifacts.csv_path, to_csv(rows));

    const auto [input, pattern] = fringe_case_for(config.experiment);
    const FringeModel model = analytic_fringe_model(input, pattern);

    FringeDataset dataset;
    dataset.n_fold = model.n_fold;
    for (const CsvRow& row : rows) {
      dataset.records.push_back(
          {row.setting_rad, row.counts, row.error, row.pulses});
    }
    const FitResult fit = fit_fixed_frequency_sinusoid(dataset);
    artifacts.fit = fit;
    summary["fringe"] = {{"n_fold", model.n_fold}, {"eta_i", model.eta_i}};
    summary["fit"] = fit_to_json(fit);

    if (fit.visibility > 0.0) {
      // fitted visibilities can statistically overshoot 1; the threshold
      // comparison is made at the physical bound
      const SensitivityReport report =
          assess(std::min(fit.visibility, 1.0), model.n_fold, model.eta_i);
      artifacts.sensitivity = report;
      summary["sensitivity"] = sensitivity_to_json(report);
      summary["sensitivity"]["visibility_fitted"] = fit.visibility;
    }
  }

  artifacts.json_path = resolve_output_path(
      config.output.json.empty() ? to_string(config.experiment) + ".json" : config.output.json);
  artifacts.summary = summary;
  write_text_file_atomic(artifacts.json_path, summary.dump(2) + "\n");
  return artifacts;
}

nlohmann::ordered_json run_demo(const DemoOptions& options) {
  const std::string out_dir = options.out_dir.empty() ? default_output_dir() : options.out_dir;

  struct DemoCase {
    Experiment experiment;
    double accumulation_s;
  };
  // accumulation times per point follow the experimental runs: 1 s for
  // the single-photon and delayed-pair fringes, 300 s for the rest
  const DemoCase cases[] = {
      {Experiment::fringe_single, 1.0},
      {Experiment::fringe_two, 300.0},
      {Experiment::fringe_four, 300.0},
      {Experiment::fringe_dist_two, 1.0},
      {Experiment::fringe_dist_four, 300.0},
  };

  nlohmann::ordered_json report;
  report["seed"] = options.seed;
  report["accumulation_scale"] = options.accumulation_scale;
  report["output_dir"] = out_dir;
  report["cases"] = nlohmann::ordered_json::object();

  std::optional<bool> four_photon_beats;
  std::optional<bool> dist_four_beats;

  for (const DemoCase& c : cases) {
    RunConfig cfg;
    cfg.experiment = c.experiment;
    cfg.settings = linspace(0.0, 2.0 * std::numbers::pi * 31.0 / 32.0, 32);
    cfg.accumulation_time_s = c.accumulation_s * options.accumulation_scale;
    cfg.seed = options.seed;
    cfg.output.csv = (fs::path(out_dir) / (to_string(c.experiment) + ".csv")).string();
    cfg.output.json = (fs::path(out_dir) / (to_string(c.experiment) + ".json")).string();
    const RunArtifacts artifacts = execute_run(cfg, options.threads);

    nlohmann::ordered_json entry;
    entry["csv"] = artifacts.csv_path;
    entry["fit"] = fit_to_json(*artifacts.fit);
    if (artifacts.sensitivity) {
      entry["sensitivity"] = sensitivity_to_json(*artifacts.sensitivity);
      if (c.experiment == Experiment::fringe_four) {
        four_photon_beats = artifacts.sensitivity->beats_sql;
      }
      if (c.experiment == Experiment::fringe_dist_four) {
        dist_four_beats = artifacts.sensitivity->beats_sql;
      }
    }
    report["cases"][to_string(c.experiment)] = entry;
  }

  {
    RunConfig cfg;
    cfg.experiment = Experiment::hom_delay;
    cfg.setting_kind = CfgSettingKind::delay_ps;
    cfg.settings = linspace(-3.0, 3.0, 25);
    cfg.accumulation_time_s = 60.0 * options.accumulation_scale;
    cfg.seed = options.seed;
    cfg.output.csv = (fs::path(out_dir) / "hom_delay.csv").string();
    cfg.output.json = (fs::path(out_dir) / "hom_delay.json").string();
    const RunArtifacts artifacts = execute_run(cfg, options.threads);
    report["hom"] = artifacts.summary["hom"];
  }

  report["headline"] = {
      {"four_photon_beats_sql", four_photon_beats ? nlohmann::ordered_json(*four_photon_beats)
                                                  : nlohmann::ordered_json(nullptr)},
      {"distinguishable_four_photon_beats_sql",
       dist_four_beats ? nlohmann::ordered_json(*dist_four_beats)
                       : nlohmann::ordered_json(nullptr)},
      {"thresholds",
       {{"two_photon", visibility_threshold(2, 1.0)},
        {"four_photon", visibility_threshold(4, 3.0 / 8.0)},
        {"distinguishable_two_photon", visibility_threshold(2, 1.0 / 4.0)},
        {"distinguishable_four_photon", visibility_threshold(4, 1.0 / 8.0)}}},
      {"intrinsic_efficiencies",
       {{"two_photon", 1.0},
        {"four_photon", 3.0 / 8.0},
        {"distinguishable_two_photon", 1.0 / 4.0},
        {"distinguishable_four_photon", 1.0 / 8.0}}},
  };

  const std::string report_path = (fs::path(out_dir) / "demo_report.json").string();
  write_text_file_atomic(report_path, report.dump(2) + "\n");
  report["report_path"] = report_path;
  return report;
}

}  // namespace mzfringe::cli
