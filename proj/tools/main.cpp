#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <system_error>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "mzfringe/errors.hpp"
#include "mzfringe/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

using namespace mzfringe;
using namespace mzfringe::cli;

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigurationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::system_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    // remaining library failures are numerical (ill-conditioned fit,
    // no-signal data, domain violations discovered during analysis)
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

std::vector<std::string> collect_overrides(const std::vector<std::string>& extras) {
  std::vector<std::string> overrides;
  for (const std::string& arg : extras) {
    if (arg.rfind("--", 0) != 0 || arg.find('=') == std::string::npos) {
      throw ConfigError("unrecognized argument '" + arg +
                        "' (overrides look like --section.key=value)");
    }
    overrides.push_back(arg.substr(2));
  }
  return overrides;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mzfringe: multi-photon Mach-Zehnder interference simulation and analysis"};
  app.require_subcommand(1);

  // run
  std::string config_path;
  int run_threads = 1;
  CLI::App* run = app.add_subcommand("run", "simulate one experiment from a config file");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--threads", run_threads, "worker threads for scan points");
  run->allow_extras();

  // demo
  DemoOptions demo_options;
  CLI::App* demo = app.add_subcommand(
      "demo", "run the five fringe cases plus the delay scan and write a combined report");
  demo->add_option("--out", demo_options.out_dir, "output directory");
  demo->add_option("--seed", demo_options.seed, "master seed");
  demo->add_option("--accumulation-scale", demo_options.accumulation_scale,
                   "scale factor on per-point accumulation times")
      ->check(CLI::PositiveNumber);
  demo->add_option("--threads", demo_options.threads, "worker threads for scan points");

  // threshold
  int thr_n = 0;
  double thr_eta = 0.0;
  double thr_v = 0.0;
  CLI::App* threshold =
      app.add_subcommand("threshold", "visibility threshold and precision limits");
  threshold->add_option("--n", thr_n, "photon number N")->required();
  threshold->add_option("--eta", thr_eta, "intrinsic efficiency eta_i")->required();
  CLI::Option* thr_v_opt =
      threshold->add_option("--visibility", thr_v, "assess this fringe visibility");

  // fit
  std::string fit_csv;
  int fit_n_fold = 1;
  double fit_eta = 0.0;
  std::string fit_out;
  CLI::App* fit = app.add_subcommand("fit", "fit a fringe dataset CSV");
  fit->add_option("csv", fit_csv, "dataset CSV (setting_rad column is used)")->required();
  fit->add_option("--n-fold", fit_n_fold, "fringe frequency multiplier N")->required();
  CLI::Option* fit_eta_opt =
      fit->add_option("--eta", fit_eta, "intrinsic efficiency for a sensitivity verdict");
  fit->add_option("--out", fit_out, "also write the result JSON to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (run->parsed()) {
    return guarded([&] {
      const std::string text = read_text_file(config_path);
      const RunConfig cfg = parse_config(text, collect_overrides(run->remaining()));
      const RunArtifacts artifacts = execute_run(cfg, run_threads);
      if (!artifacts.csv_path.empty()) std::cout << "dataset: " << artifacts.csv_path << "\n";
      std::cout << "summary: " << artifacts.json_path << "\n";
      if (artifacts.fit) {
        std::cout << "visibility: " << artifacts.fit->visibility << " +- "
                  << artifacts.fit->sigma_visibility << "\n";
      }
      if (artifacts.hom) {
        std::cout << "dip ratio: " << artifacts.hom->ratio << " +- "
                  << artifacts.hom->sigma_ratio << " (" << to_string(artifacts.hom->verdict)
                  << ")\n";
      }
      if (artifacts.sensitivity) {
        std::cout << "beats_sql: " << (artifacts.sensitivity->beats_sql ? "true" : "false")
                  << "\n";
      }
      return kExitOk;
    });
  }

  if (demo->parsed()) {
    return guarded([&] {
      const nlohmann::ordered_json report = run_demo(demo_options);
      std::cout << "report: " << report.at("report_path").get<std::string>() << "\n";
      for (const auto& [name, entry] : report.at("cases").items()) {
        std::cout << name << ": V = " << entry.at("fit").at("visibility").get<double>();
        if (entry.contains("sensitivity")) {
          std::cout << (entry.at("sensitivity").at("beats_sql").get<bool>()
                            ? "  (beats the SQL)"
                            : "  (does not beat the SQL)");
        }
        std::cout << "\n";
      }
      std::cout << "hom ratio: " << report.at("hom").at("ratio").get<double>() << " ("
                << report.at("hom").at("verdict").get<std::string>() << ")\n";
      return kExitOk;
    });
  }

  if (threshold->parsed()) {
    return guarded([&] {
      RunConfig cfg;
      cfg.experiment = Experiment::thresholds;
      cfg.thresholds.n = thr_n;
      cfg.thresholds.eta_i = thr_eta;
      if (thr_v_opt->count() > 0) cfg.thresholds.visibility = thr_v;
      if (thr_n < 1) throw ConfigError("invalid config at /thresholds/n: must be >= 1");
      if (!(thr_eta > 0.0 && thr_eta <= 1.0)) {
        throw ConfigError("invalid config at /thresholds/eta_i: must lie in (0, 1]");
      }
      const RunArtifacts artifacts = execute_run(cfg, 1);
      std::cout << artifacts.summary.at("thresholds").dump(2) << "\n";
      return kExitOk;
    });
  }

  if (fit->parsed()) {
    return guarded([&] {
      const std::vector<CsvRow> rows = [&] {
        try {
          return parse_csv(read_text_file(fit_csv));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("invalid dataset: ") + e.what());
        }
      }();
      FringeDataset dataset;
      dataset.n_fold = fit_n_fold;
      for (const CsvRow& row : rows) {
        dataset.records.push_back({row.setting_rad, row.counts, row.error, row.pulses});
      }
      const FitResult result = fit_fixed_frequency_sinusoid(dataset);
      nlohmann::ordered_json out;
      out["n_fold"] = fit_n_fold;
      out["fit"] = fit_to_json(result);
      if (fit_eta_opt->count() > 0) {
        out["sensitivity"] = sensitivity_to_json(
            assess(std::min(result.visibility, 1.0), fit_n_fold, fit_eta));
        out["sensitivity"]["visibility_fitted"] = result.visibility;
      }
      const std::string text = out.dump(2) + "\n";
      std::cout << text;
      if (!fit_out.empty()) write_text_file_atomic(fit_out, text);
      return kExitOk;
    });
  }

  return kExitConfig;
}
