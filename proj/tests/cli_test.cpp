#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "config.hpp"
#include "mzfringe/io.hpp"

using namespace mzfringe;
using namespace mzfringe::cli;
namespace fs = std::filesystem;

namespace {

const char* cli_path() { return MZFRINGE_CLI_PATH; }

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("mzfringe_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, const fs::path& stdout_file = {},
            const fs::path& stderr_file = {}) {
  std::string cmd = std::string(cli_path()) + " " + args;
  if (!stdout_file.empty()) cmd += " > " + stdout_file.string();
  if (!stderr_file.empty()) cmd += " 2> " + stderr_file.string();
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string small_fringe_config(const fs::path& dir) {
  nlohmann::json cfg;
  cfg["experiment"] = "fringe_single";
  cfg["source"] = {{"p11", 0.02}, {"p22", 0.0}, {"p33", 0.0}};
  cfg["scan"] = {{"linspace", {{"start", 0.0}, {"stop", 5.8904862254808625}, {"count", 32}}},
                 {"accumulation_time_s", 0.002},
                 {"seed", 5}};
  cfg["output"] = {{"csv", (dir / "scan.csv").string()},
                   {"json", (dir / "scan.json").string()}};
  return cfg.dump(2);
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("threshold subcommand prints thresholds and assessments") {
  const fs::path dir = fresh_dir("threshold");
  const fs::path out = dir / "out.json";
  REQUIRE(run_cli("threshold --n 4 --eta 0.375", out) == 0);
  const nlohmann::json t = nlohmann::json::parse(read_text_file(out.string()));
  CHECK(std::abs(t.at("v_threshold").get<double>() - 0.8164965809277261) < 1e-12);
  CHECK(t.at("limits").at("sql").get<double>() == doctest::Approx(0.5));

  REQUIRE(run_cli("threshold --n 4 --eta 0.375 --visibility 0.91", out) == 0);
  const nlohmann::json t2 = nlohmann::json::parse(read_text_file(out.string()));
  CHECK(t2.at("assessment").at("beats_sql").get<bool>());

  REQUIRE(run_cli("threshold --n 4 --eta 0.125 --visibility 0.87", out) == 0);
  const nlohmann::json t3 = nlohmann::json::parse(read_text_file(out.string()));
  CHECK_FALSE(t3.at("assessment").at("beats_sql").get<bool>());
}

TEST_CASE("run writes a dataset, a summary and a faithful config echo") {
  const fs::path dir = fresh_dir("run");
  const fs::path cfg_path = dir / "config.json";
  const std::string cfg_text = small_fringe_config(dir);
  write_text_file_atomic(cfg_path.string(), cfg_text);

  REQUIRE(run_cli("run " + cfg_path.string()) == 0);
  REQUIRE(fs::exists(dir / "scan.csv"));
  REQUIRE(fs::exists(dir / "scan.json"));

  const std::vector<CsvRow> rows = parse_csv(read_text_file((dir / "scan.csv").string()));
  CHECK(rows.size() == 32);
  for (const CsvRow& r : rows) {
    CHECK(r.error == doctest::Approx(std::sqrt(double(r.counts))));
    CHECK(r.pulses == 153846);  // 0.002 s at 13 ns
  }

  const nlohmann::json summary =
      nlohmann::json::parse(read_text_file((dir / "scan.json").string()));
  CHECK(summary.at("fit").at("visibility").get<double>() > 0.5);
  CHECK(summary.contains("sensitivity"));

  // the echoed config must re-parse to the same RunConfig
  const RunConfig original = parse_config(cfg_text);
  const RunConfig echoed = parse_config(summary.at("config").dump());
  CHECK(echoed == original);
}

TEST_CASE("identical seeds give identical bytes") {
  const fs::path dir = fresh_dir("determinism");
  const fs::path cfg_path = dir / "config.json";
  write_text_file_atomic(cfg_path.string(), small_fringe_config(dir));

  REQUIRE(run_cli("run " + cfg_path.string()) == 0);
  const std::string csv1 = read_text_file((dir / "scan.csv").string());
  const std::string json1 = read_text_file((dir / "scan.json").string());
  REQUIRE(run_cli("run " + cfg_path.string()) == 0);
  CHECK(read_text_file((dir / "scan.csv").string()) == csv1);
  CHECK(read_text_file((dir / "scan.json").string()) == json1);
}

TEST_CASE("flag overrides win over the file") {
  const fs::path dir = fresh_dir("overrides");
  const fs::path cfg_path = dir / "config.json";
  write_text_file_atomic(cfg_path.string(), small_fringe_config(dir));

  REQUIRE(run_cli("run " + cfg_path.string() +
                  " --scan.seed=7 --detector.efficiency=1.0") == 0);
  const nlohmann::json summary =
      nlohmann::json::parse(read_text_file((dir / "scan.json").string()));
  CHECK(summary.at("config").at("scan").at("seed").get<std::uint64_t>() == 7);
  CHECK(summary.at("config").at("detector").at("efficiency").get<double>() == 1.0);
}

TEST_CASE("exit codes") {
  const fs::path dir = fresh_dir("exits");
  SUBCASE("missing config file is an i/o failure") {
    CHECK(run_cli("run " + (dir / "nope.json").string(), {}, dir / "err.txt") == 3);
  }
  SUBCASE("malformed json is a config failure with a line number") {
    const fs::path cfg = dir / "bad.json";
    write_text_file_atomic(cfg.string(), "{\n  \"experiment\": \n}\n");
    CHECK(run_cli("run " + cfg.string(), {}, dir / "err.txt") == 2);
    const std::string err = read_text_file((dir / "err.txt").string());
    CHECK(err.find("line") != std::string::npos);
  }
  SUBCASE("unknown keys are config failures") {
    nlohmann::json cfg = nlohmann::json::parse(small_fringe_config(dir));
    cfg["source"]["p44"] = 0.1;
    const fs::path cfg_path = dir / "unknown.json";
    write_text_file_atomic(cfg_path.string(), cfg.dump());
    CHECK(run_cli("run " + cfg_path.string(), {}, dir / "err.txt") == 2);
    const std::string err = read_text_file((dir / "err.txt").string());
    CHECK(err.find("p44") != std::string::npos);
  }
  SUBCASE("invalid values are config failures") {
    nlohmann::json cfg = nlohmann::json::parse(small_fringe_config(dir));
    cfg["detector"]["efficiency"] = 1.5;
    const fs::path cfg_path = dir / "badval.json";
    write_text_file_atomic(cfg_path.string(), cfg.dump());
    CHECK(run_cli("run " + cfg_path.string(), {}, dir / "err.txt") == 2);
  }
  SUBCASE("degenerate fits are numerical failures") {
    nlohmann::json cfg = nlohmann::json::parse(small_fringe_config(dir));
    cfg["scan"].erase("linspace");
    cfg["scan"]["settings"] = {0.0, 0.0, 0.0, 0.0, 0.0, 6.2831853};
    const fs::path cfg_path = dir / "degenerate.json";
    write_text_file_atomic(cfg_path.string(), cfg.dump());
    CHECK(run_cli("run " + cfg_path.string(), {}, dir / "err.txt") == 4);
  }
  SUBCASE("delay experiments reject phase settings") {
    nlohmann::json cfg = nlohmann::json::parse(small_fringe_config(dir));
    cfg["experiment"] = "hom_delay";
    cfg["scan"]["setting_kind"] = "phase";
    const fs::path cfg_path = dir / "hom_phase.json";
    write_text_file_atomic(cfg_path.string(), cfg.dump());
    CHECK(run_cli("run " + cfg_path.string(), {}, dir / "err.txt") == 2);
  }
}

TEST_CASE("fit subcommand reads datasets back") {
  const fs::path dir = fresh_dir("fit");
  const fs::path cfg_path = dir / "config.json";
  write_text_file_atomic(cfg_path.string(), small_fringe_config(dir));
  REQUIRE(run_cli("run " + cfg_path.string()) == 0);

  const fs::path out = dir / "fit.json";
  REQUIRE(run_cli("fit " + (dir / "scan.csv").string() + " --n-fold 1 --eta 1.0", out) == 0);
  const nlohmann::json fit = nlohmann::json::parse(read_text_file(out.string()));
  CHECK(fit.at("fit").at("visibility").get<double>() > 0.5);
  CHECK(fit.at("sensitivity").contains("beats_sql"));

  SUBCASE("missing csv is an i/o failure") {
    CHECK(run_cli("fit " + (dir / "absent.csv").string() + " --n-fold 1", {},
                  dir / "err.txt") == 3);
  }
}

TEST_CASE("hom_delay runs end to end through the cli") {
  const fs::path dir = fresh_dir("hom");
  nlohmann::json cfg;
  cfg["experiment"] = "hom_delay";
  cfg["source"] = {{"p11", 0.0}, {"p22", 0.08}, {"p33", 0.0}, {"distinguishability_x", 0.0}};
  cfg["scan"] = {{"settings", {0.0, -2.5, 2.5, -3.0, 3.0}},
                 {"accumulation_time_s", 0.02},
                 {"seed", 11}};
  cfg["output"] = {{"csv", (dir / "hom.csv").string()}, {"json", (dir / "hom.json").string()}};
  const fs::path cfg_path = dir / "config.json";
  write_text_file_atomic(cfg_path.string(), cfg.dump(2));

  REQUIRE(run_cli("run " + cfg_path.string()) == 0);
  const nlohmann::json summary =
      nlohmann::json::parse(read_text_file((dir / "hom.json").string()));
  CHECK(summary.at("hom").at("verdict").get<std::string>() == "pure_22");
}

TEST_CASE("relative outputs land in the directory named by the environment") {
  const fs::path dir = fresh_dir("envdir");
  setenv("MZFRINGE_OUTPUT_DIR", dir.c_str(), 1);
  nlohmann::json cfg = nlohmann::json::parse(small_fringe_config(dir));
  cfg["output"] = {{"csv", "rel.csv"}, {"json", "rel.json"}};
  const fs::path cfg_path = dir / "config.json";
  write_text_file_atomic(cfg_path.string(), cfg.dump());
  const int code = run_cli("run " + cfg_path.string());
  unsetenv("MZFRINGE_OUTPUT_DIR");
  REQUIRE(code == 0);
  CHECK(fs::exists(dir / "rel.csv"));
  CHECK(fs::exists(dir / "rel.json"));
}

TEST_SUITE_END();
