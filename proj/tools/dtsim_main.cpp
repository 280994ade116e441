#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>

#include "dtsim/calibration.hpp"
#include "dtsim/errors.hpp"
#include "dtsim/metrics.hpp"
#include "dtsim/scenario.hpp"
#include "dtsim/simulation.hpp"

namespace fs = std::filesystem;
using namespace dtsim;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;
constexpr int kInfeasible = 3;

std::optional<ScenarioConfig> load_or_report(const std::string& path) {
  if (path.empty()) return ScenarioConfig{};
  ParseResult r = load_scenario(path);
  for (const auto& e : r.errors) std::cerr << path << ": " << e.to_string() << "\n";
  return r.config;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot write " + p.string());
  return os;
}

struct ModeOutput {
  RunResult result;
  fs::path records_path;
};

ModeOutput run_mode(ScenarioConfig cfg, DeploymentMode mode, const fs::path& out, const std::string& format) {
  cfg.deployment = mode;
  Simulation sim(cfg);
  ModeOutput o{sim.run(), out / (std::string(to_string(mode)) + ".records." + format)};
  {
    auto os = open_out(o.records_path);
    if (format == "csv") write_records_csv(os, o.result.records);
    else write_records_json(os, o.result.records);
    if (!os.flush()) throw IoError("write failed: " + o.records_path.string());
  }
  auto os = open_out(out / (std::string(to_string(mode)) + ".summary.json"));
  os << summary_to_json(o.result.summary) << "\n";
  if (!os.flush()) throw IoError("write failed for summary");
  return o;
}

std::vector<DemandRecord> reload(const ModeOutput& o, const std::string& format) {
  if (format != "csv") return o.result.records;
  std::ifstream is(o.records_path, std::ios::binary);
  if (!is) throw IoError("cannot reopen " + o.records_path.string());
  return parse_records_csv(is);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-layer digital-twin network simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string deployment;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string out_dir = "results";
  std::string format = "csv";

  auto* run = app.add_subcommand("run", "Run one or both deployment modes");
  run->add_option("--scenario", scenario, "Scenario file (defaults apply when omitted)");
  run->add_option("--deployment", deployment, "centralized | multilayer | both")
      ->check(CLI::IsMember({"centralized", "multilayer", "both"}));
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--duration", duration, "Override the simulated duration in seconds");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--format", format, "Record format")->check(CLI::IsMember({"csv", "json"}));

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "Check a scenario file and print the resolved config");
  val->add_option("scenario", validate_path, "Scenario file")->required();

  std::string cal_scenario;
  std::string cal_out;
  CalibrationTargets targets;
  std::vector<double> cband{targets.centralized.lo, targets.centralized.hi};
  std::vector<double> mband{targets.multilayer.lo, targets.multilayer.hi};
  bool full = false;
  auto* cal = app.add_subcommand("calibrate", "Solve workload sizes against the idle-path latency oracle");
  cal->add_option("--scenario", cal_scenario, "Base scenario file");
  cal->add_option("--centralized-band", cband, "Centralized latency band in seconds (lo hi)")->expected(2);
  cal->add_option("--multilayer-band", mband, "Multi-layer latency band in seconds (lo hi)")->expected(2);
  cal->add_option("--centralized-headroom", targets.centralized_headroom_s, "Seconds reserved for queueing and restarts");
  cal->add_option("--multilayer-headroom", targets.multilayer_headroom_s, "Seconds reserved for queueing");
  cal->add_option("--out", cal_out, "Write the result here instead of stdout (never the input file)");
  cal->add_flag("--full", full, "Emit the whole scenario instead of the [workload] fragment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*val) {
      auto cfg = load_or_report(validate_path);
      if (!cfg) return kValidation;
      std::cout << serialize(*cfg);
      return kOk;
    }

    if (*cal) {
      auto cfg = load_or_report(cal_scenario);
      if (!cfg) return kValidation;
      targets.centralized = {cband[0], cband[1]};
      targets.multilayer = {mband[0], mband[1]};
      const CalibrationResult r = calibrate(*cfg, targets);
      std::string text = r.fragment;
      if (full && r.feasible) {
        text = r.fragment.substr(0, r.fragment.find("[workload]")) + serialize(r.config);
      }
      if (!cal_out.empty()) {
        if (!cal_scenario.empty() && fs::exists(cal_out) && fs::equivalent(cal_out, cal_scenario)) {
          std::cerr << "refusing to overwrite the input scenario\n";
          return kRuntime;
        }
        auto os = open_out(cal_out);
        os << text;
      } else {
        std::cout << text;
      }
      if (!r.feasible) {
        for (const auto& p : r.problems) std::cerr << "infeasible: " << p << "\n";
        if (r.nearest_achievable) std::cerr << "nearest achievable: " << format_double(*r.nearest_achievable) << " s\n";
        return kInfeasible;
      }
      return kOk;
    }

    auto cfg = load_or_report(scenario);
    if (!cfg) return kValidation;
    if (seed) cfg->seed = *seed;
    if (duration) cfg->duration_s = *duration;
    if (auto errors = validate(*cfg); !errors.empty()) {
      for (const auto& e : errors) std::cerr << e.to_string() << "\n";
      return kValidation;
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
    const fs::path out(out_dir);

    const std::string which = deployment.empty() ? to_string(cfg->deployment) : deployment;
    if (which != "both") {
      const ModeOutput o = run_mode(*cfg, *parse_mode(which), out, format);
      if (o.result.failed) {
        std::cerr << which << ": " << o.result.summary.diagnostic << "\n";
        return kRuntime;
      }
      return kOk;
    }

    // Fully isolated instances; results are joined before the comparison.
    auto central = std::async(std::launch::async, run_mode, *cfg, DeploymentMode::Centralized, out, format);
    auto multi = std::async(std::launch::async, run_mode, *cfg, DeploymentMode::MultiLayer, out, format);
    const ModeOutput c = central.get();
    const ModeOutput m = multi.get();
    for (const ModeOutput* o : {&c, &m}) {
      if (o->result.failed) {
        std::cerr << o->result.summary.mode << ": " << o->result.summary.diagnostic << "\n";
        return kRuntime;
      }
    }
    const Comparison cmp = compare_runs(reload(c, format), reload(m, format), cfg->seed, cfg->duration_s);
    auto os = open_out(out / "comparison.json");
    os << comparison_to_json(cmp) << "\n";
    return kOk;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kRuntime;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
