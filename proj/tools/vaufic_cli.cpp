#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vaufic/config.hpp"
#include "vaufic/energy_tanks.hpp"
#include "vaufic/logging.hpp"
#include "vaufic/metrics.hpp"
#include "vaufic/sim_runtime.hpp"
#include "vaufic/telemetry.hpp"

namespace fs = std::filesystem;
using namespace vaufic;

namespace {

enum Exit { kOk = 0, kConfig = 2, kAbort = 3, kAudit = 4 };

struct RunArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string out = "out";
  bool audit = false;
  std::vector<std::string> overrides;
};

std::vector<ConfigEntry> collect_overrides(const RunArgs& a) {
  std::vector<ConfigEntry> o;
  for (const auto& s : a.overrides) o.push_back(parse_override(s));
  if (a.seed) o.push_back(ConfigEntry{"runtime.seed", std::to_string(*a.seed), 0});
  if (a.duration) o.push_back(ConfigEntry{"runtime.duration", format_double(*a.duration), 0});
  return o;
}

int cmd_run(const RunArgs& a) {
  Scenario sc;
  try {
    sc = load_scenario(a.scenario, collect_overrides(a));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }

  const RunResult res = run_scenario(sc);
  const fs::path out_dir(a.out);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "cannot create output directory '" << out_dir.string() << "': " << ec.message() << '\n';
    return kConfig;
  }
  write_telemetry(out_dir / "telemetry.csv", res.rows);

  const AuditReport audit = passivity_audit(audit_records(res.rows));
  const std::string report = format_report(compute_metrics(res.rows), audit, res.wall_seconds);
  std::ofstream(out_dir / "report.txt") << "scenario: " << sc.name << " (seed " << sc.seed << ")\n"
                                         << report;
  std::cout << report;

  if (res.aborted) {
    std::cerr << "simulation aborted: " << res.abort_reason << '\n';
    return kAbort;
  }
  if (a.audit && !audit.passed()) {
    std::cerr << "passivity audit failed: " << audit.violations << " violation(s), worst "
              << audit.worst_excess << " J at t=" << audit.worst_t << " s\n";
    return kAudit;
  }
  return kOk;
}

int cmd_report(const std::string& telemetry, bool audit_gate) {
  std::vector<TelemetryRow> rows;
  try {
    rows = read_telemetry(fs::path(telemetry));
  } catch (const CsvError& e) {
    std::cerr << "telemetry error: " << e.what() << '\n';
    return kConfig;
  }
  const AuditReport audit = passivity_audit(audit_records(rows));
  std::cout << format_report(compute_metrics(rows), audit);
  return audit_gate && !audit.passed() ? kAudit : kOk;
}

int cmd_export(const std::string& telemetry, const std::string& scenario, const std::string& out) {
  HeightField surface = Scenario::reference().surface;
  try {
    if (!scenario.empty()) surface = load_scenario(scenario).surface;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }
  std::vector<TelemetryRow> rows;
  try {
    rows = read_telemetry(fs::path(telemetry));
  } catch (const CsvError& e) {
    std::cerr << "telemetry error: " << e.what() << '\n';
    return kConfig;
  }
  for (const auto& p : export_plots(rows, surface, out)) std::cout << p.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (!log::configure_from_env()) {
    std::cerr << "config error: VAUF_LOG_LEVEL must be one of error, warn, info, debug\n";
    return kConfig;
  }

  CLI::App app{"Visual-tactile alignment with unified force-impedance control, simulated"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and write telemetry and a report");
  run_cmd->add_option("--scenario", run.scenario, "scenario file")->required();
  run_cmd->add_option("--seed", run.seed, "override runtime.seed");
  run_cmd->add_option("--duration", run.duration, "override runtime.duration [s]");
  run_cmd->add_option("--out", run.out, "output directory")->capture_default_str();
  run_cmd->add_flag("--audit", run.audit, "exit 4 when the passivity audit finds a violation");
  run_cmd->add_option("--set", run.overrides, "extra key=value overrides");

  std::string report_csv;
  bool report_audit = false;
  auto* report_cmd = app.add_subcommand("report", "print metrics for a telemetry file");
  report_cmd->add_option("telemetry", report_csv, "telemetry CSV")->required();
  report_cmd->add_flag("--audit", report_audit, "exit 4 when the passivity audit fails");

  std::string export_csv, export_scenario, export_out = "plots";
  auto* export_cmd = app.add_subcommand("export-plots", "write plot-ready CSV tables");
  export_cmd->add_option("telemetry", export_csv, "telemetry CSV")->required();
  export_cmd->add_option("--scenario", export_scenario, "scenario file for the surface model");
  export_cmd->add_option("--out", export_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*report_cmd) return cmd_report(report_csv, report_audit);
    if (*export_cmd) return cmd_export(export_csv, export_scenario, export_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const SimAbort& e) {
    std::cerr << "simulation aborted: " << e.what() << '\n';
    return kAbort;
  }
  return kOk;
}
