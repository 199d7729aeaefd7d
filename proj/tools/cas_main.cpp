#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cas/event_log.hpp"
#include "cas/monitors.hpp"
#include "cas/scenario.hpp"
#include "cas/simulator.hpp"
#include "cas/traceability.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir) {
  cas::Scenario sc;
  cas::PipelineConfig cfg;
  try {
    sc = cas::load_scenario(slurp(scenario_path));
    if (const char* path = std::getenv("CAS_CONFIG"); path && *path)
      cas::apply_pipeline_overrides(slurp(path), cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    const cas::RunResult r = cas::run(sc, cfg);
    fs::create_directories(out_dir);
    const fs::path base = fs::path(out_dir) / sc.name;
    write_file(base.string() + ".trace", cas::trace_text(r));
    write_file(base.string() + ".gclog", cas::gclog_text(r));
    write_file(base.string() + ".csv", r.csv);
    std::cout << fmt::format("{}: {} ticks, {} events, {} ground records, min separation {:.3f} m\n", sc.name,
                             r.snapshots.size(), r.trace.size(), r.gclog.size(), r.min_separation);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

int cmd_monitor(const std::string& trace_path, int horizon, bool raw_c2) {
  std::vector<cas::TraceEvent> trace;
  try {
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + trace_path);
    trace = cas::read_records(in);
    cas::MonitorConfig cfg;
    cfg.horizon_h = horizon;
    cfg.raw_c2 = raw_c2;
    bool violated = false;
    for (const auto& v : cas::check_all(trace, cfg)) {
      std::cout << cas::format_verdict(v) << "\n";
      violated |= v.status == cas::VerdictStatus::Violated;
    }
    return violated ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_matrix(const std::string& manifest, const std::string& report, const std::string& out) {
  try {
    const auto m = cas::build_matrix(cas::parse_manifest(slurp(manifest)), cas::parse_test_report(slurp(report)));
    write_file(out, cas::matrix_csv(m));
    std::cout << cas::summary_text(m.summary);
    return cas::coverage_exit_code(m.summary);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collision avoidance pipeline: scenario runs, trace monitors, traceability matrix"};
  app.require_subcommand(1);

  std::string scenario, out_dir;
  bool seedless = false;
  auto* run = app.add_subcommand("run", "Run a scenario and write .trace, .gclog and .csv");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("-o,--out", out_dir, "Output directory")->required();
  run->add_flag("--seedless", seedless, "Accepted for compatibility; runs never consume entropy");

  std::string trace;
  int horizon = 20;
  bool raw_c2 = false;
  auto* mon = app.add_subcommand("monitor", "Check a trace against the runtime properties");
  mon->add_option("trace", trace, "Trace file")->required();
  mon->add_option("--horizon", horizon, "Ticks allowed for eventual obligations")->check(CLI::PositiveNumber);
  mon->add_flag("--raw-c2", raw_c2, "Unguarded detection-to-command property");

  std::string manifest, report, csv;
  auto* mat = app.add_subcommand("matrix", "Build the requirements traceability matrix");
  mat->add_option("-m,--manifest", manifest, "Requirements manifest")->required();
  mat->add_option("-t,--tests", report, "Test report")->required();
  mat->add_option("-o,--out", csv, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*run) return cmd_run(scenario, out_dir);
  if (*mon) return cmd_monitor(trace, horizon, raw_c2);
  return cmd_matrix(manifest, report, csv);
}
