// Command line front end: closed-loop simulation runs, the three-mode
// comfort comparison, and F-v parameter fitting.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "guidesim/human_model.hpp"
#include "guidesim/metrics.hpp"
#include "guidesim/scenario.hpp"
#include "guidesim/sha256.hpp"
#include "guidesim/simulator.hpp"
#include "guidesim/trajectory_log.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace guidesim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCollision = 3;
constexpr int kExitPlannerFailure = 4;
constexpr int kExitTimeout = 5;

int exit_code_of(RunStatus status) {
  switch (status) {
    case RunStatus::reached: return kExitOk;
    case RunStatus::collision: return kExitCollision;
    case RunStatus::planner_failure: return kExitPlannerFailure;
    case RunStatus::timeout: return kExitTimeout;
  }
  return kExitConfig;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::string& config_path, std::uint64_t seed,
                    const std::vector<fs::path>& outputs) {
  json doc;
  doc["command"] = command;
  doc["config"] = config_path;
  doc["seed"] = seed;
  doc["outputs"] = json::array();
  for (const fs::path& p : outputs) {
    doc["outputs"].push_back(
        {{"path", p.filename().string()}, {"sha256", sha256_file_hex(p.string())}});
  }
  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  out << doc.dump(2) << '\n';
}

struct MetricsRow {
  std::string name;
  bool failed = false;
  ComfortMetrics metrics;
  std::optional<double> rci;
};

void write_metrics_csv(const fs::path& path, const std::vector<MetricsRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  out << "alternative,f_dot_rms,theta_dot_rms,t_over,n_ch,rci\n";
  for (const auto& r : rows) {
    out << r.name << ',';
    if (r.failed) {
      out << "failed,failed,failed,failed,\n";
      continue;
    }
    out << fmt(r.metrics.f_dot_rms) << ',' << fmt(r.metrics.theta_dot_rms) << ','
        << fmt(r.metrics.t_over) << ',' << r.metrics.n_ch << ',';
    if (r.rci) out << fmt(*r.rci);
    out << '\n';
  }
}

void print_metrics_table(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << "alternative      F_dot_rms  theta_dot_rms  t_over     N_ch  RCI\n";
  for (const auto& r : rows) {
    char line[160];
    if (r.failed) {
      std::snprintf(line, sizeof(line), "%-16s %s\n", r.name.c_str(), "failed");
    } else {
      std::snprintf(line, sizeof(line), "%-16s %-10.4g %-14.4g %-10.4g %-5d %s\n",
                    r.name.c_str(), r.metrics.f_dot_rms, r.metrics.theta_dot_rms,
                    r.metrics.t_over, r.metrics.n_ch,
                    r.rci ? fmt(*r.rci).c_str() : "-");
    }
    out << line;
  }
}

std::vector<std::string> gather_overrides(const std::vector<std::string>& sets,
                                          std::optional<std::uint64_t> seed,
                                          std::optional<std::string> mode) {
  std::vector<std::string> overrides = sets;
  if (seed) overrides.push_back("seed=" + std::to_string(*seed));
  if (mode) overrides.push_back("mode=" + *mode);
  return overrides;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::vector<std::string>& overrides) {
  const ScenarioConfig cfg = load_scenario_file(config_path, overrides);
  fs::create_directories(out_dir);

  const RunResult result = run_scenario(cfg);
  const fs::path out(out_dir);

  write_trajectory_csv_file((out / "trajectory.csv").string(), result.log);
  write_belief_csv_file((out / "belief.csv").string(), result.belief_trace);

  std::vector<MetricsRow> rows;
  if (result.log.rows.size() >= 3) {
    rows.push_back({"actual", false, comfort_metrics(result.log, cfg.planner.f_max), {}});
    rows.push_back({"planned", false, planned_comfort_metrics(result.log, cfg.planner.f_max), {}});
  }
  write_metrics_csv(out / "metrics.csv", rows);
  write_manifest(out, "simulate", config_path, cfg.seed,
                 {out / "trajectory.csv", out / "belief.csv", out / "metrics.csv"});

  std::cout << "status: " << to_string(result.status) << " after " << fmt(result.sim_time)
            << " s simulated\n";
  if (result.calibrated) {
    std::cout << "calibrated alpha=" << fmt(result.estimated_params.alpha)
              << " beta=" << fmt(result.estimated_params.beta) << '\n';
  }
  return exit_code_of(result.status);
}

int cmd_compare(const std::string& config_path, const std::string& out_dir,
                const std::vector<std::string>& overrides) {
  fs::create_directories(out_dir);
  const fs::path out(out_dir);

  struct ModeRun {
    std::string name;
    std::string mode;
    bool ok = false;
    int code = kExitConfig;
    ComfortMetrics metrics;
    RunResult result;
  };
  std::vector<ModeRun> runs;
  runs.push_back({"inelastic", "inelastic", false, 0, {}, {}});
  runs.push_back({"elastic", "elastic", false, 0, {}, {}});
  runs.push_back({"elastic_fcd", "elastic_fcd", false, 0, {}, {}});

  std::uint64_t seed = 0;
  double f_max = 25.0;
  std::vector<fs::path> outputs;
  for (ModeRun& r : runs) {
    auto mode_overrides = overrides;
    mode_overrides.push_back("mode=" + r.mode);
    const ScenarioConfig cfg = load_scenario_file(config_path, mode_overrides);
    seed = cfg.seed;
    f_max = cfg.planner.f_max;
    r.result = run_scenario(cfg);
    r.code = exit_code_of(r.result.status);
    r.ok = r.result.status == RunStatus::reached && r.result.log.rows.size() >= 3;
    if (r.ok) r.metrics = comfort_metrics(r.result.log, f_max);
    const fs::path traj = out / ("trajectory_" + r.name + ".csv");
    write_trajectory_csv_file(traj.string(), r.result.log);
    outputs.push_back(traj);
    std::cout << r.name << ": " << to_string(r.result.status) << '\n';
  }

  std::vector<MetricsRow> rows;
  for (const ModeRun& r : runs) rows.push_back({r.name, !r.ok, r.metrics, {}});

  // The planned pseudo-alternative: metrics of the reference force trace
  // the FCD was asked to track.
  const ModeRun& fcd = runs[2];
  bool have_planned = fcd.ok;
  ComfortMetrics planned{};
  if (have_planned) {
    planned = planned_comfort_metrics(fcd.result.log, f_max);
    rows.push_back({"planned", false, planned, {}});
  }

  // TOPSIS over the surviving alternatives.
  DecisionMatrix matrix;
  std::vector<size_t> row_of;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].failed) continue;
    matrix.names.push_back(rows[i].name);
    const ComfortMetrics& m = rows[i].metrics;
    matrix.values.push_back({m.f_dot_rms, m.theta_dot_rms, m.t_over,
                             static_cast<double>(m.n_ch)});
    row_of.push_back(i);
  }
  std::string topsis_note;
  if (matrix.values.size() >= 2) {
    try {
      const auto rci = topsis_rci(matrix);
      for (size_t i = 0; i < rci.size(); ++i) rows[row_of[i]].rci = rci[i];
    } catch (const std::exception& e) {
      topsis_note = std::string("TOPSIS skipped: ") + e.what();
    }
  }

  write_metrics_csv(out / "report.csv", rows);
  outputs.push_back(out / "report.csv");

  std::ofstream txt(out / "report.txt", std::ios::binary);
  print_metrics_table(txt, rows);
  print_metrics_table(std::cout, rows);
  if (!topsis_note.empty()) txt << topsis_note << '\n';

  auto rci_of = [&rows](const std::string& name) -> std::optional<double> {
    for (const auto& r : rows) {
      if (r.name == name && r.rci) return r.rci;
    }
    return std::nullopt;
  };
  const auto ri = rci_of("inelastic");
  const auto re = rci_of("elastic");
  const auto rf = rci_of("elastic_fcd");
  const auto rp = rci_of("planned");
  if (ri && re && rf) {
    const bool ordered = *ri < *re && *re < *rf;
    txt << "RCI ordering inelastic < elastic < elastic_fcd: "
        << (ordered ? "holds" : "violated") << '\n';
    std::cout << "RCI ordering inelastic < elastic < elastic_fcd: "
              << (ordered ? "holds" : "violated") << '\n';
  }
  if (rp) {
    txt << "RCI(planned) = " << fmt(*rp) << '\n';
  }
  txt.close();
  outputs.push_back(out / "report.txt");

  write_manifest(out, "compare", config_path, seed, outputs);

  for (const ModeRun& r : runs) {
    if (r.code != kExitOk) return r.code;
  }
  return kExitOk;
}

int cmd_fit(const std::string& csv_path, const std::string& out_dir) {
  std::vector<std::pair<double, double>> samples;
  try {
    samples = read_force_velocity_csv_file(csv_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  FitResult fit;
  try {
    fit = fit_params(samples);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  std::cout << "alpha = " << fmt(fit.alpha) << " (m/s)/N\n"
            << "beta  = " << fmt(fit.beta) << " m/s\n"
            << "residual_rms = " << fmt(fit.residual_rms) << " m/s\n";
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    json doc{{"alpha", fit.alpha},
             {"beta", fit.beta},
             {"residual_rms", fit.residual_rms},
             {"samples", samples.size()},
             {"input", csv_path}};
    std::ofstream out(fs::path(out_dir) / "fit_report.json", std::ios::binary);
    out << doc.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"guidesim: comfort-based guide robot simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, csv_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;

  CLI::App* sim = app.add_subcommand("simulate", "run one closed-loop scenario");
  sim->add_option("--config", config_path, "scenario JSON")->required();
  sim->add_option("--out", out_dir, "output directory")->required();
  sim->add_option("--seed", seed, "override the scenario seed");
  sim->add_option("--mode", mode, "override the rope mode");
  sim->add_option("--set", sets, "dotted-path config override key=value");

  CLI::App* cmp = app.add_subcommand("compare", "run the three-mode comfort study");
  cmp->add_option("--config", config_path, "scenario JSON")->required();
  cmp->add_option("--out", out_dir, "output directory")->required();
  cmp->add_option("--seed", seed, "override the scenario seed");
  cmp->add_option("--set", sets, "dotted-path config override key=value");

  CLI::App* fit = app.add_subcommand("fit", "least-squares F-v identification from CSV");
  fit->add_option("csv", csv_path, "2-column F_newtons,v_mps CSV")->required();
  fit->add_option("--out", out_dir, "directory for the fit report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(sim)) {
      return cmd_simulate(config_path, out_dir, gather_overrides(sets, seed, mode));
    }
    if (app.got_subcommand(cmp)) {
      return cmd_compare(config_path, out_dir, gather_overrides(sets, seed, mode));
    }
    if (app.got_subcommand(fit)) {
      return cmd_fit(csv_path, out_dir);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
