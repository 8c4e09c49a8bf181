// Command-line front end: run simulations from presets or config files,
// export assembled matrices, and run the verification suite.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hmfem/driver.hpp"
#include "hmfem/matrix_market.hpp"
#include "hmfem/verify.hpp"

namespace {

struct Overrides {
  std::optional<int> n;
  std::optional<double> tau;
  std::optional<double> t_end;
  std::optional<double> u_max;
  std::optional<int> snapshot_every;
  std::optional<std::string> scheme;
  std::optional<std::string> out_dir;
  std::optional<std::string> stability;
  std::optional<bool> no_reuse;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--n", ov.n, "Nodes per side");
  cmd->add_option("--tau", ov.tau, "Time step");
  cmd->add_option("--t-end", ov.t_end, "End time");
  cmd->add_option("--u-max", ov.u_max, "Stop once max u reaches this value");
  cmd->add_option("--snapshot-every", ov.snapshot_every, "Snapshot cadence in steps");
  cmd->add_option("--scheme", ov.scheme, "semilinear or fixedpoint");
  cmd->add_option("--out", ov.out_dir, "Output directory");
  cmd->add_option("--stability", ov.stability, "warn or enforce");
  cmd->add_flag("--no-reuse", [&ov](int64_t) { ov.no_reuse = true; },
                "Rebuild all matrices every step (reference timing mode)");
}

void apply_overrides(hmfem::RunConfig& cfg, const Overrides& ov) {
  if (ov.n) cfg.mesh.n = *ov.n;
  if (ov.tau) cfg.scheme.tau = *ov.tau;
  if (ov.t_end) cfg.run.t_end = *ov.t_end;
  if (ov.u_max) cfg.run.u_max = *ov.u_max;
  if (ov.snapshot_every) cfg.run.snapshot_every = *ov.snapshot_every;
  if (ov.scheme) {
    if (*ov.scheme == "semilinear") {
      cfg.scheme.scheme = hmfem::Scheme::semilinear;
    } else if (*ov.scheme == "fixedpoint") {
      cfg.scheme.scheme = hmfem::Scheme::fixedpoint;
    } else {
      throw hmfem::ConfigError("--scheme: expected semilinear or fixedpoint");
    }
  }
  if (ov.stability) {
    if (*ov.stability == "warn") {
      cfg.scheme.stability_mode = hmfem::StabilityMode::warn;
    } else if (*ov.stability == "enforce") {
      cfg.scheme.stability_mode = hmfem::StabilityMode::enforce;
    } else {
      throw hmfem::ConfigError("--stability: expected warn or enforce");
    }
  }
  if (ov.out_dir) cfg.run.output_dir = *ov.out_dir;
  if (ov.no_reuse) cfg.scheme.reuse_pattern = false;
}

int execute_run(const hmfem::RunConfig& cfg) {
  const hmfem::RunOutput out = hmfem::run_from_config(cfg);
  const auto& stats = out.stats;
  std::printf("steps: %d  final t: %.6g  stop: %s  max|u|: %.6g\n", stats.steps,
              stats.records.empty() ? 0.0 : stats.records.back().t,
              hmfem::to_string(stats.stop_reason),
              stats.records.empty() ? 0.0 : stats.records.back().u_inf);
  std::printf("wrote %d snapshots and stats.json to %s\n", out.snapshots_written,
              out.output_dir.string().c_str());
  if (stats.stop_reason == hmfem::StopReason::error) {
    std::fprintf(stderr, "error: run aborted: %s\n", stats.error_message.c_str());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-element solver for the periodic drift-wave system"};
  app.require_subcommand(0, 1);
  bool list_flag = false;
  app.add_flag("--list-presets", list_flag, "List the available presets and exit");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run a simulation from a config file");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "Config file (key = value lines)")->required();
  Overrides run_ov;
  add_override_flags(run_cmd, run_ov);

  // preset
  auto* preset_cmd = app.add_subcommand("preset", "Run one of the named experiments");
  std::string preset_name;
  preset_cmd->add_option("name", preset_name, "Preset name")->required();
  Overrides preset_ov;
  add_override_flags(preset_cmd, preset_ov);

  // list-presets
  auto* list_cmd = app.add_subcommand("list-presets", "List the available presets");

  // export-matrices
  auto* export_cmd = app.add_subcommand("export-matrices",
                                        "Assemble and write M, K, R, S0 in MatrixMarket form");
  int export_n = 5;
  double export_k = 12.0, export_x0 = 0.0, export_y0 = 0.0, export_side = 1.0;
  std::string export_dir = ".";
  export_cmd->add_option("--n", export_n, "Nodes per side")->required();
  export_cmd->add_option("--k", export_k, "Constant khat of the drive matrix")->required();
  export_cmd->add_option("--x0", export_x0, "Domain origin x");
  export_cmd->add_option("--y0", export_y0, "Domain origin y");
  export_cmd->add_option("--side", export_side, "Domain side length");
  export_cmd->add_option("--out", export_dir, "Output directory");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run the verification suite");
  std::string report_path;
  unsigned verify_seed = 20240901;
  verify_cmd->add_option("--out", report_path, "Write the JSON report to this file");
  verify_cmd->add_option("--seed", verify_seed, "Random seed for the sweeps");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_flag) {
      for (const auto& name : hmfem::preset_names()) std::printf("%s\n", name.c_str());
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::fprintf(stderr, "error: expected a subcommand (try --help)\n");
      return 1;
    }
    if (*run_cmd) {
      hmfem::RunConfig cfg = hmfem::load_config(config_path);
      apply_overrides(cfg, run_ov);
      return execute_run(cfg);
    }
    if (*preset_cmd) {
      hmfem::RunConfig cfg = hmfem::config_from_preset(hmfem::preset(preset_name));
      apply_overrides(cfg, preset_ov);
      return execute_run(cfg);
    }
    if (*list_cmd) {
      for (const auto& name : hmfem::preset_names()) std::printf("%s\n", name.c_str());
      return 0;
    }
    if (*export_cmd) {
      const hmfem::Mesh mesh = hmfem::build_mesh(export_n, export_x0, export_y0, export_side);
      const std::filesystem::path dir(export_dir);
      std::filesystem::create_directories(dir);
      const hmfem::CsrMatrix mass = hmfem::assemble(mesh, hmfem::MatrixKind::mass);
      hmfem::write_matrix_market(mass, dir / "M.mtx");
      hmfem::write_matrix_market(hmfem::assemble_h1(mesh), dir / "K.mtx");
      hmfem::write_matrix_market(hmfem::assemble_drive(mesh, export_k), dir / "R.mtx");
      const std::vector<double> zero(mesh.reduced_dof_count(), 0.0);
      hmfem::write_matrix_market(hmfem::assemble_convection(mesh, zero), dir / "S0.mtx");
      std::printf("wrote M.mtx K.mtx R.mtx S0.mtx to %s\n", dir.string().c_str());
      return 0;
    }
    if (*verify_cmd) {
      const hmfem::VerificationSuite suite = hmfem::run_verification_suite(verify_seed);
      const std::string json = hmfem::verification_report_json(suite);
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << json << "\n";
      }
      for (const auto& c : suite.checks) {
        std::printf("%s %-32s %s\n", c.report.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.report.detail.c_str());
      }
      std::printf("verification: %s\n", suite.pass ? "PASS" : "FAIL");
      return suite.pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
