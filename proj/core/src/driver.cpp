#include "hmfem/driver.hpp"

#include <cstdio>

namespace hmfem {

System system_from_config(const RunConfig& cfg) {
  Mesh mesh = build_mesh(cfg.mesh.n, cfg.mesh.x0, cfg.mesh.y0, cfg.mesh.side);
  if (const auto khat = cfg.profile.constant_khat()) {
    return build_system(std::move(mesh), *khat);
  }
  const double khat_inf = cfg.profile.khat_inf(mesh);
  const DensityProfile profile = cfg.profile;
  return build_system(std::move(mesh),
                      [profile](double x, double y) { return profile.gradient(x, y); },
                      khat_inf);
}

RunOutput run_from_config(const RunConfig& cfg) {
  validate_config(cfg);
  RunOutput out;
  out.output_dir = cfg.run.output_dir;
  std::filesystem::create_directories(out.output_dir);

  System sys = system_from_config(cfg);
  const InitialCondition initial = cfg.initial;
  State state = init_state(sys, [&initial](double x, double y) { return initial(x, y); });

  SchemeConfig scheme = cfg.scheme;
  scheme.solver_tol = cfg.solver.tol;
  scheme.solver_max_iterations = cfg.solver.max_iterations;

  RunControl control;
  control.t_end = cfg.run.t_end;
  control.u_max = cfg.run.u_max;
  control.snapshot_every = cfg.run.snapshot_every;

  const auto sink = [&](const State& s, int step_index) {
    char name[32];
    std::snprintf(name, sizeof(name), "snapshot_%06d.csv", step_index);
    write_snapshot(s, sys.mesh, out.output_dir / name);
    ++out.snapshots_written;
  };

  out.stats = run(sys, scheme, state, control, sink);
  out.final_state = std::move(state);
  write_stats_json(out.stats, cfg, out.output_dir / "stats.json");
  return out;
}

}  // namespace hmfem
