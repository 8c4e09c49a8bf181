#include "hmfem/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hmfem {

void write_snapshot(const State& state, const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_snapshot: cannot open " + path.string());
  out << "x,y,u,w\n";
  char buf[160];
  for (int node = 1; node <= mesh.node_count(); ++node) {
    const int r = reduce_index(node, mesh) - 1;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", mesh.node_x[node - 1],
                  mesh.node_y[node - 1], state.u[r], state.w[r]);
    out << buf;
  }
  if (!out) throw std::runtime_error("write_snapshot: write failed for " + path.string());
}

State read_snapshot(const Mesh& mesh, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "x,y,u,w") {
    throw std::runtime_error("read_snapshot: missing x,y,u,w header in " + path.string());
  }
  State state;
  state.u.assign(mesh.reduced_dof_count(), 0.0);
  state.w.assign(mesh.reduced_dof_count(), 0.0);
  for (int node = 1; node <= mesh.node_count(); ++node) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("read_snapshot: truncated file " + path.string());
    }
    std::istringstream row(line);
    double x, y, u, w;
    char c1, c2, c3;
    if (!(row >> x >> c1 >> y >> c2 >> u >> c3 >> w) || c1 != ',' || c2 != ',' || c3 != ',') {
      throw std::runtime_error("read_snapshot: malformed row " + std::to_string(node));
    }
    const int r = reduce_index(node, mesh) - 1;
    state.u[r] = u;
    state.w[r] = w;
  }
  return state;
}

void write_stats_json(const RunStats& stats, const RunConfig& cfg,
                      const std::filesystem::path& path) {
  nlohmann::json j;
  j["stop_reason"] = to_string(stats.stop_reason);
  if (!stats.error_message.empty()) j["error_message"] = stats.error_message;
  j["steps"] = stats.steps;
  j["wall_seconds"] = stats.wall_seconds;
  j["final_t"] = stats.records.empty() ? 0.0 : stats.records.back().t;
  j["stability"] = {
      {"tau", stats.tau},
      {"khat_inf", stats.khat_inf},
      {"coercivity_tau_limit", stats.coercivity_tau_limit},
      {"coercivity_satisfied", stats.coercivity_satisfied},
      {"contraction_tau_limit_initial", stats.contraction_tau_limit_initial},
      {"contraction_tau_limit_min", stats.contraction_tau_limit_min},
  };
  j["scheme"] = cfg.scheme.scheme == Scheme::semilinear ? "semilinear" : "fixedpoint";
  j["records"] = nlohmann::json::array();
  for (const auto& r : stats.records) {
    j["records"].push_back({{"t", r.t},
                            {"u_inf", r.u_inf},
                            {"w_norm_m", r.w_norm_m},
                            {"u_norm_k", r.u_norm_k},
                            {"u_norm_m", r.u_norm_m},
                            {"fp_iterations", r.fp_iterations},
                            {"elliptic_residual", r.elliptic_residual},
                            {"step_seconds", r.step_seconds}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_stats_json: cannot open " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace hmfem
