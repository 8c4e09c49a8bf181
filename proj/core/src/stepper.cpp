#include "hmfem/stepper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace hmfem {

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::runtime_error(std::string(what) + ": solution is no longer finite");
    }
  }
}

std::vector<double> axpy(double alpha, std::span<const double> x, std::span<const double> y) {
  std::vector<double> out(y.begin(), y.end());
  for (size_t i = 0; i < out.size(); ++i) out[i] += alpha * x[i];
  return out;
}

double rel_change(std::span<const double> next, std::span<const double> prev) {
  double dn = 0.0, nn = 0.0;
  for (size_t i = 0; i < next.size(); ++i) {
    const double d = next[i] - prev[i];
    dn += d * d;
    nn += next[i] * next[i];
  }
  if (nn == 0.0) return dn == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(dn / nn);
}

}  // namespace

CsrMatrix System::rebuild_drive() const {
  return khat ? assemble_drive(mesh, *khat) : assemble_drive(mesh, grad_p);
}

System build_system(Mesh mesh, double khat) {
  System sys;
  sys.mass = assemble(mesh, MatrixKind::mass);
  sys.stiffness = assemble(mesh, MatrixKind::stiffness);
  sys.h1 = add_scaled(sys.mass, sys.stiffness, 1.0, 1.0);
  sys.drive = assemble_drive(mesh, khat);
  sys.khat = khat;
  sys.khat_inf = std::abs(khat);
  sys.mesh = std::move(mesh);
  return sys;
}

System build_system(Mesh mesh, GradientFn grad_p, double khat_inf) {
  System sys;
  sys.mass = assemble(mesh, MatrixKind::mass);
  sys.stiffness = assemble(mesh, MatrixKind::stiffness);
  sys.h1 = add_scaled(sys.mass, sys.stiffness, 1.0, 1.0);
  sys.drive = assemble_drive(mesh, grad_p);
  sys.grad_p = std::move(grad_p);
  sys.khat_inf = khat_inf;
  sys.mesh = std::move(mesh);
  return sys;
}

State init_state(const System& sys, const std::function<double(double, double)>& u0) {
  const PeriodicMap map = periodic_map(sys.mesh);
  State s;
  s.t = 0.0;
  s.u.resize(sys.mesh.reduced_dof_count());
  for (int r = 0; r < sys.mesh.reduced_dof_count(); ++r) {
    const int node = map.reduced_to_full[r];
    s.u[r] = u0(sys.mesh.node_x[node - 1], sys.mesh.node_y[node - 1]);
  }
  check_finite(s.u, "init_state");
  const LuSolver m_lu(sys.mass);
  s.w = m_lu.solve(spmv(sys.h1, s.u));
  check_finite(s.w, "init_state");
  return s;
}

SemilinearStepper::SemilinearStepper(const System& sys, const SchemeConfig& cfg)
    : sys_(&sys), cfg_(cfg), conv_(sys.mesh), s_(conv_.pattern()) {
  if (cfg_.reuse_pattern) {
    k_lu_.emplace(sys.h1);
    // the convection pattern is a subset of the mass stencil, so the union
    // pattern of M + tau S is the mass pattern itself
    hyperbolic_ = add_scaled(sys.mass, s_, 1.0, cfg_.tau);
    if (!hyperbolic_.same_pattern(sys.mass)) {
      throw std::logic_error("SemilinearStepper: unexpected union pattern");
    }
    s_slots_.resize(s_.nnz());
    for (int r = 0; r < s_.rows; ++r) {
      for (int k = s_.row_offsets[r]; k < s_.row_offsets[r + 1]; ++k) {
        s_slots_[k] = hyperbolic_.find_slot(r, s_.col_indices[k]);
      }
    }
    hyp_lu_.emplace(hyperbolic_);
  }
}

void SemilinearStepper::step(State& state) {
  // the state is only committed once both solves are finite
  const double tau = cfg_.tau;
  std::vector<double> w_next, u_next;
  if (cfg_.reuse_pattern) {
    conv_.refresh(state.u, s_);
    hyperbolic_.values = sys_->mass.values;
    for (int k = 0; k < s_.nnz(); ++k) {
      hyperbolic_.values[s_slots_[k]] += tau * s_.values[k];
    }
    hyp_lu_->refactor(hyperbolic_);
    const auto rhs = axpy(tau, spmv(sys_->drive, state.u), spmv(sys_->mass, state.w));
    w_next = hyp_lu_->solve(rhs);
    check_finite(w_next, "semilinear step (hyperbolic solve)");
    u_next = k_lu_->solve(spmv(sys_->mass, w_next));
    check_finite(u_next, "semilinear step (elliptic solve)");
  } else {
    const CsrMatrix mass = assemble(sys_->mesh, MatrixKind::mass);
    const CsrMatrix stiffness = assemble(sys_->mesh, MatrixKind::stiffness);
    const CsrMatrix h1 = add_scaled(mass, stiffness, 1.0, 1.0);
    const CsrMatrix drive = sys_->rebuild_drive();
    const CsrMatrix s = assemble_convection(sys_->mesh, state.u);
    const CsrMatrix hyperbolic = add_scaled(mass, s, 1.0, tau);
    const auto rhs = axpy(tau, spmv(drive, state.u), spmv(mass, state.w));
    const LuSolver hyp_lu(hyperbolic);
    w_next = hyp_lu.solve(rhs);
    check_finite(w_next, "semilinear step (hyperbolic solve)");
    const LuSolver k_lu(h1);
    u_next = k_lu.solve(spmv(mass, w_next));
    check_finite(u_next, "semilinear step (elliptic solve)");
  }
  state.w = std::move(w_next);
  state.u = std::move(u_next);
  state.t += tau;
}

FixedPointStepper::FixedPointStepper(const System& sys, const SchemeConfig& cfg)
    : sys_(&sys), cfg_(cfg), conv_(sys.mesh), s_(conv_.pattern()) {
  k_lu_.emplace(sys.h1);
  m_lu_.emplace(sys.mass);
  kr_lu_.emplace(add_scaled(sys.h1, sys.drive, 1.0, -cfg_.tau));
}

int FixedPointStepper::step(State& state, std::vector<double>* iteration_errors) {
  const double tau = cfg_.tau;
  const auto z = spmv(sys_->mass, state.w);
  std::vector<double> u_k = state.u;
  std::vector<double> y_k = state.w;
  double error = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= cfg_.fp_max_iterations; ++k) {
    conv_.refresh(u_k, s_);
    const auto r = axpy(-tau, spmv(s_, y_k), z);
    const auto y_tilde = kr_lu_->solve(r);
    const auto y = m_lu_->solve(spmv(sys_->h1, y_tilde));
    const auto u = k_lu_->solve(spmv(sys_->mass, y));
    check_finite(y, "fixed-point step");
    error = std::max(rel_change(y, y_k), rel_change(u, u_k));
    if (iteration_errors) iteration_errors->push_back(error);
    y_k = y;
    u_k = u;
    if (error <= cfg_.fp_tol) {
      state.w = std::move(y_k);
      state.u = std::move(u_k);
      state.t += tau;
      return k;
    }
  }
  throw std::runtime_error("fixed-point step: no convergence after " +
                           std::to_string(cfg_.fp_max_iterations) +
                           " iterations, last error " + std::to_string(error));
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::time_limit: return "time_limit";
    case StopReason::u_max_reached: return "u_max_reached";
    case StopReason::error: return "error";
  }
  return "unknown";
}

namespace {

StepRecord make_record(const System& sys, const State& state, int fp_iterations,
                       double step_seconds) {
  StepRecord rec;
  rec.t = state.t;
  rec.u_inf = max_abs(state.u);
  rec.w_norm_m = energy_norm(sys.mass, state.w);
  rec.u_norm_k = energy_norm(sys.h1, state.u);
  rec.u_norm_m = energy_norm(sys.mass, state.u);
  rec.fp_iterations = fp_iterations;
  rec.step_seconds = step_seconds;
  const auto ku = spmv(sys.h1, state.u);
  const auto mw = spmv(sys.mass, state.w);
  double dn = 0.0;
  for (size_t i = 0; i < ku.size(); ++i) {
    const double d = ku[i] - mw[i];
    dn += d * d;
  }
  const double mwn = norm2(mw);
  rec.elliptic_residual = mwn > 0.0 ? std::sqrt(dn) / mwn : std::sqrt(dn);
  return rec;
}

double contraction_tau_limit(const System& sys, double w_norm_m, double safety) {
  // 0.125 * min(4/khat_inf, h^2/(c * C_Z)) with C_Z = 2 ||W||_M
  const double inf = std::numeric_limits<double>::infinity();
  const double lim_k = sys.khat_inf > 0.0 ? 4.0 / sys.khat_inf : inf;
  const double cz = 2.0 * w_norm_m;
  const double lim_h = cz > 0.0 ? sys.mesh.h * sys.mesh.h / (safety * cz) : inf;
  return 0.125 * std::min(lim_k, lim_h);
}

}  // namespace

RunStats run(const System& sys, const SchemeConfig& cfg, State& state,
             const RunControl& control, const SnapshotSink& sink) {
  RunStats stats;
  stats.tau = cfg.tau;
  stats.khat_inf = sys.khat_inf;
  stats.coercivity_tau_limit = sys.khat_inf > 0.0 ? 1.0 / (2.0 * sys.khat_inf)
                                                  : std::numeric_limits<double>::infinity();
  stats.coercivity_satisfied = cfg.tau <= stats.coercivity_tau_limit;
  if (!stats.coercivity_satisfied) {
    if (cfg.stability_mode == StabilityMode::enforce) {
      throw std::runtime_error("run: tau exceeds the coercivity limit 1/(2 khat_inf) = " +
                               std::to_string(stats.coercivity_tau_limit));
    }
    std::cerr << "warning: tau = " << cfg.tau << " exceeds the coercivity limit "
              << stats.coercivity_tau_limit << "\n";
  }

  stats.records.push_back(make_record(sys, state, 0, 0.0));
  stats.contraction_tau_limit_initial =
      contraction_tau_limit(sys, stats.records.front().w_norm_m, cfg.contraction_safety);
  stats.contraction_tau_limit_min = stats.contraction_tau_limit_initial;

  std::optional<SemilinearStepper> semilinear;
  std::optional<FixedPointStepper> fixedpoint;
  if (cfg.scheme == Scheme::semilinear) {
    semilinear.emplace(sys, cfg);
  } else {
    fixedpoint.emplace(sys, cfg);
  }

  if (sink) sink(state, 0);
  int last_emitted = 0;
  int step_index = 0;
  const auto run_start = std::chrono::steady_clock::now();
  while (state.t + 0.5 * cfg.tau < control.t_end) {
    const auto t0 = std::chrono::steady_clock::now();
    int fp_iterations = 0;
    try {
      if (semilinear) {
        semilinear->step(state);
      } else {
        fp_iterations = fixedpoint->step(state);
      }
    } catch (const std::exception& e) {
      stats.stop_reason = StopReason::error;
      stats.error_message = e.what();
      break;
    }
    ++step_index;
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    stats.records.push_back(make_record(sys, state, fp_iterations, seconds));
    stats.contraction_tau_limit_min =
        std::min(stats.contraction_tau_limit_min,
                 contraction_tau_limit(sys, stats.records.back().w_norm_m, cfg.contraction_safety));
    if (sink && control.snapshot_every > 0 && step_index % control.snapshot_every == 0) {
      sink(state, step_index);
      last_emitted = step_index;
    }
    const double u_signed_max = *std::max_element(state.u.begin(), state.u.end());
    if (u_signed_max >= control.u_max) {
      stats.stop_reason = StopReason::u_max_reached;
      break;
    }
  }
  stats.steps = step_index;
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start).count();
  if (sink && last_emitted != step_index) sink(state, step_index);
  return stats;
}

}  // namespace hmfem
