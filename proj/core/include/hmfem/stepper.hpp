#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hmfem/assembly.hpp"
#include "hmfem/csr.hpp"
#include "hmfem/mesh.hpp"
#include "hmfem/solvers.hpp"

namespace hmfem {

struct State {
  double t = 0.0;
  std::vector<double> u;  // nodal electrostatic potential, reduced DOFs
  std::vector<double> w;  // nodal generalized vorticity, u - lap(u) discretely
};

enum class Scheme { semilinear, fixedpoint };
enum class StabilityMode { warn, enforce };

struct SchemeConfig {
  Scheme scheme = Scheme::semilinear;
  double tau = 0.1;
  double fp_tol = 1e-10;
  int fp_max_iterations = 100;
  StabilityMode stability_mode = StabilityMode::warn;
  // scales the h^2 part of the reported fixed-point contraction bound
  double contraction_safety = 1.0;
  double solver_tol = 1e-10;
  int solver_max_iterations = 0;
  // false: rebuild every matrix and factorization from scratch each step
  bool reuse_pattern = true;
};

// Assembled operators for one mesh/profile pair, shared by both schemes.
struct System {
  Mesh mesh;
  CsrMatrix mass;       // M
  CsrMatrix stiffness;  // A
  CsrMatrix h1;         // K = M + A
  CsrMatrix drive;      // R
  std::optional<double> khat;  // set for a constant-gradient profile
  GradientFn grad_p;           // set otherwise
  double khat_inf = 0.0;

  CsrMatrix rebuild_drive() const;
};

System build_system(Mesh mesh, double khat);
System build_system(Mesh mesh, GradientFn grad_p, double khat_inf);

// Samples u0 at the representative nodes and solves M W0 = K U0.
State init_state(const System& sys, const std::function<double(double, double)>& u0);

// One step of (M + tau S(U)) W+ = M W + tau R U followed by K U+ = M W+.
// Matrices frozen at the current U; one nonsymmetric and one SPD solve.
// With pattern reuse, K is factored once, M + tau S keeps its pattern and
// symbolic analysis across steps, and only the numeric factorization reruns.
class SemilinearStepper {
 public:
  SemilinearStepper(const System& sys, const SchemeConfig& cfg);
  void step(State& state);

 private:
  const System* sys_;
  SchemeConfig cfg_;
  ConvectionAssembler conv_;
  CsrMatrix s_;
  CsrMatrix hyperbolic_;        // M + tau S(U) on the mass stencil
  std::vector<int> s_slots_;    // slots of the convection entries in hyperbolic_
  std::optional<LuSolver> k_lu_;
  std::optional<RefactorableLu> hyp_lu_;
};

// Picard iteration for the fully implicit step. The dense operator
// M - tau R K^-1 M is never formed: each sweep solves the two
// time-independent sparse systems (K - tau R) Yt = r and M Y = K Yt.
class FixedPointStepper {
 public:
  FixedPointStepper(const System& sys, const SchemeConfig& cfg);
  // Advances the state; returns the number of Picard iterations used.
  // Throws on non-convergence, reporting the last iteration error. When
  // iteration_errors is given it receives the relative-change sequence.
  int step(State& state, std::vector<double>* iteration_errors = nullptr);

 private:
  const System* sys_;
  SchemeConfig cfg_;
  ConvectionAssembler conv_;
  CsrMatrix s_;
  std::optional<LuSolver> k_lu_;
  std::optional<LuSolver> m_lu_;
  std::optional<LuSolver> kr_lu_;  // K - tau R
};

struct StepRecord {
  double t = 0.0;
  double u_inf = 0.0;     // max |u_I|
  double w_norm_m = 0.0;  // ||W||_M
  double u_norm_k = 0.0;  // ||U||_K
  double u_norm_m = 0.0;  // ||U||_M
  int fp_iterations = 0;
  double elliptic_residual = 0.0;  // ||K U - M W||_2 / ||M W||_2
  double step_seconds = 0.0;
};

enum class StopReason { time_limit, u_max_reached, error };
const char* to_string(StopReason r);

struct RunStats {
  std::vector<StepRecord> records;  // includes the t=0 baseline
  StopReason stop_reason = StopReason::time_limit;
  std::string error_message;
  int steps = 0;
  double wall_seconds = 0.0;
  // stability report
  double tau = 0.0;
  double khat_inf = 0.0;
  double coercivity_tau_limit = 0.0;  // 1/(2 khat_inf)
  bool coercivity_satisfied = true;
  double contraction_tau_limit_initial = 0.0;
  double contraction_tau_limit_min = 0.0;
};

struct RunControl {
  double t_end = 0.0;
  double u_max = 0.3;     // stop once max_I u_I reaches this value
  int snapshot_every = 0; // in steps; 0 emits only the first and last state
};

using SnapshotSink = std::function<void(const State&, int step_index)>;

// Advances the state until t_end or the u_max stop rule fires, recording
// per-step norms and timings. Step failures end the run with
// StopReason::error and the partial record list intact.
RunStats run(const System& sys, const SchemeConfig& cfg, State& state,
             const RunControl& control, const SnapshotSink& sink = {});

}  // namespace hmfem
