#pragma once

#include <span>
#include <string>
#include <vector>

#include "hmfem/assembly.hpp"
#include "hmfem/csr.hpp"
#include "hmfem/mesh.hpp"
#include "hmfem/stepper.hpp"

namespace hmfem {

struct DenseMatrix {
  int rows = 0, cols = 0;
  std::vector<double> data;  // row-major

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
};

// Gaussian elimination with partial pivoting; the reference linear solver.
std::vector<double> dense_solve(DenseMatrix a, std::vector<double> b);
std::vector<double> dense_matvec(const DenseMatrix& a, std::span<const double> x);

// Brute-force periodic identification by coordinate matching modulo the
// domain period: class ids (0-based) in order of first occurrence, one per
// reduced DOF. Shares no index arithmetic with reduce_index.
std::vector<int> oracle_fold_classes(const Mesh& mesh);

// Reference assembler: 7-point degree-5 quadrature on every triangle, basis
// coefficients from a dense Vandermonde solve, dense accumulation, and
// brute-force folding. Slow on purpose; intended for small n.
DenseMatrix oracle_assemble_mass(const Mesh& mesh);
DenseMatrix oracle_assemble_stiffness(const Mesh& mesh);
DenseMatrix oracle_assemble_convection(const Mesh& mesh, std::span<const double> u_reduced);
DenseMatrix oracle_assemble_drive(const Mesh& mesh, const GradientFn& grad_p);
DenseMatrix oracle_assemble_convection_unfolded(const Mesh& mesh,
                                                std::span<const double> u_full);
DenseMatrix oracle_assemble_drive_unfolded(const Mesh& mesh, const GradientFn& grad_p);

// Dense-arithmetic single-step references built solely on oracle matrices.
State reference_step_semilinear(const Mesh& mesh, const State& state, double tau, double khat);
State reference_step_fixedpoint(const Mesh& mesh, const State& state, double tau, double khat,
                                double fp_tol, int fp_max_iterations);

struct CheckReport {
  bool pass = false;
  double max_violation = 0.0;
  std::string detail;
};

// max |A + A^T| entry against tol.
CheckReport check_skew(const CsrMatrix& a, double tol);
// Pattern equality with the periodic block-tridiagonal-plus-corners stencil.
CheckReport check_pattern(const CsrMatrix& a, int n);
// |S_ij| <= ||u||_inf / 3.
CheckReport check_bounds(const CsrMatrix& s, std::span<const double> u);
// Row and column sums of the constant-khat drive matrix, and the h|khat|/3
// entry bound.
CheckReport check_drive_bounds(const CsrMatrix& r, double h, double khat);

// The expected periodic 6-entry stencil, generated from the block rules
// (diagonal blocks tridiagonal with wrap corners, sub/super blocks bidiagonal
// with wrap entries, plus the two corner blocks).
CsrMatrix expected_periodic_stencil(int n);
// Expected constant-khat drive matrix in integer units of h*khat/6.
DenseMatrix expected_drive_integers(int n);

struct MonitorReport {
  CheckReport growth;       // ||W^{m+1}||_M <= (1 + tau khat_inf) ||W^m||_M
  CheckReport norm_order;   // ||U||_M <= ||U||_K <= ||W||_M per step
  CheckReport monotone_k0;  // khat = 0: ||W||_M non-increasing
  CheckReport elliptic;     // ||K U - M W|| / ||M W|| stays at solver level
  bool pass() const;
};

MonitorReport monitor(const RunStats& stats, double solver_tol = 1e-10);

struct NamedCheck {
  std::string name;
  CheckReport report;
};

struct VerificationSuite {
  std::vector<NamedCheck> checks;
  bool pass = false;
};

// The standard battery: oracle equivalence sweeps, pattern/skew/bound
// properties, sparsity counts, and run monitors on short simulations.
VerificationSuite run_verification_suite(unsigned seed = 20240901);
std::string verification_report_json(const VerificationSuite& suite);

}  // namespace hmfem
