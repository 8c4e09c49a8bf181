#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hmfem/csr.hpp"

namespace hmfem {

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Jacobi-preconditioned conjugate gradient for symmetric positive definite
// systems. Stops once ||Ax - b||_2 <= tol * ||b||_2. max_iterations <= 0
// selects the default cap of 10 * rows.
CgResult solve_spd_cg(const CsrMatrix& a, std::span<const double> b, double tol = 1e-10,
                      int max_iterations = 0);

// Same contract, throwing on non-convergence with the residual in the message.
std::vector<double> solve_spd(const CsrMatrix& a, std::span<const double> b, double tol = 1e-10,
                              int max_iterations = 0);

// Sparse LU factorization of a square nonsingular matrix, reusable across
// right-hand sides.
class LuSolver {
 public:
  explicit LuSolver(const CsrMatrix& a);
  ~LuSolver();
  LuSolver(LuSolver&& other) noexcept;
  LuSolver& operator=(LuSolver&& other) noexcept;
  LuSolver(const LuSolver&) = delete;
  LuSolver& operator=(const LuSolver&) = delete;

  std::vector<double> solve(std::span<const double> b) const;
  int rows() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot direct solve for general square systems; verifies the residual
// against tol and throws if it is not met.
std::vector<double> solve_general(const CsrMatrix& a, std::span<const double> b,
                                  double tol = 1e-10);

// LU for a sequence of matrices sharing one pattern: the fill-reducing
// ordering and symbolic analysis run once, refactor() redoes only the
// numeric factorization.
class RefactorableLu {
 public:
  explicit RefactorableLu(const CsrMatrix& first);
  ~RefactorableLu();
  RefactorableLu(RefactorableLu&& other) noexcept;
  RefactorableLu& operator=(RefactorableLu&& other) noexcept;
  RefactorableLu(const RefactorableLu&) = delete;
  RefactorableLu& operator=(const RefactorableLu&) = delete;

  // a must carry the pattern of the constructor matrix.
  void refactor(const CsrMatrix& a);
  std::vector<double> solve(std::span<const double> b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hmfem
