#include "hmfem/solvers.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hmfem {

CgResult solve_spd_cg(const CsrMatrix& a, std::span<const double> b, double tol,
                      int max_iterations) {
  if (a.rows != a.cols) throw std::invalid_argument("solve_spd: matrix not square");
  if (static_cast<int>(b.size()) != a.rows) {
    throw std::invalid_argument("solve_spd: right-hand side length mismatch");
  }
  const int n = a.rows;
  if (max_iterations <= 0) max_iterations = 10 * n;

  std::vector<double> inv_diag(n, 1.0);
  for (int r = 0; r < n; ++r) {
    const double d = a.value_at(r, r);
    if (!(d > 0.0)) throw std::invalid_argument("solve_spd: nonpositive diagonal entry");
    inv_diag[r] = 1.0 / d;
  }

  CgResult res;
  res.x.assign(n, 0.0);
  std::vector<double> r(b.begin(), b.end());
  const double bnorm = norm2(r);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  std::vector<double> z(n), p(n), ap;
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iterations; ++it) {
    ap = spmv(a, p);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      throw std::runtime_error("solve_spd: matrix is not positive definite (p'Ap <= 0)");
    }
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) res.x[i] += alpha * p[i];
    for (int i = 0; i < n; ++i) r[i] -= alpha * ap[i];
    res.iterations = it;
    res.relative_residual = norm2(r) / bnorm;
    if (res.relative_residual <= tol) {
      res.converged = true;
      return res;
    }
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

std::vector<double> solve_spd(const CsrMatrix& a, std::span<const double> b, double tol,
                              int max_iterations) {
  CgResult res = solve_spd_cg(a, b, tol, max_iterations);
  if (!res.converged) {
    throw std::runtime_error("solve_spd: no convergence after " +
                             std::to_string(res.iterations) +
                             " iterations, relative residual " +
                             std::to_string(res.relative_residual));
  }
  return std::move(res.x);
}

struct LuSolver::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  int n = 0;
};

LuSolver::LuSolver(const CsrMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows != a.cols) throw std::invalid_argument("LuSolver: matrix not square");
  impl_->n = a.rows;
  Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> mapped(
      a.rows, a.cols, a.nnz(), a.row_offsets.data(), a.col_indices.data(), a.values.data());
  Eigen::SparseMatrix<double> col_major = mapped;
  impl_->lu.compute(col_major);
  if (impl_->lu.info() != Eigen::Success) {
    throw std::runtime_error("LuSolver: factorization failed (matrix singular?)");
  }
}

LuSolver::~LuSolver() = default;
LuSolver::LuSolver(LuSolver&& other) noexcept = default;
LuSolver& LuSolver::operator=(LuSolver&& other) noexcept = default;

int LuSolver::rows() const { return impl_->n; }

std::vector<double> LuSolver::solve(std::span<const double> b) const {
  if (static_cast<int>(b.size()) != impl_->n) {
    throw std::invalid_argument("LuSolver::solve: right-hand side length mismatch");
  }
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), impl_->n);
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success) {
    throw std::runtime_error("LuSolver::solve: back substitution failed");
  }
  return std::vector<double>(x.data(), x.data() + impl_->n);
}

struct RefactorableLu::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  Eigen::SparseMatrix<double> a;  // column-major copy whose values get rewritten
  std::vector<int> pattern_offsets;
  std::vector<int> pattern_indices;
  int n = 0;
};

namespace {

Eigen::SparseMatrix<double> to_col_major(const CsrMatrix& a) {
  Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> mapped(
      a.rows, a.cols, a.nnz(), a.row_offsets.data(), a.col_indices.data(), a.values.data());
  return Eigen::SparseMatrix<double>(mapped);
}

}  // namespace

RefactorableLu::RefactorableLu(const CsrMatrix& first) : impl_(std::make_unique<Impl>()) {
  if (first.rows != first.cols) throw std::invalid_argument("RefactorableLu: matrix not square");
  impl_->n = first.rows;
  impl_->pattern_offsets = first.row_offsets;
  impl_->pattern_indices = first.col_indices;
  impl_->a = to_col_major(first);
  impl_->lu.isSymmetric(false);
  impl_->lu.analyzePattern(impl_->a);
  impl_->lu.factorize(impl_->a);
  if (impl_->lu.info() != Eigen::Success) {
    throw std::runtime_error("RefactorableLu: factorization failed (matrix singular?)");
  }
}

RefactorableLu::~RefactorableLu() = default;
RefactorableLu::RefactorableLu(RefactorableLu&& other) noexcept = default;
RefactorableLu& RefactorableLu::operator=(RefactorableLu&& other) noexcept = default;

void RefactorableLu::refactor(const CsrMatrix& a) {
  if (a.row_offsets != impl_->pattern_offsets || a.col_indices != impl_->pattern_indices) {
    throw std::invalid_argument("RefactorableLu::refactor: pattern mismatch");
  }
  // same pattern, so the column-major conversion places values identically
  impl_->a = to_col_major(a);
  impl_->lu.factorize(impl_->a);
  if (impl_->lu.info() != Eigen::Success) {
    throw std::runtime_error("RefactorableLu::refactor: factorization failed");
  }
}

std::vector<double> RefactorableLu::solve(std::span<const double> b) const {
  if (static_cast<int>(b.size()) != impl_->n) {
    throw std::invalid_argument("RefactorableLu::solve: right-hand side length mismatch");
  }
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), impl_->n);
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success) {
    throw std::runtime_error("RefactorableLu::solve: back substitution failed");
  }
  return std::vector<double>(x.data(), x.data() + impl_->n);
}

std::vector<double> solve_general(const CsrMatrix& a, std::span<const double> b, double tol) {
  LuSolver lu(a);
  std::vector<double> x = lu.solve(b);
  const auto ax = spmv(a, x);
  double rn = 0.0;
  for (size_t i = 0; i < ax.size(); ++i) {
    const double d = ax[i] - b[i];
    rn += d * d;
  }
  rn = std::sqrt(rn);
  const double bn = norm2(b);
  if (rn > tol * (bn > 0.0 ? bn : 1.0)) {
    throw std::runtime_error("solve_general: residual " + std::to_string(rn) +
                             " exceeds tolerance");
  }
  return x;
}

}  // namespace hmfem
