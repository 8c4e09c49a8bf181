#include "hmfem/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hmfem {

std::vector<double> dense_solve(DenseMatrix a, std::vector<double> b) {
  if (a.rows != a.cols || static_cast<int>(b.size()) != a.rows) {
    throw std::invalid_argument("dense_solve: dimension mismatch");
  }
  const int n = a.rows;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int r = k + 1; r < n; ++r) {
      if (std::abs(a.at(r, k)) > std::abs(a.at(piv, k))) piv = r;
    }
    if (a.at(piv, k) == 0.0) throw std::runtime_error("dense_solve: singular matrix");
    if (piv != k) {
      for (int c = k; c < n; ++c) std::swap(a.at(piv, c), a.at(k, c));
      std::swap(b[piv], b[k]);
    }
    for (int r = k + 1; r < n; ++r) {
      const double f = a.at(r, k) / a.at(k, k);
      if (f == 0.0) continue;
      for (int c = k; c < n; ++c) a.at(r, c) -= f * a.at(k, c);
      b[r] -= f * b[k];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a.at(r, c) * x[c];
    x[r] = acc / a.at(r, r);
  }
  return x;
}

std::vector<double> dense_matvec(const DenseMatrix& a, std::span<const double> x) {
  if (static_cast<int>(x.size()) != a.cols) {
    throw std::invalid_argument("dense_matvec: dimension mismatch");
  }
  std::vector<double> y(a.rows, 0.0);
  for (int r = 0; r < a.rows; ++r) {
    double acc = 0.0;
    for (int c = 0; c < a.cols; ++c) acc += a.at(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

std::vector<int> oracle_fold_classes(const Mesh& mesh) {
  const int nn = mesh.node_count();
  const double tol = 1e-9 * mesh.h;
  std::vector<double> wx(nn), wy(nn);
  for (int i = 0; i < nn; ++i) {
    double x = mesh.node_x[i] - mesh.x0;
    double y = mesh.node_y[i] - mesh.y0;
    if (std::abs(x - mesh.side) < tol) x = 0.0;
    if (std::abs(y - mesh.side) < tol) y = 0.0;
    wx[i] = x;
    wy[i] = y;
  }
  std::vector<int> cls(nn, -1);
  int next = 0;
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < i; ++j) {
      if (std::abs(wx[i] - wx[j]) < tol && std::abs(wy[i] - wy[j]) < tol) {
        cls[i] = cls[j];
        break;
      }
    }
    if (cls[i] < 0) cls[i] = next++;
  }
  if (next != mesh.reduced_dof_count()) {
    throw std::logic_error("oracle_fold_classes: class count does not match (n-1)^2");
  }
  return cls;
}

namespace {

struct QuadPoint {
  double l1, l2, l3, w;
};

// degree-5 rule, weights relative to the triangle area
std::array<QuadPoint, 7> quad7() {
  const double s15 = std::sqrt(15.0);
  const double a = (6.0 - s15) / 21.0, wa = (155.0 - s15) / 1200.0;
  const double b = (6.0 + s15) / 21.0, wb = (155.0 + s15) / 1200.0;
  return {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0},
           {a, a, 1.0 - 2.0 * a, wa},
           {a, 1.0 - 2.0 * a, a, wa},
           {1.0 - 2.0 * a, a, a, wa},
           {b, b, 1.0 - 2.0 * b, wb},
           {b, 1.0 - 2.0 * b, b, wb},
           {1.0 - 2.0 * b, b, b, wb}}};
}

// psi = alpha + beta x + gamma y per vertex, from a dense Vandermonde solve
struct OracleBasis {
  std::array<double, 3> alpha, beta, gamma;
  double area;
};

OracleBasis oracle_basis(const std::array<double, 3>& x, const std::array<double, 3>& y) {
  OracleBasis ob{};
  ob.area = 0.5 * std::abs(x[0] * (y[1] - y[2]) + x[1] * (y[2] - y[0]) + x[2] * (y[0] - y[1]));
  for (int i = 0; i < 3; ++i) {
    DenseMatrix v(3, 3);
    for (int r = 0; r < 3; ++r) {
      v.at(r, 0) = 1.0;
      v.at(r, 1) = x[r];
      v.at(r, 2) = y[r];
    }
    std::vector<double> rhs(3, 0.0);
    rhs[i] = 1.0;
    const auto coef = dense_solve(std::move(v), std::move(rhs));
    ob.alpha[i] = coef[0];
    ob.beta[i] = coef[1];
    ob.gamma[i] = coef[2];
  }
  return ob;
}

enum class OracleKind { mass, stiffness, convection, drive };

DenseMatrix oracle_unfolded(const Mesh& mesh, OracleKind kind, std::span<const double> u_full,
                            const GradientFn* grad_p) {
  const int nn = mesh.node_count();
  DenseMatrix e(nn, nn);
  const auto rule = quad7();
  for (int t = 1; t <= mesh.triangle_count(); ++t) {
    const Triangle tri = triangle(t, mesh);
    const std::array<double, 3> x{mesh.node_x[tri.vertices[0] - 1],
                                  mesh.node_x[tri.vertices[1] - 1],
                                  mesh.node_x[tri.vertices[2] - 1]};
    const std::array<double, 3> y{mesh.node_y[tri.vertices[0] - 1],
                                  mesh.node_y[tri.vertices[1] - 1],
                                  mesh.node_y[tri.vertices[2] - 1]};
    const OracleBasis ob = oracle_basis(x, y);
    double ux = 0.0, uy = 0.0;
    if (kind == OracleKind::convection) {
      for (int i = 0; i < 3; ++i) {
        const double ui = u_full[tri.vertices[i] - 1];
        ux += ui * ob.beta[i];
        uy += ui * ob.gamma[i];
      }
    }
    for (const auto& q : rule) {
      const double px = q.l1 * x[0] + q.l2 * x[1] + q.l3 * x[2];
      const double py = q.l1 * y[0] + q.l2 * y[1] + q.l3 * y[2];
      std::array<double, 3> psi{};
      for (int i = 0; i < 3; ++i) psi[i] = ob.alpha[i] + ob.beta[i] * px + ob.gamma[i] * py;
      std::array<double, 2> gp{};
      if (kind == OracleKind::drive) gp = (*grad_p)(px, py);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          double f = 0.0;
          switch (kind) {
            case OracleKind::mass: f = psi[i] * psi[j]; break;
            case OracleKind::stiffness:
              f = ob.beta[i] * ob.beta[j] + ob.gamma[i] * ob.gamma[j];
              break;
            case OracleKind::convection:
              // (V(u) . grad psi_i) psi_j with V(u) = (-u_y, u_x)
              f = (-uy * ob.beta[i] + ux * ob.gamma[i]) * psi[j];
              break;
            case OracleKind::drive:
              f = (gp[0] * ob.gamma[i] - gp[1] * ob.beta[i]) * psi[j];
              break;
          }
          e.at(tri.vertices[i] - 1, tri.vertices[j] - 1) += ob.area * q.w * f;
        }
      }
    }
  }
  return e;
}

DenseMatrix fold_dense(const Mesh& mesh, const DenseMatrix& full) {
  const auto cls = oracle_fold_classes(mesh);
  const int nr = mesh.reduced_dof_count();
  DenseMatrix out(nr, nr);
  for (int i = 0; i < full.rows; ++i) {
    for (int j = 0; j < full.cols; ++j) {
      out.at(cls[i], cls[j]) += full.at(i, j);
    }
  }
  return out;
}

std::vector<double> unfold_vector(const Mesh& mesh, std::span<const double> u_reduced) {
  const auto cls = oracle_fold_classes(mesh);
  std::vector<double> full(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) full[i] = u_reduced[cls[i]];
  return full;
}

}  // namespace

DenseMatrix oracle_assemble_mass(const Mesh& mesh) {
  return fold_dense(mesh, oracle_unfolded(mesh, OracleKind::mass, {}, nullptr));
}

DenseMatrix oracle_assemble_stiffness(const Mesh& mesh) {
  return fold_dense(mesh, oracle_unfolded(mesh, OracleKind::stiffness, {}, nullptr));
}

DenseMatrix oracle_assemble_convection(const Mesh& mesh, std::span<const double> u_reduced) {
  if (static_cast<int>(u_reduced.size()) != mesh.reduced_dof_count()) {
    throw std::invalid_argument("oracle_assemble_convection: DOF vector length mismatch");
  }
  const auto full = unfold_vector(mesh, u_reduced);
  return fold_dense(mesh, oracle_unfolded(mesh, OracleKind::convection, full, nullptr));
}

DenseMatrix oracle_assemble_drive(const Mesh& mesh, const GradientFn& grad_p) {
  return fold_dense(mesh, oracle_unfolded(mesh, OracleKind::drive, {}, &grad_p));
}

DenseMatrix oracle_assemble_convection_unfolded(const Mesh& mesh,
                                                std::span<const double> u_full) {
  if (static_cast<int>(u_full.size()) != mesh.node_count()) {
    throw std::invalid_argument("oracle_assemble_convection_unfolded: need n^2 values");
  }
  return oracle_unfolded(mesh, OracleKind::convection, u_full, nullptr);
}

DenseMatrix oracle_assemble_drive_unfolded(const Mesh& mesh, const GradientFn& grad_p) {
  return oracle_unfolded(mesh, OracleKind::drive, {}, &grad_p);
}

namespace {

struct ReferenceMatrices {
  DenseMatrix mass, h1, drive;
};

ReferenceMatrices reference_matrices(const Mesh& mesh, double khat) {
  ReferenceMatrices rm;
  rm.mass = oracle_assemble_mass(mesh);
  const DenseMatrix a = oracle_assemble_stiffness(mesh);
  rm.h1 = rm.mass;
  for (size_t i = 0; i < rm.h1.data.size(); ++i) rm.h1.data[i] += a.data[i];
  rm.drive = oracle_assemble_drive(mesh, [khat](double, double) {
    return std::array<double, 2>{khat, 0.0};
  });
  return rm;
}

}  // namespace

State reference_step_semilinear(const Mesh& mesh, const State& state, double tau, double khat) {
  const auto rm = reference_matrices(mesh, khat);
  const DenseMatrix s = oracle_assemble_convection(mesh, state.u);
  DenseMatrix hyp = rm.mass;
  for (size_t i = 0; i < hyp.data.size(); ++i) hyp.data[i] += tau * s.data[i];
  auto rhs = dense_matvec(rm.mass, state.w);
  const auto ru = dense_matvec(rm.drive, state.u);
  for (size_t i = 0; i < rhs.size(); ++i) rhs[i] += tau * ru[i];
  State out;
  out.t = state.t + tau;
  out.w = dense_solve(std::move(hyp), std::move(rhs));
  out.u = dense_solve(rm.h1, dense_matvec(rm.mass, out.w));
  return out;
}

State reference_step_fixedpoint(const Mesh& mesh, const State& state, double tau, double khat,
                                double fp_tol, int fp_max_iterations) {
  const auto rm = reference_matrices(mesh, khat);
  DenseMatrix kr = rm.h1;
  for (size_t i = 0; i < kr.data.size(); ++i) kr.data[i] -= tau * rm.drive.data[i];
  const auto z = dense_matvec(rm.mass, state.w);
  std::vector<double> u_k = state.u, y_k = state.w;
  for (int k = 1; k <= fp_max_iterations; ++k) {
    const DenseMatrix s = oracle_assemble_convection(mesh, u_k);
    auto r = z;
    const auto sy = dense_matvec(s, y_k);
    for (size_t i = 0; i < r.size(); ++i) r[i] -= tau * sy[i];
    const auto y_tilde = dense_solve(kr, std::move(r));
    const auto y = dense_solve(rm.mass, dense_matvec(rm.h1, y_tilde));
    const auto u = dense_solve(rm.h1, dense_matvec(rm.mass, y));
    double dy = 0.0, ny = 0.0, du = 0.0, nu = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
      dy += (y[i] - y_k[i]) * (y[i] - y_k[i]);
      ny += y[i] * y[i];
      du += (u[i] - u_k[i]) * (u[i] - u_k[i]);
      nu += u[i] * u[i];
    }
    y_k = y;
    u_k = u;
    const double err = std::max(ny > 0 ? std::sqrt(dy / ny) : 0.0,
                                nu > 0 ? std::sqrt(du / nu) : 0.0);
    if (err <= fp_tol) break;
    if (k == fp_max_iterations) {
      throw std::runtime_error("reference_step_fixedpoint: no convergence");
    }
  }
  State out;
  out.t = state.t + tau;
  out.u = std::move(u_k);
  out.w = std::move(y_k);
  return out;
}

CheckReport check_skew(const CsrMatrix& a, double tol) {
  CheckReport rep;
  const CsrMatrix sum = add_scaled(a, transpose(a), 1.0, 1.0);
  rep.max_violation = max_abs(sum.values);
  rep.pass = rep.max_violation <= tol;
  std::ostringstream os;
  os << "max |A + A'| = " << rep.max_violation << " vs tol " << tol;
  rep.detail = os.str();
  return rep;
}

CsrMatrix expected_periodic_stencil(int n) {
  const int m = n - 1;
  const int ndof = m * m;
  std::vector<std::set<int>> cols(ndof);
  auto wrap = [m](int b) { return (b % m + m) % m; };
  for (int bi = 0; bi < m; ++bi) {
    for (int i = 0; i < m; ++i) {
      const int r = bi * m + i;
      // diagonal block: tridiagonal, zero diagonal, wrap corners
      {
        const int base = bi * m;
        if (i > 0) cols[r].insert(base + i - 1);
        if (i < m - 1) cols[r].insert(base + i + 1);
        if (i == 0) cols[r].insert(base + m - 1);
        if (i == m - 1) cols[r].insert(base);
      }
      // sub-diagonal block (and the upper-right corner): lower bidiagonal
      // with the (0, m-1) wrap entry
      {
        const int base = wrap(bi - 1) * m;
        cols[r].insert(base + i);
        if (i > 0) cols[r].insert(base + i - 1);
        if (i == 0) cols[r].insert(base + m - 1);
      }
      // super-diagonal block (and the lower-left corner): upper bidiagonal
      // with the (m-1, 0) wrap entry
      {
        const int base = wrap(bi + 1) * m;
        cols[r].insert(base + i);
        if (i < m - 1) cols[r].insert(base + i + 1);
        if (i == m - 1) cols[r].insert(base);
      }
    }
  }
  CsrMatrix out;
  out.rows = ndof;
  out.cols = ndof;
  out.row_offsets.assign(ndof + 1, 0);
  for (int r = 0; r < ndof; ++r) {
    out.row_offsets[r + 1] = out.row_offsets[r] + static_cast<int>(cols[r].size());
    out.col_indices.insert(out.col_indices.end(), cols[r].begin(), cols[r].end());
  }
  out.values.assign(out.col_indices.size(), 0.0);
  return out;
}

DenseMatrix expected_drive_integers(int n) {
  const int m = n - 1;
  DenseMatrix out(m * m, m * m);
  auto wrap = [m](int b) { return (b % m + m) % m; };
  for (int bi = 0; bi < m; ++bi) {
    const int rbase = bi * m;
    // diagonal block
    for (int i = 0; i + 1 < m; ++i) {
      out.at(rbase + i, rbase + i + 1) = 1.0;
      out.at(rbase + i + 1, rbase + i) = -1.0;
    }
    out.at(rbase, rbase + m - 1) += -1.0;
    out.at(rbase + m - 1, rbase) += 1.0;
    // sub-diagonal block
    const int sub = wrap(bi - 1) * m;
    for (int i = 0; i < m; ++i) out.at(rbase + i, sub + i) = 2.0;
    for (int i = 0; i + 1 < m; ++i) out.at(rbase + i + 1, sub + i) = 1.0;
    out.at(rbase, sub + m - 1) += 1.0;
    // super-diagonal block
    const int sup = wrap(bi + 1) * m;
    for (int i = 0; i < m; ++i) out.at(rbase + i, sup + i) = -2.0;
    for (int i = 0; i + 1 < m; ++i) out.at(rbase + i, sup + i + 1) = -1.0;
    out.at(rbase + m - 1, sup) += -1.0;
  }
  return out;
}

CheckReport check_pattern(const CsrMatrix& a, int n) {
  CheckReport rep;
  const CsrMatrix expected = expected_periodic_stencil(n);
  if (a.rows != expected.rows || a.cols != expected.cols) {
    rep.detail = "dimension mismatch: got " + std::to_string(a.rows) + "x" +
                 std::to_string(a.cols);
    return rep;
  }
  if (a.row_offsets != expected.row_offsets || a.col_indices != expected.col_indices) {
    for (int r = 0; r < a.rows; ++r) {
      std::set<int> got(a.col_indices.begin() + a.row_offsets[r],
                        a.col_indices.begin() + a.row_offsets[r + 1]);
      std::set<int> want(expected.col_indices.begin() + expected.row_offsets[r],
                         expected.col_indices.begin() + expected.row_offsets[r + 1]);
      if (got != want) {
        rep.detail = "pattern differs in row " + std::to_string(r);
        rep.max_violation = 1.0;
        return rep;
      }
    }
  }
  rep.pass = true;
  rep.detail = "pattern matches the periodic stencil, " + std::to_string(a.nnz()) +
               " stored entries";
  return rep;
}

CheckReport check_bounds(const CsrMatrix& s, std::span<const double> u) {
  CheckReport rep;
  const double bound = max_abs(u) / 3.0;
  const double tol = bound * (1.0 + 1e-12) + 1e-300;
  rep.max_violation = max_abs(s.values);
  rep.pass = rep.max_violation <= tol;
  std::ostringstream os;
  os << "max |S_ij| = " << rep.max_violation << " vs ||u||_inf/3 = " << bound;
  rep.detail = os.str();
  return rep;
}

CheckReport check_drive_bounds(const CsrMatrix& r, double h, double khat) {
  CheckReport rep;
  const double scale = h * std::abs(khat);
  double worst = 0.0;
  for (int row = 0; row < r.rows; ++row) {
    double sum = 0.0;
    for (int s = r.row_offsets[row]; s < r.row_offsets[row + 1]; ++s) sum += r.values[s];
    worst = std::max(worst, std::abs(sum));
  }
  const CsrMatrix rt = transpose(r);
  for (int row = 0; row < rt.rows; ++row) {
    double sum = 0.0;
    for (int s = rt.row_offsets[row]; s < rt.row_offsets[row + 1]; ++s) sum += rt.values[s];
    worst = std::max(worst, std::abs(sum));
  }
  const double entry_bound = scale / 3.0 * (1.0 + 1e-12);
  const double entry_max = max_abs(r.values);
  rep.max_violation = worst;
  rep.pass = worst <= 1e-14 * scale && entry_max <= entry_bound;
  std::ostringstream os;
  os << "max |row/col sum| = " << worst << " vs " << 1e-14 * scale
     << ", max entry = " << entry_max << " vs " << scale / 3.0;
  rep.detail = os.str();
  return rep;
}

bool MonitorReport::pass() const {
  return growth.pass && norm_order.pass && monotone_k0.pass && elliptic.pass;
}

MonitorReport monitor(const RunStats& stats, double solver_tol) {
  MonitorReport rep;
  const double factor = 1.0 + stats.tau * stats.khat_inf;
  double growth_worst = 0.0, order_worst = 0.0, mono_worst = 0.0, ell_worst = 0.0;
  for (size_t k = 0; k + 1 < stats.records.size(); ++k) {
    const double w0 = stats.records[k].w_norm_m;
    const double w1 = stats.records[k + 1].w_norm_m;
    if (w0 > 0.0) {
      growth_worst = std::max(growth_worst, w1 / (factor * w0) - 1.0);
      mono_worst = std::max(mono_worst, w1 / w0 - 1.0);
    }
  }
  for (const auto& recd : stats.records) {
    if (recd.u_norm_k > 0.0) {
      order_worst = std::max(order_worst, recd.u_norm_m / recd.u_norm_k - 1.0);
    }
    if (recd.w_norm_m > 0.0) {
      order_worst = std::max(order_worst, recd.u_norm_k / recd.w_norm_m - 1.0);
    }
    ell_worst = std::max(ell_worst, recd.elliptic_residual);
  }
  rep.growth.max_violation = growth_worst;
  rep.growth.pass = growth_worst <= 1e-12;
  rep.growth.detail = "worst step growth over (1 + tau khat_inf): " + std::to_string(growth_worst);

  rep.norm_order.max_violation = order_worst;
  rep.norm_order.pass = order_worst <= 1e-9;
  rep.norm_order.detail = "worst ordering violation: " + std::to_string(order_worst);

  if (stats.khat_inf == 0.0) {
    rep.monotone_k0.max_violation = mono_worst;
    rep.monotone_k0.pass = mono_worst <= 1e-9;
    rep.monotone_k0.detail = "worst per-step ||W||_M increase: " + std::to_string(mono_worst);
  } else {
    rep.monotone_k0.pass = true;
    rep.monotone_k0.detail = "not applicable (khat_inf != 0)";
  }

  rep.elliptic.max_violation = ell_worst;
  rep.elliptic.pass = ell_worst <= std::max(10.0 * solver_tol, 1e-12);
  rep.elliptic.detail = "worst ||K U - M W|| / ||M W||: " + std::to_string(ell_worst);
  return rep;
}

namespace {

double rel_scale_diff(const CsrMatrix& got, const DenseMatrix& want) {
  double scale = 0.0;
  for (double v : want.data) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  double worst = 0.0;
  for (int r = 0; r < want.rows; ++r) {
    for (int c = 0; c < want.cols; ++c) {
      worst = std::max(worst, std::abs(got.value_at(r, c) - want.at(r, c)));
    }
  }
  return worst / scale;
}

CheckReport equivalence_report(double worst, double tol) {
  CheckReport rep;
  rep.max_violation = worst;
  rep.pass = worst <= tol;
  std::ostringstream os;
  os << "max relative deviation from the reference assembler: " << worst << " vs " << tol;
  rep.detail = os.str();
  return rep;
}

}  // namespace

VerificationSuite run_verification_suite(unsigned seed) {
  VerificationSuite suite;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  double worst_mass = 0.0, worst_stiff = 0.0, worst_conv = 0.0, worst_drive = 0.0;
  bool skew_ok = true, pattern_ok = true, bounds_ok = true, counts_ok = true, dbounds_ok = true;
  double skew_worst = 0.0;
  std::string count_detail = "stored nonzeros match the closed-form counts";
  for (int n = 4; n <= 9; ++n) {
    const Mesh mesh = build_mesh(n, uni(rng), uni(rng), 0.5 + std::abs(uni(rng)));
    const int nr = mesh.reduced_dof_count();
    std::vector<double> u(nr);
    for (double& v : u) v = uni(rng);
    const double khat = 12.0 * uni(rng);

    worst_mass = std::max(worst_mass,
                          rel_scale_diff(assemble(mesh, MatrixKind::mass), oracle_assemble_mass(mesh)));
    worst_stiff = std::max(
        worst_stiff,
        rel_scale_diff(assemble(mesh, MatrixKind::stiffness), oracle_assemble_stiffness(mesh)));
    const CsrMatrix s = assemble_convection(mesh, u);
    worst_conv = std::max(worst_conv, rel_scale_diff(s, oracle_assemble_convection(mesh, u)));
    const CsrMatrix r = assemble_drive(mesh, khat);
    worst_drive = std::max(
        worst_drive, rel_scale_diff(r, oracle_assemble_drive(mesh, [khat](double, double) {
                                      return std::array<double, 2>{khat, 0.0};
                                    })));

    const CheckReport skew = check_skew(s, 1e-14 * std::max(max_abs(u), 1e-30));
    skew_ok = skew_ok && skew.pass;
    skew_worst = std::max(skew_worst, skew.max_violation);
    pattern_ok = pattern_ok && check_pattern(s, n).pass && check_pattern(r, n).pass;
    bounds_ok = bounds_ok && check_bounds(s, u).pass;
    dbounds_ok = dbounds_ok && check_drive_bounds(r, mesh.h, khat).pass;

    const int want_folded = 6 * (n - 1) * (n - 1);
    std::vector<double> u_full(mesh.node_count());
    for (double& v : u_full) v = uni(rng);
    const int got_s_unfolded = assemble_convection_unfolded(mesh, u_full).nnz();
    const int got_r_unfolded = assemble_drive_unfolded(mesh, 3.0).nnz();
    if (s.nnz() != want_folded || r.nnz() != want_folded ||
        got_s_unfolded != 6 * n * n - 4 * n - 2 || got_r_unfolded != 6 * n * n - 8 * n + 4) {
      counts_ok = false;
      count_detail = "count mismatch at n = " + std::to_string(n);
    }
  }
  suite.checks.push_back({"oracle_mass_equivalence", equivalence_report(worst_mass, 1e-12)});
  suite.checks.push_back(
      {"oracle_stiffness_equivalence", equivalence_report(worst_stiff, 1e-12)});
  suite.checks.push_back(
      {"oracle_convection_equivalence", equivalence_report(worst_conv, 1e-12)});
  suite.checks.push_back({"oracle_drive_equivalence", equivalence_report(worst_drive, 1e-12)});
  suite.checks.push_back(
      {"convection_skew", {skew_ok, skew_worst, "max |S + S'| across the sweep"}});
  suite.checks.push_back({"canonical_patterns", {pattern_ok, pattern_ok ? 0.0 : 1.0,
                                                 "block tridiagonal stencil with wrap corners"}});
  suite.checks.push_back(
      {"convection_entry_bounds", {bounds_ok, bounds_ok ? 0.0 : 1.0, "|S_ij| <= ||u||_inf/3"}});
  suite.checks.push_back({"drive_row_col_sums", {dbounds_ok, dbounds_ok ? 0.0 : 1.0,
                                                 "row/col sums vanish, entries <= h|khat|/3"}});
  suite.checks.push_back({"sparsity_counts", {counts_ok, counts_ok ? 0.0 : 1.0, count_detail}});

  // run monitors on two short simulations
  {
    const Mesh mesh = build_mesh(9, 0.0, 0.0, 1.0);
    System sys = build_system(mesh, 0.0);
    State state = init_state(sys, [](double x, double y) {
      const double tp = 2.0 * std::numbers::pi_v<double>;
      return 1e-3 * std::sin(tp * y) + 5e-4 * std::cos(tp * x);
    });
    SchemeConfig cfg;
    cfg.tau = 0.05;
    RunControl control;
    control.t_end = 50 * cfg.tau;
    const RunStats stats = run(sys, cfg, state, control);
    const MonitorReport rep = monitor(stats, cfg.solver_tol);
    suite.checks.push_back({"monitor_conservation_k0", rep.monotone_k0});
    suite.checks.push_back({"monitor_elliptic_consistency", rep.elliptic});
  }
  {
    const Mesh mesh = build_mesh(17, 0.0, 0.0, std::numbers::pi_v<double>);
    System sys = build_system(mesh, 12.0);
    State state = init_state(sys, [](double, double y) { return 1e-5 * std::sin(3.0 * y); });
    SchemeConfig cfg;
    cfg.tau = 0.1;
    RunControl control;
    control.t_end = 30 * cfg.tau;
    const RunStats stats = run(sys, cfg, state, control);
    const MonitorReport rep = monitor(stats, cfg.solver_tol);
    suite.checks.push_back({"monitor_growth_bound", rep.growth});
    suite.checks.push_back({"monitor_norm_ordering", rep.norm_order});
  }

  suite.pass = true;
  for (const auto& c : suite.checks) suite.pass = suite.pass && c.report.pass;
  return suite;
}

std::string verification_report_json(const VerificationSuite& suite) {
  nlohmann::json j;
  j["pass"] = suite.pass;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : suite.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"pass", c.report.pass},
                           {"max_violation", c.report.max_violation},
                           {"detail", c.report.detail}});
  }
  return j.dump(2);
}

}  // namespace hmfem
