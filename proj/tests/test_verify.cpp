#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hmfem/verify.hpp"

using namespace hmfem;

namespace {

double rel_diff(const CsrMatrix& got, const DenseMatrix& want) {
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

}  // namespace

TEST_CASE("dense solver handles a pivoting case") {
  DenseMatrix a(3, 3);
  a.at(0, 0) = 0.0;
  a.at(0, 1) = 2.0;
  a.at(0, 2) = 1.0;
  a.at(1, 0) = 1.0;
  a.at(1, 1) = -1.0;
  a.at(1, 2) = 0.0;
  a.at(2, 0) = 3.0;
  a.at(2, 1) = 0.0;
  a.at(2, 2) = -1.0;
  const std::vector<double> x{1.0, -2.0, 0.5};
  const auto b = dense_matvec(a, x);
  const auto got = dense_solve(a, b);
  for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("coordinate folding matches the index rule") {
  for (int n : {4, 5, 7}) {
    const Mesh mesh = build_mesh(n, -2.0, 1.0, 3.0);
    const auto cls = oracle_fold_classes(mesh);
    for (int i = 1; i <= mesh.node_count(); ++i) {
      CHECK(cls[i - 1] == reduce_index(i, mesh) - 1);
    }
  }
}

TEST_CASE("oracle equivalence over random instances") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int n = 5; n <= 9; n += 2) {
    const Mesh mesh = build_mesh(n, uni(rng), uni(rng), 1.0 + std::abs(uni(rng)));
    CHECK(rel_diff(assemble(mesh, MatrixKind::mass), oracle_assemble_mass(mesh)) <= 1e-12);
    CHECK(rel_diff(assemble(mesh, MatrixKind::stiffness), oracle_assemble_stiffness(mesh)) <=
          1e-12);

    std::vector<double> u(mesh.reduced_dof_count());
    for (double& v : u) v = uni(rng);
    CHECK(rel_diff(assemble_convection(mesh, u), oracle_assemble_convection(mesh, u)) <= 1e-12);

    const double khat = 12.0 * uni(rng);
    CHECK(rel_diff(assemble_drive(mesh, khat), oracle_assemble_drive(mesh, [khat](double, double) {
                     return std::array<double, 2>{khat, 0.0};
                   })) <= 1e-12);

    // a non-constant gradient with linear components (both paths exact)
    const double ax = uni(rng), ay = uni(rng), bx = uni(rng), by = uni(rng);
    const GradientFn grad = [=](double x, double y) {
      return std::array<double, 2>{ax * x + bx * y, ay * y + by * x};
    };
    CHECK(rel_diff(assemble_drive(mesh, grad), oracle_assemble_drive(mesh, grad)) <= 1e-12);

    // unfolded agreement
    std::vector<double> u_full(mesh.node_count());
    for (double& v : u_full) v = uni(rng);
    const CsrMatrix s_un = assemble_convection_unfolded(mesh, u_full);
    const DenseMatrix s_oracle = oracle_assemble_convection_unfolded(mesh, u_full);
    CHECK(rel_diff(s_un, s_oracle) <= 1e-12);
  }
}

TEST_CASE("oracle drive at n=5 matches the closed-form integer matrix") {
  const Mesh mesh = build_mesh(5, 0.0, 0.0, 1.0);
  const double khat = 12.0;
  const DenseMatrix got = oracle_assemble_drive(mesh, [khat](double, double) {
    return std::array<double, 2>{khat, 0.0};
  });
  const DenseMatrix want = expected_drive_integers(5);
  const double unit = mesh.h * khat / 6.0;
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      CHECK(got.at(r, c) == doctest::Approx(unit * want.at(r, c)).epsilon(1e-12).scale(unit));
    }
  }
}

TEST_CASE("negative controls: checks reject what they should") {
  const Mesh mesh = build_mesh(6, 0.0, 0.0, 1.0);
  const CsrMatrix m = assemble(mesh, MatrixKind::mass);
  CHECK(!check_skew(m, 1e-14).pass);       // mass is symmetric, not skew
  CHECK(!check_pattern(m, 6).pass);        // mass carries the diagonal
  std::vector<double> u(mesh.reduced_dof_count());
  for (size_t i = 0; i < u.size(); ++i) u[i] = std::sin(0.7 * i);
  const CsrMatrix s = assemble_convection(mesh, u);
  CHECK(check_skew(s, 1e-14 * max_abs(u)).pass);
  CHECK(check_pattern(s, 6).pass);
  CHECK(check_bounds(s, u).pass);
  // an inflated matrix breaks the entry bound
  CsrMatrix inflated = s;
  for (double& v : inflated.values) v *= 3.0;
  CHECK(!check_bounds(inflated, u).pass);
}

TEST_CASE("monitor flags a skew-broken convection operator") {
  // corrupt the assembly by flipping the sign of every kind-a contribution,
  // then drive the semilinear update by hand with khat = 0
  const Mesh mesh = build_mesh(9, 0.0, 0.0, 1.0);
  const System sys = build_system(mesh, 0.0);
  State s = init_state(sys, [](double x, double y) {
    const double tp = 2.0 * std::numbers::pi;
    return 0.01 * std::sin(tp * y) + 0.006 * std::cos(tp * x);
  });

  const double tau = 0.05;
  RunStats stats;
  stats.tau = tau;
  stats.khat_inf = 0.0;
  const LuSolver k_lu(sys.h1);
  const auto record = [&](const State& st) {
    StepRecord rec;
    rec.t = st.t;
    rec.u_inf = max_abs(st.u);
    rec.w_norm_m = energy_norm(sys.mass, st.w);
    rec.u_norm_k = energy_norm(sys.h1, st.u);
    rec.u_norm_m = energy_norm(sys.mass, st.u);
    stats.records.push_back(rec);
  };
  record(s);
  for (int stepno = 0; stepno < 10; ++stepno) {
    // skew-broken S: kind-a triangles contribute with the wrong sign
    std::vector<int> ti, tj;
    std::vector<double> tv;
    for (int j = 1; j <= mesh.triangle_count(); ++j) {
      const Triangle tri = triangle(j, mesh);
      const double sign = tri.kind == TriangleKind::a ? -1.0 : 1.0;
      std::array<int, 3> d{};
      for (int v = 0; v < 3; ++v) d[v] = reduce_index(tri.vertices[v], mesh) - 1;
      for (int i = 0; i < 3; ++i) {
        const double row = sign * (s.u[d[(i + 2) % 3]] - s.u[d[(i + 1) % 3]]) / 6.0;
        for (int jj = 0; jj < 3; ++jj) {
          ti.push_back(d[i]);
          tj.push_back(d[jj]);
          tv.push_back(row);
        }
      }
    }
    const CsrMatrix s_broken =
        csr_from_triplets(mesh.reduced_dof_count(), mesh.reduced_dof_count(), ti, tj, tv);
    const CsrMatrix hyp = add_scaled(sys.mass, s_broken, 1.0, tau);
    s.w = solve_general(hyp, spmv(sys.mass, s.w), 1e-8);
    s.u = k_lu.solve(spmv(sys.mass, s.w));
    s.t += tau;
    record(s);
  }
  const MonitorReport rep = monitor(stats, 1e-10);
  CHECK(!rep.monotone_k0.pass);
  CHECK(!rep.pass());
}

TEST_CASE("monitor accepts healthy runs") {
  const Mesh mesh = build_mesh(9, 0.0, 0.0, 1.0);
  const System sys = build_system(mesh, 0.0);
  State s = init_state(sys, [](double x, double y) {
    const double tp = 2.0 * std::numbers::pi;
    return 1e-3 * std::sin(tp * y) + 5e-4 * std::cos(tp * x);
  });
  SchemeConfig cfg;
  cfg.tau = 0.05;
  RunControl control;
  control.t_end = 30 * cfg.tau;
  const RunStats stats = run(sys, cfg, s, control);
  const MonitorReport rep = monitor(stats, cfg.solver_tol);
  CHECK(rep.monotone_k0.pass);
  CHECK(rep.growth.pass);
  CHECK(rep.norm_order.pass);
  CHECK(rep.elliptic.pass);
  CHECK(rep.pass());
}

TEST_CASE("verification suite passes end to end") {
  const VerificationSuite suite = run_verification_suite(987);
  for (const auto& c : suite.checks) {
    INFO(c.name, ": ", c.report.detail);
    CHECK(c.report.pass);
  }
  CHECK(suite.pass);
  const std::string json = verification_report_json(suite);
  CHECK(json.find("\"pass\": true") != std::string::npos);
}
