#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hmfem/assembly.hpp"
#include "hmfem/stepper.hpp"

namespace {

std::vector<double> wave_dofs(const hmfem::Mesh& mesh) {
  const hmfem::PeriodicMap map = periodic_map(mesh);
  std::vector<double> u(mesh.reduced_dof_count());
  for (int r = 0; r < mesh.reduced_dof_count(); ++r) {
    const double y = mesh.node_y[map.reduced_to_full[r] - 1];
    u[r] = 1e-3 * std::sin(3.0 * y);
  }
  return u;
}

void BM_ConvectionRefresh(benchmark::State& state) {
  const hmfem::Mesh mesh = hmfem::build_mesh(static_cast<int>(state.range(0)), 0.0, 0.0, 1.0);
  const hmfem::ConvectionAssembler conv(mesh);
  hmfem::CsrMatrix s = conv.pattern();
  const auto u = wave_dofs(mesh);
  for (auto _ : state) {
    conv.refresh(u, s);
    benchmark::DoNotOptimize(s.values.data());
  }
}
BENCHMARK(BM_ConvectionRefresh)->Arg(17)->Arg(33)->Arg(65)->Arg(129);

void BM_ConvectionFromScratch(benchmark::State& state) {
  const hmfem::Mesh mesh = hmfem::build_mesh(static_cast<int>(state.range(0)), 0.0, 0.0, 1.0);
  const auto u = wave_dofs(mesh);
  for (auto _ : state) {
    const hmfem::CsrMatrix s = hmfem::assemble_convection(mesh, u);
    benchmark::DoNotOptimize(s.nnz());
  }
}
BENCHMARK(BM_ConvectionFromScratch)->Arg(17)->Arg(33)->Arg(65)->Arg(129);

void BM_SemilinearStep(benchmark::State& state) {
  const hmfem::Mesh mesh =
      hmfem::build_mesh(static_cast<int>(state.range(0)), 0.0, 0.0, std::numbers::pi);
  const hmfem::System sys = hmfem::build_system(mesh, 12.0);
  hmfem::State st = hmfem::init_state(
      sys, [](double, double y) { return 1e-5 * std::sin(3.0 * y); });
  hmfem::SchemeConfig cfg;
  cfg.tau = 0.1;
  cfg.reuse_pattern = state.range(1) == 1;
  hmfem::SemilinearStepper stepper(sys, cfg);
  for (auto _ : state) {
    stepper.step(st);
    benchmark::DoNotOptimize(st.u.data());
  }
}
BENCHMARK(BM_SemilinearStep)
    ->ArgsProduct({{33, 65}, {0, 1}})
    ->ArgNames({"n", "reuse"})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
