#include "hmfem/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hmfem {

double InitialCondition::operator()(double x, double y) const {
  switch (kind) {
    case InitialKind::sin_y: return amplitude * std::sin(wavenumber * y);
    case InitialKind::sin_x: return amplitude * std::sin(wavenumber * x);
    case InitialKind::poly_demo: return 1e-10 * x * y * (x - 2.0) * std::sin(x);
    case InitialKind::gauss_deriv: {
      const double dx = x - center[0];
      const double dy = y - center[1];
      const double s2 = width * width;
      return -amplitude * dx * std::exp(-0.5 * (dx * dx + dy * dy) / s2);
    }
    case InitialKind::expression: {
      if (!compiled_) compiled_ = parse_expression(expr);
      return evaluate(compiled_, x, y);
    }
  }
  return 0.0;
}

std::array<double, 2> DensityProfile::gradient(double x, double y) const {
  switch (kind) {
    case ProfileKind::exponential: return {a, 0.0};
    case ProfileKind::gaussian: {
      // p = ln(n0_amplitude/omega_ci) - ((x-cx)^2 + (y-cy)^2)/width^2
      const double s2 = width * width;
      return {-2.0 * (x - center[0]) / s2, -2.0 * (y - center[1]) / s2};
    }
    case ProfileKind::expression: {
      if (!px_) {
        const ExprPtr p = parse_expression(expr);
        px_ = differentiate(p, 'x');
        py_ = differentiate(p, 'y');
      }
      return {evaluate(px_, x, y), evaluate(py_, x, y)};
    }
  }
  return {0.0, 0.0};
}

std::optional<double> DensityProfile::constant_khat() const {
  if (kind == ProfileKind::exponential) return a;
  return std::nullopt;
}

double DensityProfile::khat_inf(const Mesh& mesh) const {
  if (kind == ProfileKind::exponential) return std::abs(a);
  double m = 0.0;
  for (int i = 0; i < mesh.node_count(); ++i) {
    const auto g = gradient(mesh.node_x[i], mesh.node_y[i]);
    m = std::max(m, std::hypot(g[0], g[1]));
  }
  return m;
}

Preset preset(const std::string& name) {
  const double pi = std::numbers::pi;
  Preset p;
  p.name = name;
  p.profile.kind = ProfileKind::exponential;
  p.profile.a = 12.0;
  p.profile.b = 0.0;
  if (name == "case1") {
    p.side = 1.0;
    p.n = 65;
    p.initial.kind = InitialKind::sin_y;
    p.initial.amplitude = 1e-5;
    p.initial.wavenumber = 10.0 * pi;
    p.t_end = 400.0;
  } else if (name == "case2") {
    p.side = pi;
    p.n = 33;
    p.initial.kind = InitialKind::sin_y;
    p.initial.amplitude = 1e-5;
    p.initial.wavenumber = 3.0;
    p.t_end = 50.0;
  } else if (name == "case3") {
    p.side = pi;
    p.n = 33;
    p.initial.kind = InitialKind::sin_x;
    p.initial.amplitude = 1e-5;
    p.initial.wavenumber = 3.0;
    p.t_end = 100.0;
  } else if (name == "poly_demo") {
    p.side = pi;
    p.n = 33;
    p.initial.kind = InitialKind::poly_demo;
    p.t_end = 100.0;
  } else if (name == "gaussian") {
    p.side = 20.0;
    p.n = 65;
    p.initial.kind = InitialKind::gauss_deriv;
    p.initial.amplitude = 1e-5;
    p.initial.center = {10.0, 10.0};
    p.initial.width = 1.0;
    p.profile.kind = ProfileKind::gaussian;
    p.profile.n0_amplitude = 1e20;
    p.profile.center = {10.0, 10.0};
    p.profile.width = 8.0;
    p.profile.omega_ci = 1e7;
    p.t_end = 50.0;
  } else {
    throw std::invalid_argument("preset: unknown name '" + name +
                                "' (try one of case1, case2, case3, poly_demo, gaussian)");
  }
  return p;
}

std::vector<std::string> preset_names() {
  return {"case1", "case2", "case3", "poly_demo", "gaussian"};
}

}  // namespace hmfem
