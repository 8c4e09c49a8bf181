#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hmfem/expression.hpp"
#include "hmfem/mesh.hpp"

namespace hmfem {

enum class InitialKind { sin_y, sin_x, poly_demo, gauss_deriv, expression };

struct InitialCondition {
  InitialKind kind = InitialKind::sin_y;
  double amplitude = 1e-5;
  double wavenumber = 1.0;
  std::array<double, 2> center{0.0, 0.0};  // gauss_deriv
  double width = 1.0;
  std::string expr;

  double operator()(double x, double y) const;

 private:
  mutable ExprPtr compiled_;
};

enum class ProfileKind { exponential, gaussian, expression };

// Background density profile entering through p = ln(n0 / omega_ci).
struct DensityProfile {
  ProfileKind kind = ProfileKind::exponential;
  // exponential: n0/omega_ci = e^(a x + b), so p_x = a is the constant khat
  double a = 0.0;
  double b = 0.0;
  // gaussian: n0 = n0_amplitude * exp(-((x-cx)^2 + (y-cy)^2) / width^2)
  double n0_amplitude = 1e20;
  std::array<double, 2> center{0.0, 0.0};
  double width = 8.0;
  double omega_ci = 1e7;
  // expression: p itself as an analytic string
  std::string expr;

  std::array<double, 2> gradient(double x, double y) const;
  // Set exactly when the profile is the exponential one (p_y = 0, p_x const).
  std::optional<double> constant_khat() const;
  // sup |grad p| sampled over the mesh nodes; the run's stability constant.
  double khat_inf(const Mesh& mesh) const;

 private:
  mutable ExprPtr px_, py_;
};

struct Preset {
  std::string name;
  double x0 = 0.0, y0 = 0.0, side = 1.0;
  int n = 33;
  InitialCondition initial;
  DensityProfile profile;
  double tau = 0.1;
  double t_end = 50.0;
  double u_max = 0.3;
};

// Catalog of the reference experiments. Throws std::invalid_argument for
// unknown names; preset_names() lists the valid ones.
Preset preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace hmfem
