#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "hmfem/csr.hpp"
#include "hmfem/mesh.hpp"

namespace hmfem {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// Coefficients of the linear nodal basis psi_i = a_i + b_i x + c_i y on a
// single triangle, together with the vertex-difference vectors bhat, chat
// that drive the closed-form local matrices: bhat_i = y_{i+2} - y_{i+1} and
// chat_i = x_{i+2} - x_{i+1} (cyclic), so b_i = -bhat_i/(2 area) and
// c_i = chat_i/(2 area).
struct LocalBasis {
  double area = 0.0;
  Vec3 a{}, b{}, c{};
  Vec3 bhat{}, chat{};
};

LocalBasis local_basis(const Vec3& x, const Vec3& y);

// Exact P1 element matrices: mass area/12*(1+delta_ij), stiffness
// area*(b_i b_j + c_i c_j).
Mat3 local_mass(const Vec3& x, const Vec3& y);
Mat3 local_stiffness(const Vec3& x, const Vec3& y);

// Convection entries int (V(u).grad psi_i) psi_j with V(u) = (-u_y, u_x) and
// u the linear interpolant of u_local. Every row is constant across columns:
// row i equals (chat.u * bhat_i - bhat.u * chat_i) / (12 area).
Mat3 local_convection(const Vec3& x, const Vec3& y, const Vec3& u_local);
// Uniform-grid specialization: rows (u3-u2, u1-u3, u2-u1)/6.
Mat3 local_convection_uniform(const Vec3& u_local);

// Background-drive entries int khat psi_{i,y} psi_j for constant khat:
// row i equals khat/6 * chat_i.
Mat3 local_drive(const Vec3& x, const Vec3& y, double khat);

// General background gradient (p_x, p_y): entries
// int (p_x psi_{i,y} - p_y psi_{i,x}) psi_j, integrated with the
// edge-midpoint rule (exact when the gradient is linear).
using GradientFn = std::function<std::array<double, 2>(double, double)>;
Mat3 local_drive(const Vec3& x, const Vec3& y, const GradientFn& grad_p);

Vec3 triangle_x(const Mesh& mesh, const Triangle& t);
Vec3 triangle_y(const Mesh& mesh, const Triangle& t);

enum class MatrixKind { mass, stiffness };

// Global matrices on the (n-1)^2 periodic DOFs. assemble_h1 returns
// K = M + A, the Gram matrix of the H1 inner product.
CsrMatrix assemble(const Mesh& mesh, MatrixKind kind);
CsrMatrix assemble_h1(const Mesh& mesh);

// Drive matrix R. The constant-khat form stores the canonical 6-entry
// stencil with values that are exact integer multiples of h*khat/6; the
// general form integrates the given gradient and also carries the diagonal.
CsrMatrix assemble_drive(const Mesh& mesh, double khat);
CsrMatrix assemble_drive(const Mesh& mesh, const GradientFn& grad_p);

// Skew-symmetric convection matrix S(U) with a reusable canonical pattern.
// The pattern depends only on the mesh topology; refresh() rewrites values
// in place for a new U. Entries whose contributions cancel identically
// (notably the diagonal) are never stored.
class ConvectionAssembler {
 public:
  explicit ConvectionAssembler(const Mesh& mesh);

  const CsrMatrix& pattern() const { return pattern_; }
  // Overwrite the values of `into`, which must carry the canonical pattern.
  void refresh(std::span<const double> u, CsrMatrix& into) const;
  CsrMatrix assemble(std::span<const double> u) const;

 private:
  CsrMatrix pattern_;
  std::vector<std::array<int, 3>> tri_dofs_;  // 0-based reduced DOFs
  std::vector<int> slots_;                    // 9 per triangle, -1 = dropped
};

CsrMatrix assemble_convection(const Mesh& mesh, std::span<const double> u);

// Unfolded variants on the full n^2 node set, no periodic identification.
CsrMatrix assemble_convection_unfolded(const Mesh& mesh, std::span<const double> u_full);
CsrMatrix assemble_drive_unfolded(const Mesh& mesh, double khat);

}  // namespace hmfem
