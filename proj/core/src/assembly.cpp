#include "hmfem/assembly.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace hmfem {

namespace {

double signed_area(const Vec3& x, const Vec3& y) {
  return 0.5 * (x[0] * (y[1] - y[2]) + x[1] * (y[2] - y[0]) + x[2] * (y[0] - y[1]));
}

void require_positive_area(double area) {
  if (!(area > 0.0)) {
    throw std::invalid_argument("local matrix: degenerate or negatively oriented triangle");
  }
}

}  // namespace

LocalBasis local_basis(const Vec3& x, const Vec3& y) {
  LocalBasis lb;
  lb.area = signed_area(x, y);
  require_positive_area(lb.area);
  const double inv2a = 1.0 / (2.0 * lb.area);
  for (int i = 0; i < 3; ++i) {
    const int p = (i + 1) % 3, q = (i + 2) % 3;
    lb.a[i] = (x[p] * y[q] - x[q] * y[p]) * inv2a;
    lb.bhat[i] = y[q] - y[p];
    lb.chat[i] = x[q] - x[p];
    lb.b[i] = -lb.bhat[i] * inv2a;
    lb.c[i] = lb.chat[i] * inv2a;
  }
  return lb;
}

Mat3 local_mass(const Vec3& x, const Vec3& y) {
  const double area = signed_area(x, y);
  require_positive_area(area);
  Mat3 m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = (i == j ? area / 6.0 : area / 12.0);
  }
  return m;
}

Mat3 local_stiffness(const Vec3& x, const Vec3& y) {
  const LocalBasis lb = local_basis(x, y);
  Mat3 k{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      k[i][j] = lb.area * (lb.b[i] * lb.b[j] + lb.c[i] * lb.c[j]);
    }
  }
  return k;
}

Mat3 local_convection(const Vec3& x, const Vec3& y, const Vec3& u_local) {
  const LocalBasis lb = local_basis(x, y);
  const double d = 1.0 / (12.0 * lb.area);
  const double bu = lb.bhat[0] * u_local[0] + lb.bhat[1] * u_local[1] + lb.bhat[2] * u_local[2];
  const double cu = lb.chat[0] * u_local[0] + lb.chat[1] * u_local[1] + lb.chat[2] * u_local[2];
  Mat3 s{};
  for (int i = 0; i < 3; ++i) {
    const double row = d * (cu * lb.bhat[i] - bu * lb.chat[i]);
    for (int j = 0; j < 3; ++j) s[i][j] = row;
  }
  return s;
}

Mat3 local_convection_uniform(const Vec3& u_local) {
  Mat3 s{};
  for (int i = 0; i < 3; ++i) {
    const double row = (u_local[(i + 2) % 3] - u_local[(i + 1) % 3]) / 6.0;
    for (int j = 0; j < 3; ++j) s[i][j] = row;
  }
  return s;
}

Mat3 local_drive(const Vec3& x, const Vec3& y, double khat) {
  const LocalBasis lb = local_basis(x, y);
  Mat3 r{};
  for (int i = 0; i < 3; ++i) {
    const double row = khat / 6.0 * lb.chat[i];
    for (int j = 0; j < 3; ++j) r[i][j] = row;
  }
  return r;
}

Mat3 local_drive(const Vec3& x, const Vec3& y, const GradientFn& grad_p) {
  const LocalBasis lb = local_basis(x, y);
  Mat3 r{};
  const double w = lb.area / 3.0;
  for (int e = 0; e < 3; ++e) {
    const int p = e, q = (e + 1) % 3;  // edge p-q, midpoint quadrature node
    const double mx = 0.5 * (x[p] + x[q]);
    const double my = 0.5 * (y[p] + y[q]);
    const auto g = grad_p(mx, my);
    for (int i = 0; i < 3; ++i) {
      const double f = g[0] * lb.c[i] - g[1] * lb.b[i];
      // psi_j at the midpoint of edge p-q is 1/2 for j in {p, q}, else 0
      r[i][p] += w * f * 0.5;
      r[i][q] += w * f * 0.5;
    }
  }
  return r;
}

Vec3 triangle_x(const Mesh& mesh, const Triangle& t) {
  return {mesh.node_x[t.vertices[0] - 1], mesh.node_x[t.vertices[1] - 1],
          mesh.node_x[t.vertices[2] - 1]};
}

Vec3 triangle_y(const Mesh& mesh, const Triangle& t) {
  return {mesh.node_y[t.vertices[0] - 1], mesh.node_y[t.vertices[1] - 1],
          mesh.node_y[t.vertices[2] - 1]};
}

namespace {

// 0-based DOF triple per triangle; folded applies the periodic identification.
std::vector<std::array<int, 3>> triangle_dofs(const Mesh& mesh, bool folded) {
  std::vector<std::array<int, 3>> out(mesh.triangle_count());
  for (int j = 1; j <= mesh.triangle_count(); ++j) {
    const Triangle t = triangle(j, mesh);
    for (int v = 0; v < 3; ++v) {
      out[j - 1][v] = folded ? reduce_index(t.vertices[v], mesh) - 1 : t.vertices[v] - 1;
    }
  }
  return out;
}

CsrMatrix pattern_from_columns(int ndof, const std::vector<std::vector<int>>& cols_per_row) {
  CsrMatrix out;
  out.rows = ndof;
  out.cols = ndof;
  out.row_offsets.assign(ndof + 1, 0);
  for (int r = 0; r < ndof; ++r) {
    out.row_offsets[r + 1] = out.row_offsets[r] + static_cast<int>(cols_per_row[r].size());
  }
  out.col_indices.reserve(out.row_offsets[ndof]);
  for (int r = 0; r < ndof; ++r) {
    out.col_indices.insert(out.col_indices.end(), cols_per_row[r].begin(),
                           cols_per_row[r].end());
  }
  out.values.assign(out.col_indices.size(), 0.0);
  return out;
}

// Canonical convection pattern: entry (r, c) is kept only when the linear
// functional it stores, sum_k coef_k U_k in units of 1/6, is not identically
// zero. Contributions to (d_i, d_j) are +1 on U_{d_{i+2}} and -1 on
// U_{d_{i+1}}; on interior diagonals they telescope to nothing.
CsrMatrix convection_pattern(const std::vector<std::array<int, 3>>& tris, int ndof) {
  std::vector<std::map<int, std::map<int, int>>> sym(ndof);
  for (const auto& d : tris) {
    for (int i = 0; i < 3; ++i) {
      const int plus = d[(i + 2) % 3];
      const int minus = d[(i + 1) % 3];
      for (int j = 0; j < 3; ++j) {
        auto& coef = sym[d[i]][d[j]];
        coef[plus] += 1;
        coef[minus] -= 1;
      }
    }
  }
  std::vector<std::vector<int>> cols(ndof);
  for (int r = 0; r < ndof; ++r) {
    for (const auto& [c, coef] : sym[r]) {
      for (const auto& [k, v] : coef) {
        if (v != 0) {
          cols[r].push_back(c);
          break;
        }
      }
    }
  }
  return pattern_from_columns(ndof, cols);
}

// Integer weights of chat/h per local row: kind a is (-1, 0, 1), kind b is
// (0, -1, 1).
std::array<int, 3> drive_weights(TriangleKind kind) {
  return kind == TriangleKind::a ? std::array<int, 3>{-1, 0, 1} : std::array<int, 3>{0, -1, 1};
}

// Accumulated integer drive matrix in units of h*khat/6; exact zeros are
// dropped from the pattern.
CsrMatrix drive_integers(const std::vector<std::array<int, 3>>& tris, int ndof) {
  std::vector<std::map<int, int>> sym(ndof);
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
    const auto w = drive_weights(t % 2 == 0 ? TriangleKind::a : TriangleKind::b);
    const auto& d = tris[t];
    for (int i = 0; i < 3; ++i) {
      if (w[i] == 0) continue;
      for (int j = 0; j < 3; ++j) sym[d[i]][d[j]] += w[i];
    }
  }
  std::vector<std::vector<int>> cols(ndof);
  for (int r = 0; r < ndof; ++r) {
    for (const auto& [c, v] : sym[r]) {
      if (v != 0) cols[r].push_back(c);
    }
  }
  CsrMatrix out = pattern_from_columns(ndof, cols);
  for (int r = 0; r < ndof; ++r) {
    for (int s = out.row_offsets[r]; s < out.row_offsets[r + 1]; ++s) {
      out.values[s] = static_cast<double>(sym[r][out.col_indices[s]]);
    }
  }
  return out;
}

// All (d_i, d_j) pairs sharing a triangle, diagonal included.
CsrMatrix stencil_pattern(const std::vector<std::array<int, 3>>& tris, int ndof) {
  std::vector<std::set<int>> colset(ndof);
  for (const auto& d : tris) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) colset[d[i]].insert(d[j]);
    }
  }
  std::vector<std::vector<int>> cols(ndof);
  for (int r = 0; r < ndof; ++r) cols[r].assign(colset[r].begin(), colset[r].end());
  return pattern_from_columns(ndof, cols);
}

template <typename LocalFn>
CsrMatrix assemble_on_pattern(const Mesh& mesh, const std::vector<std::array<int, 3>>& tris,
                              CsrMatrix pattern, LocalFn&& local) {
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
    const Triangle tri = triangle(t + 1, mesh);
    const Mat3 m = local(tri);
    const auto& d = tris[t];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int slot = pattern.find_slot(d[i], d[j]);
        if (slot < 0) throw std::logic_error("assemble: entry missing from pattern");
        pattern.values[slot] += m[i][j];
      }
    }
  }
  return pattern;
}

}  // namespace

CsrMatrix assemble(const Mesh& mesh, MatrixKind kind) {
  const auto tris = triangle_dofs(mesh, true);
  CsrMatrix pattern = stencil_pattern(tris, mesh.reduced_dof_count());
  return assemble_on_pattern(mesh, tris, std::move(pattern), [&](const Triangle& t) {
    const Vec3 x = triangle_x(mesh, t);
    const Vec3 y = triangle_y(mesh, t);
    return kind == MatrixKind::mass ? local_mass(x, y) : local_stiffness(x, y);
  });
}

CsrMatrix assemble_h1(const Mesh& mesh) {
  return add_scaled(assemble(mesh, MatrixKind::mass), assemble(mesh, MatrixKind::stiffness),
                    1.0, 1.0);
}

CsrMatrix assemble_drive(const Mesh& mesh, double khat) {
  const auto tris = triangle_dofs(mesh, true);
  CsrMatrix r = drive_integers(tris, mesh.reduced_dof_count());
  const double scale = mesh.h * khat / 6.0;
  for (double& v : r.values) v *= scale;
  return r;
}

CsrMatrix assemble_drive(const Mesh& mesh, const GradientFn& grad_p) {
  const auto tris = triangle_dofs(mesh, true);
  CsrMatrix pattern = stencil_pattern(tris, mesh.reduced_dof_count());
  return assemble_on_pattern(mesh, tris, std::move(pattern), [&](const Triangle& t) {
    return local_drive(triangle_x(mesh, t), triangle_y(mesh, t), grad_p);
  });
}

ConvectionAssembler::ConvectionAssembler(const Mesh& mesh)
    : tri_dofs_(triangle_dofs(mesh, true)) {
  pattern_ = convection_pattern(tri_dofs_, mesh.reduced_dof_count());
  slots_.resize(tri_dofs_.size() * 9);
  for (size_t t = 0; t < tri_dofs_.size(); ++t) {
    const auto& d = tri_dofs_[t];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        slots_[t * 9 + i * 3 + j] = pattern_.find_slot(d[i], d[j]);
      }
    }
  }
}

void ConvectionAssembler::refresh(std::span<const double> u, CsrMatrix& into) const {
  if (static_cast<int>(u.size()) != pattern_.rows) {
    throw std::invalid_argument("ConvectionAssembler::refresh: DOF vector length mismatch");
  }
  if (!into.same_pattern(pattern_)) {
    throw std::invalid_argument("ConvectionAssembler::refresh: pattern mismatch");
  }
  std::fill(into.values.begin(), into.values.end(), 0.0);
  for (size_t t = 0; t < tri_dofs_.size(); ++t) {
    const auto& d = tri_dofs_[t];
    const int* slot = &slots_[t * 9];
    for (int i = 0; i < 3; ++i) {
      const double row = (u[d[(i + 2) % 3]] - u[d[(i + 1) % 3]]) / 6.0;
      for (int j = 0; j < 3; ++j) {
        const int s = slot[i * 3 + j];
        if (s >= 0) into.values[s] += row;
      }
    }
  }
}

CsrMatrix ConvectionAssembler::assemble(std::span<const double> u) const {
  CsrMatrix out = pattern_;
  refresh(u, out);
  return out;
}

CsrMatrix assemble_convection(const Mesh& mesh, std::span<const double> u) {
  return ConvectionAssembler(mesh).assemble(u);
}

CsrMatrix assemble_convection_unfolded(const Mesh& mesh, std::span<const double> u_full) {
  if (static_cast<int>(u_full.size()) != mesh.node_count()) {
    throw std::invalid_argument("assemble_convection_unfolded: need one value per node");
  }
  const auto tris = triangle_dofs(mesh, false);
  CsrMatrix out = convection_pattern(tris, mesh.node_count());
  for (const auto& d : tris) {
    for (int i = 0; i < 3; ++i) {
      const double row = (u_full[d[(i + 2) % 3]] - u_full[d[(i + 1) % 3]]) / 6.0;
      for (int j = 0; j < 3; ++j) {
        const int s = out.find_slot(d[i], d[j]);
        if (s >= 0) out.values[s] += row;
      }
    }
  }
  return out;
}

CsrMatrix assemble_drive_unfolded(const Mesh& mesh, double khat) {
  const auto tris = triangle_dofs(mesh, false);
  CsrMatrix r = drive_integers(tris, mesh.node_count());
  const double scale = mesh.h * khat / 6.0;
  for (double& v : r.values) v *= scale;
  return r;
}

}  // namespace hmfem
