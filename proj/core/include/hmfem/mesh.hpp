#pragma once

#include <array>
#include <vector>

namespace hmfem {

enum class TriangleKind { a, b };

struct Triangle {
  int index = 0;                  // 1..2(n-1)^2
  TriangleKind kind = TriangleKind::a;
  std::array<int, 3> vertices{};  // global node indices, counter-clockwise
  double area = 0.0;
};

// Uniform triangulation of the square [x0, x0+side] x [y0, y0+side] with n
// nodes per side. Nodes are numbered 1..n^2 from left to right, bottom to
// top; every grid cell splits into an upper-left (a) and a lower-right (b)
// triangle, numbered in the same sweep order. Identifying opposite edges
// periodically leaves (n-1)^2 independent DOFs.
struct Mesh {
  int n = 0;        // nodes per side
  double x0 = 0.0;
  double y0 = 0.0;
  double side = 0.0;
  double h = 0.0;   // node spacing, side/(n-1)
  std::vector<double> node_x;  // size n^2, node I at [I-1]
  std::vector<double> node_y;

  int node_count() const { return n * n; }
  int triangle_count() const { return 2 * (n - 1) * (n - 1); }
  int reduced_dof_count() const { return (n - 1) * (n - 1); }
};

// Node index <-> periodic DOF index maps, all 1-based. The representative of
// a DOF is the smallest node index in its identification class.
struct PeriodicMap {
  std::vector<int> full_to_reduced;  // size n^2
  std::vector<int> reduced_to_full;  // size (n-1)^2
};

Mesh build_mesh(int n, double x0, double y0, double side);

// Triangle j (1-based). Odd indices are kind a, even are kind b.
Triangle triangle(int index, const Mesh& mesh);

// Periodic DOF of a full node index (both 1-based).
int reduce_index(int full_index, const Mesh& mesh);

PeriodicMap periodic_map(const Mesh& mesh);

}  // namespace hmfem
