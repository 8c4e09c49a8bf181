#include "hmfem/mesh.hpp"

#include <stdexcept>
#include <string>

namespace hmfem {

Mesh build_mesh(int n, double x0, double y0, double side) {
  if (n < 3) {
    throw std::invalid_argument("build_mesh: n must be >= 3, got " + std::to_string(n));
  }
  if (!(side > 0.0)) {
    throw std::invalid_argument("build_mesh: side length must be positive");
  }
  Mesh m;
  m.n = n;
  m.x0 = x0;
  m.y0 = y0;
  m.side = side;
  m.h = side / (n - 1);
  m.node_x.resize(static_cast<size_t>(n) * n);
  m.node_y.resize(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m.node_x[static_cast<size_t>(j) * n + i] = x0 + i * m.h;
      m.node_y[static_cast<size_t>(j) * n + i] = y0 + j * m.h;
    }
  }
  return m;
}

Triangle triangle(int index, const Mesh& mesh) {
  if (index < 1 || index > mesh.triangle_count()) {
    throw std::out_of_range("triangle: index " + std::to_string(index) + " outside 1.." +
                            std::to_string(mesh.triangle_count()));
  }
  const int n = mesh.n;
  const int j = (index + 1) / 2;            // cell counter, 1..(n-1)^2
  const int c = (j + n - 2) / (n - 1) - 1;  // ceil(j/(n-1)) - 1
  Triangle t;
  t.index = index;
  t.area = 0.5 * mesh.h * mesh.h;
  if (index % 2 == 1) {
    t.kind = TriangleKind::a;
    t.vertices = {j + c, j + n + 1 + c, j + n + c};
  } else {
    t.kind = TriangleKind::b;
    t.vertices = {j + c, j + 1 + c, j + n + 1 + c};
  }
  return t;
}

int reduce_index(int full_index, const Mesh& mesh) {
  const int n = mesh.n;
  if (full_index < 1 || full_index > n * n) {
    throw std::out_of_range("reduce_index: node " + std::to_string(full_index) + " outside 1.." +
                            std::to_string(n * n));
  }
  int row = (full_index - 1) / n;  // 0-based grid row
  int col = full_index - row * n;  // 1..n
  if (col == n) col = 1;           // right edge folds onto the left
  if (row == n - 1) row = 0;       // top edge folds onto the bottom
  return row * (n - 1) + col;
}

PeriodicMap periodic_map(const Mesh& mesh) {
  const int n = mesh.n;
  PeriodicMap map;
  map.full_to_reduced.resize(static_cast<size_t>(n) * n);
  map.reduced_to_full.assign(static_cast<size_t>(n - 1) * (n - 1), 0);
  for (int i = 1; i <= n * n; ++i) {
    const int r = reduce_index(i, mesh);
    map.full_to_reduced[i - 1] = r;
    if (map.reduced_to_full[r - 1] == 0) map.reduced_to_full[r - 1] = i;
  }
  return map;
}

}  // namespace hmfem
