#pragma once

#include <span>
#include <vector>

namespace hmfem {

// Compressed sparse row matrix. Column indices are sorted within each row and
// hold no duplicate (row, col) pairs. Pattern (offsets + indices) and values
// are separable: values may be overwritten in place without touching the
// pattern.
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_offsets;  // size rows+1
  std::vector<int> col_indices;  // size nnz, sorted per row
  std::vector<double> values;    // size nnz

  int nnz() const { return static_cast<int>(col_indices.size()); }

  // Slot of entry (r, c) in col_indices/values, -1 if not stored. 0-based.
  int find_slot(int r, int c) const;
  // Stored value at (r, c), zero if absent.
  double value_at(int r, int c) const;
  bool same_pattern(const CsrMatrix& other) const;
};

// Build from triplets (0-based, any order); duplicates are summed.
CsrMatrix csr_from_triplets(int rows, int cols, std::span<const int> ti,
                            std::span<const int> tj, std::span<const double> tv);

// y = A x, row-major accumulation in fixed index order.
std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x);

// alpha*A + beta*B on the union of the two patterns.
CsrMatrix add_scaled(const CsrMatrix& a, const CsrMatrix& b, double alpha, double beta);

CsrMatrix transpose(const CsrMatrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double max_abs(std::span<const double> v);

// sqrt(v' A v) for a symmetric positive semi-definite A; clamps the tiny
// negative values roundoff can produce.
double energy_norm(const CsrMatrix& a, std::span<const double> v);

}  // namespace hmfem
