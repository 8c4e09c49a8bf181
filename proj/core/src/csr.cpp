#include "hmfem/csr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hmfem {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

int CsrMatrix::find_slot(int r, int c) const {
  if (r < 0 || r >= rows) return -1;
  const auto begin = col_indices.begin() + row_offsets[r];
  const auto end = col_indices.begin() + row_offsets[r + 1];
  const auto it = std::lower_bound(begin, end, c);
  if (it == end || *it != c) return -1;
  return static_cast<int>(it - col_indices.begin());
}

double CsrMatrix::value_at(int r, int c) const {
  const int slot = find_slot(r, c);
  return slot < 0 ? 0.0 : values[slot];
}

bool CsrMatrix::same_pattern(const CsrMatrix& other) const {
  return rows == other.rows && cols == other.cols && row_offsets == other.row_offsets &&
         col_indices == other.col_indices;
}

CsrMatrix csr_from_triplets(int rows, int cols, std::span<const int> ti,
                            std::span<const int> tj, std::span<const double> tv) {
  require(rows >= 0 && cols >= 0, "csr_from_triplets: negative dimension");
  require(ti.size() == tj.size() && ti.size() == tv.size(),
          "csr_from_triplets: triplet arrays differ in length");
  const size_t m = ti.size();
  for (size_t k = 0; k < m; ++k) {
    require(ti[k] >= 0 && ti[k] < rows && tj[k] >= 0 && tj[k] < cols,
            "csr_from_triplets: index out of range");
  }
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return ti[a] != ti[b] ? ti[a] < ti[b] : tj[a] < tj[b];
  });

  CsrMatrix out;
  out.rows = rows;
  out.cols = cols;
  out.row_offsets.assign(rows + 1, 0);
  out.col_indices.reserve(m);
  out.values.reserve(m);
  int prev_r = -1, prev_c = -1;
  for (size_t k = 0; k < m; ++k) {
    const size_t p = order[k];
    if (ti[p] == prev_r && tj[p] == prev_c) {
      out.values.back() += tv[p];
      continue;
    }
    prev_r = ti[p];
    prev_c = tj[p];
    out.col_indices.push_back(tj[p]);
    out.values.push_back(tv[p]);
    out.row_offsets[ti[p] + 1]++;
  }
  for (int r = 0; r < rows; ++r) out.row_offsets[r + 1] += out.row_offsets[r];
  return out;
}

std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x) {
  require(static_cast<int>(x.size()) == a.cols, "spmv: dimension mismatch");
  std::vector<double> y(a.rows, 0.0);
  for (int r = 0; r < a.rows; ++r) {
    double acc = 0.0;
    for (int s = a.row_offsets[r]; s < a.row_offsets[r + 1]; ++s) {
      acc += a.values[s] * x[a.col_indices[s]];
    }
    y[r] = acc;
  }
  return y;
}

CsrMatrix add_scaled(const CsrMatrix& a, const CsrMatrix& b, double alpha, double beta) {
  require(a.rows == b.rows && a.cols == b.cols, "add_scaled: dimension mismatch");
  CsrMatrix out;
  out.rows = a.rows;
  out.cols = a.cols;
  out.row_offsets.assign(a.rows + 1, 0);
  out.col_indices.reserve(a.nnz() + b.nnz());
  out.values.reserve(a.nnz() + b.nnz());
  for (int r = 0; r < a.rows; ++r) {
    int ia = a.row_offsets[r], ea = a.row_offsets[r + 1];
    int ib = b.row_offsets[r], eb = b.row_offsets[r + 1];
    while (ia < ea || ib < eb) {
      const int ca = ia < ea ? a.col_indices[ia] : out.cols;
      const int cb = ib < eb ? b.col_indices[ib] : out.cols;
      if (ca < cb) {
        out.col_indices.push_back(ca);
        out.values.push_back(alpha * a.values[ia++]);
      } else if (cb < ca) {
        out.col_indices.push_back(cb);
        out.values.push_back(beta * b.values[ib++]);
      } else {
        out.col_indices.push_back(ca);
        out.values.push_back(alpha * a.values[ia++] + beta * b.values[ib++]);
      }
    }
    out.row_offsets[r + 1] = static_cast<int>(out.col_indices.size());
  }
  return out;
}

CsrMatrix transpose(const CsrMatrix& a) {
  CsrMatrix out;
  out.rows = a.cols;
  out.cols = a.rows;
  out.row_offsets.assign(a.cols + 1, 0);
  for (int c : a.col_indices) out.row_offsets[c + 1]++;
  for (int r = 0; r < out.rows; ++r) out.row_offsets[r + 1] += out.row_offsets[r];
  out.col_indices.resize(a.nnz());
  out.values.resize(a.nnz());
  std::vector<int> next(out.row_offsets.begin(), out.row_offsets.end() - 1);
  for (int r = 0; r < a.rows; ++r) {
    for (int s = a.row_offsets[r]; s < a.row_offsets[r + 1]; ++s) {
      const int pos = next[a.col_indices[s]]++;
      out.col_indices[pos] = r;
      out.values[pos] = a.values[s];
    }
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot: length mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double energy_norm(const CsrMatrix& a, std::span<const double> v) {
  const auto av = spmv(a, v);
  const double q = dot(v, av);
  return std::sqrt(std::max(q, 0.0));
}

}  // namespace hmfem
