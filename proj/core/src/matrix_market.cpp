#include "hmfem/matrix_market.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hmfem {

void write_matrix_market(const CsrMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path.string());
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows << ' ' << a.cols << ' ' << a.nnz() << '\n';
  char buf[64];
  for (int r = 0; r < a.rows; ++r) {
    for (int s = a.row_offsets[r]; s < a.row_offsets[r + 1]; ++s) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", r + 1, a.col_indices[s] + 1,
                    a.values[s]);
      out << buf;
    }
  }
  if (!out) throw std::runtime_error("write_matrix_market: write failed for " + path.string());
}

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix_market: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) {
    throw std::runtime_error("read_matrix_market: missing MatrixMarket banner");
  }
  {
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (object != "matrix" || format != "coordinate" || field != "real" ||
        symmetry != "general") {
      throw std::runtime_error("read_matrix_market: unsupported header: " + line);
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  int rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream sizes(line);
    if (!(sizes >> rows >> cols >> nnz)) {
      throw std::runtime_error("read_matrix_market: bad size line");
    }
  }
  std::vector<int> ti, tj;
  std::vector<double> tv;
  ti.reserve(nnz);
  tj.reserve(nnz);
  tv.reserve(nnz);
  for (int k = 0; k < nnz; ++k) {
    int r = 0, c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v)) {
      throw std::runtime_error("read_matrix_market: truncated entry list");
    }
    ti.push_back(r - 1);
    tj.push_back(c - 1);
    tv.push_back(v);
  }
  return csr_from_triplets(rows, cols, ti, tj, tv);
}

}  // namespace hmfem
