#pragma once

#include <filesystem>

#include "hmfem/csr.hpp"

namespace hmfem {

// Coordinate-format MatrixMarket ("matrix coordinate real general"), 1-based
// indices, 17 significant digits. Stored entries are written even when their
// value is zero so patterns survive the round trip.
void write_matrix_market(const CsrMatrix& a, const std::filesystem::path& path);

CsrMatrix read_matrix_market(const std::filesystem::path& path);

}  // namespace hmfem
