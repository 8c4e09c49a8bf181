#pragma once

#include <filesystem>

#include "hmfem/config.hpp"
#include "hmfem/mesh.hpp"
#include "hmfem/stepper.hpp"

namespace hmfem {

// CSV with header x,y,u,w and one row per full-grid node in index order;
// periodic values are replicated on the closing edges so surfaces plot
// seamlessly. 17 significant digits.
void write_snapshot(const State& state, const Mesh& mesh, const std::filesystem::path& path);

// Reads the reduced vectors back from a snapshot (t is not stored).
State read_snapshot(const Mesh& mesh, const std::filesystem::path& path);

void write_stats_json(const RunStats& stats, const RunConfig& cfg,
                      const std::filesystem::path& path);

}  // namespace hmfem
