#pragma once

#include <filesystem>

#include "hmfem/config.hpp"
#include "hmfem/snapshot.hpp"

namespace hmfem {

struct RunOutput {
  RunStats stats;
  State final_state;
  std::filesystem::path output_dir;
  int snapshots_written = 0;
};

System system_from_config(const RunConfig& cfg);

// Validates, assembles, runs, and writes snapshot_XXXXXX.csv plus stats.json
// into cfg.run.output_dir. stats.json is written even when a step fails.
RunOutput run_from_config(const RunConfig& cfg);

}  // namespace hmfem
