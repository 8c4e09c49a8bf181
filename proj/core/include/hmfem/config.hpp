#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "hmfem/problems.hpp"
#include "hmfem/stepper.hpp"

namespace hmfem {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MeshConfig {
  int n = 33;
  double x0 = 0.0;
  double y0 = 0.0;
  double side = 1.0;
};

struct SolverConfig {
  double tol = 1e-10;
  int max_iterations = 0;  // 0: default cap
};

struct OutputConfig {
  double t_end = 10.0;
  double u_max = 0.3;
  int snapshot_every = 0;
  std::string output_dir = "out";
};

struct RunConfig {
  MeshConfig mesh;
  InitialCondition initial;
  DensityProfile profile;
  SchemeConfig scheme;
  SolverConfig solver;
  OutputConfig run;
};

RunConfig config_from_preset(const Preset& p);

// Flat "section.key = value" text, one entry per line, '#' comments.
// Serialization is lossless (17 significant digits) and parse() of the
// result reproduces the config exactly.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& cfg);

// Throws ConfigError naming the offending field.
void validate_config(const RunConfig& cfg);

}  // namespace hmfem
