#include "hmfem/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hmfem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + value + "' as a number");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + value + "' as an integer");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

const char* initial_kind_name(InitialKind k) {
  switch (k) {
    case InitialKind::sin_y: return "sin_y";
    case InitialKind::sin_x: return "sin_x";
    case InitialKind::poly_demo: return "poly_demo";
    case InitialKind::gauss_deriv: return "gauss_deriv";
    case InitialKind::expression: return "expression";
  }
  return "sin_y";
}

InitialKind parse_initial_kind(const std::string& value) {
  if (value == "sin_y") return InitialKind::sin_y;
  if (value == "sin_x") return InitialKind::sin_x;
  if (value == "poly_demo") return InitialKind::poly_demo;
  if (value == "gauss_deriv") return InitialKind::gauss_deriv;
  if (value == "expression") return InitialKind::expression;
  throw ConfigError("problem.initial.kind: unknown kind '" + value + "'");
}

const char* profile_kind_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::exponential: return "exponential";
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::expression: return "expression";
  }
  return "exponential";
}

ProfileKind parse_profile_kind(const std::string& value) {
  if (value == "exponential") return ProfileKind::exponential;
  if (value == "gaussian") return ProfileKind::gaussian;
  if (value == "expression") return ProfileKind::expression;
  throw ConfigError("problem.profile.kind: unknown kind '" + value + "'");
}

}  // namespace

RunConfig config_from_preset(const Preset& p) {
  RunConfig cfg;
  cfg.mesh.n = p.n;
  cfg.mesh.x0 = p.x0;
  cfg.mesh.y0 = p.y0;
  cfg.mesh.side = p.side;
  cfg.initial = p.initial;
  cfg.profile = p.profile;
  cfg.scheme.tau = p.tau;
  cfg.run.t_end = p.t_end;
  cfg.run.u_max = p.u_max;
  cfg.run.output_dir = "out_" + p.name;
  return cfg;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "mesh.n") {
      cfg.mesh.n = parse_int(key, value);
    } else if (key == "mesh.x0") {
      cfg.mesh.x0 = parse_double(key, value);
    } else if (key == "mesh.y0") {
      cfg.mesh.y0 = parse_double(key, value);
    } else if (key == "mesh.side") {
      cfg.mesh.side = parse_double(key, value);
    } else if (key == "problem.initial.kind") {
      cfg.initial.kind = parse_initial_kind(value);
    } else if (key == "problem.initial.amplitude") {
      cfg.initial.amplitude = parse_double(key, value);
    } else if (key == "problem.initial.wavenumber") {
      cfg.initial.wavenumber = parse_double(key, value);
    } else if (key == "problem.initial.center_x") {
      cfg.initial.center[0] = parse_double(key, value);
    } else if (key == "problem.initial.center_y") {
      cfg.initial.center[1] = parse_double(key, value);
    } else if (key == "problem.initial.width") {
      cfg.initial.width = parse_double(key, value);
    } else if (key == "problem.initial.expr") {
      cfg.initial.expr = value;
    } else if (key == "problem.profile.kind") {
      cfg.profile.kind = parse_profile_kind(value);
    } else if (key == "problem.profile.a") {
      cfg.profile.a = parse_double(key, value);
    } else if (key == "problem.profile.b") {
      cfg.profile.b = parse_double(key, value);
    } else if (key == "problem.profile.n0_amplitude") {
      cfg.profile.n0_amplitude = parse_double(key, value);
    } else if (key == "problem.profile.center_x") {
      cfg.profile.center[0] = parse_double(key, value);
    } else if (key == "problem.profile.center_y") {
      cfg.profile.center[1] = parse_double(key, value);
    } else if (key == "problem.profile.width") {
      cfg.profile.width = parse_double(key, value);
    } else if (key == "problem.profile.omega_ci") {
      cfg.profile.omega_ci = parse_double(key, value);
    } else if (key == "problem.profile.expr") {
      cfg.profile.expr = value;
    } else if (key == "scheme.kind") {
      if (value == "semilinear") {
        cfg.scheme.scheme = Scheme::semilinear;
      } else if (value == "fixedpoint") {
        cfg.scheme.scheme = Scheme::fixedpoint;
      } else {
        throw ConfigError("scheme.kind: unknown scheme '" + value + "'");
      }
    } else if (key == "scheme.tau") {
      cfg.scheme.tau = parse_double(key, value);
    } else if (key == "scheme.fp_tol") {
      cfg.scheme.fp_tol = parse_double(key, value);
    } else if (key == "scheme.fp_max_iterations") {
      cfg.scheme.fp_max_iterations = parse_int(key, value);
    } else if (key == "scheme.stability_mode") {
      if (value == "warn") {
        cfg.scheme.stability_mode = StabilityMode::warn;
      } else if (value == "enforce") {
        cfg.scheme.stability_mode = StabilityMode::enforce;
      } else {
        throw ConfigError("scheme.stability_mode: expected warn or enforce");
      }
    } else if (key == "scheme.contraction_safety") {
      cfg.scheme.contraction_safety = parse_double(key, value);
    } else if (key == "scheme.reuse_pattern") {
      cfg.scheme.reuse_pattern = parse_bool(key, value);
    } else if (key == "solver.tol") {
      cfg.solver.tol = parse_double(key, value);
    } else if (key == "solver.max_iterations") {
      cfg.solver.max_iterations = parse_int(key, value);
    } else if (key == "run.t_end") {
      cfg.run.t_end = parse_double(key, value);
    } else if (key == "run.u_max") {
      cfg.run.u_max = parse_double(key, value);
    } else if (key == "run.snapshot_every") {
      cfg.run.snapshot_every = parse_int(key, value);
    } else if (key == "run.output_dir") {
      cfg.run.output_dir = value;
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "mesh.n = " << cfg.mesh.n << "\n";
  out << "mesh.x0 = " << fmt(cfg.mesh.x0) << "\n";
  out << "mesh.y0 = " << fmt(cfg.mesh.y0) << "\n";
  out << "mesh.side = " << fmt(cfg.mesh.side) << "\n";
  out << "problem.initial.kind = " << initial_kind_name(cfg.initial.kind) << "\n";
  out << "problem.initial.amplitude = " << fmt(cfg.initial.amplitude) << "\n";
  out << "problem.initial.wavenumber = " << fmt(cfg.initial.wavenumber) << "\n";
  out << "problem.initial.center_x = " << fmt(cfg.initial.center[0]) << "\n";
  out << "problem.initial.center_y = " << fmt(cfg.initial.center[1]) << "\n";
  out << "problem.initial.width = " << fmt(cfg.initial.width) << "\n";
  if (!cfg.initial.expr.empty()) out << "problem.initial.expr = " << cfg.initial.expr << "\n";
  out << "problem.profile.kind = " << profile_kind_name(cfg.profile.kind) << "\n";
  out << "problem.profile.a = " << fmt(cfg.profile.a) << "\n";
  out << "problem.profile.b = " << fmt(cfg.profile.b) << "\n";
  out << "problem.profile.n0_amplitude = " << fmt(cfg.profile.n0_amplitude) << "\n";
  out << "problem.profile.center_x = " << fmt(cfg.profile.center[0]) << "\n";
  out << "problem.profile.center_y = " << fmt(cfg.profile.center[1]) << "\n";
  out << "problem.profile.width = " << fmt(cfg.profile.width) << "\n";
  out << "problem.profile.omega_ci = " << fmt(cfg.profile.omega_ci) << "\n";
  if (!cfg.profile.expr.empty()) out << "problem.profile.expr = " << cfg.profile.expr << "\n";
  out << "scheme.kind = "
      << (cfg.scheme.scheme == Scheme::semilinear ? "semilinear" : "fixedpoint") << "\n";
  out << "scheme.tau = " << fmt(cfg.scheme.tau) << "\n";
  out << "scheme.fp_tol = " << fmt(cfg.scheme.fp_tol) << "\n";
  out << "scheme.fp_max_iterations = " << cfg.scheme.fp_max_iterations << "\n";
  out << "scheme.stability_mode = "
      << (cfg.scheme.stability_mode == StabilityMode::warn ? "warn" : "enforce") << "\n";
  out << "scheme.contraction_safety = " << fmt(cfg.scheme.contraction_safety) << "\n";
  out << "scheme.reuse_pattern = " << (cfg.scheme.reuse_pattern ? "true" : "false") << "\n";
  out << "solver.tol = " << fmt(cfg.solver.tol) << "\n";
  out << "solver.max_iterations = " << cfg.solver.max_iterations << "\n";
  out << "run.t_end = " << fmt(cfg.run.t_end) << "\n";
  out << "run.u_max = " << fmt(cfg.run.u_max) << "\n";
  out << "run.snapshot_every = " << cfg.run.snapshot_every << "\n";
  out << "run.output_dir = " << cfg.run.output_dir << "\n";
  return out.str();
}

void validate_config(const RunConfig& cfg) {
  if (cfg.mesh.n < 3) throw ConfigError("mesh.n: must be >= 3");
  if (!(cfg.mesh.side > 0.0)) throw ConfigError("mesh.side: must be positive");
  if (!(cfg.scheme.tau > 0.0)) throw ConfigError("scheme.tau: must be positive");
  if (!(cfg.scheme.fp_tol > 0.0)) throw ConfigError("scheme.fp_tol: must be positive");
  if (cfg.scheme.fp_max_iterations < 1) {
    throw ConfigError("scheme.fp_max_iterations: must be >= 1");
  }
  if (!(cfg.scheme.contraction_safety > 0.0)) {
    throw ConfigError("scheme.contraction_safety: must be positive");
  }
  if (!(cfg.solver.tol > 0.0)) throw ConfigError("solver.tol: must be positive");
  if (cfg.solver.max_iterations < 0) throw ConfigError("solver.max_iterations: must be >= 0");
  if (cfg.run.t_end < 0.0) throw ConfigError("run.t_end: must be >= 0");
  if (!(cfg.run.u_max > 0.0)) throw ConfigError("run.u_max: must be positive");
  if (cfg.run.snapshot_every < 0) throw ConfigError("run.snapshot_every: must be >= 0");
  if (cfg.run.output_dir.empty()) throw ConfigError("run.output_dir: must not be empty");
  if (cfg.initial.kind == InitialKind::expression) {
    if (cfg.initial.expr.empty()) throw ConfigError("problem.initial.expr: missing expression");
    try {
      parse_expression(cfg.initial.expr);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("problem.initial.expr: ") + e.what());
    }
  }
  if (cfg.profile.kind == ProfileKind::expression) {
    if (cfg.profile.expr.empty()) throw ConfigError("problem.profile.expr: missing expression");
    try {
      parse_expression(cfg.profile.expr);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("problem.profile.expr: ") + e.what());
    }
  }
  if (cfg.profile.kind == ProfileKind::gaussian && !(cfg.profile.width > 0.0)) {
    throw ConfigError("problem.profile.width: must be positive");
  }
}

}  // namespace hmfem
