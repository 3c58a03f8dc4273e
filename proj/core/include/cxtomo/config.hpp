#pragma once

#include <cstdint>
#include <string>

#include "cxtomo/common.hpp"
#include "cxtomo/model.hpp"
#include "cxtomo/solvers.hpp"

namespace cxtomo {

/// One experiment, parsed from a flat "key = value" file ('#' starts a
/// comment). Every field has the documented default, so an empty file is a
/// valid configuration.
struct ExperimentConfig {
  // Grid
  int n = 51;
  double extent = 7.0;
  double t_final = 2.0;
  int n_slices = 40;

  // Detector mask label: "full" or "KxK" centered squares.
  std::string mask = "full";

  // Phantom
  PhantomKind phantom = PhantomKind::dots;
  int phantom_count = 20;
  Box2 phantom_box{-3.0, 3.0, -3.0, 3.0};
  double phantom_amplitude = 1.0;
  std::uint64_t phantom_seed = 1;

  // Noise
  double noise_level = 0.02;
  std::uint64_t noise_seed = 1;

  // Solver
  SolverConfig solver;

  // Diagnostics
  double visible_tolerance = 0.0;  // 0 selects dx/2
  double rank_tolerance = 1e-12;

  // Execution
  std::string out_dir = "out";
  bool keep_iterates = false;
  int threads = 0;  // 0 = hardware default

  GridSpec make_grid_spec() const;
  PhantomSpec make_phantom_spec() const;
  NoiseSpec make_noise_spec() const;
};

/// Throws ConfigError on unknown keys, malformed values, or inconsistent
/// settings (e.g. a CFL-violating grid surfaces here as ConfigError).
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Emits every key in a fixed order; parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace cxtomo
