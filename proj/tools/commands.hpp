#pragma once

#include <string>

#include "cxtomo/config.hpp"

namespace cxtomo {

/// End-to-end experiment commands behind the CLI subcommands. Each one is
/// deterministic given the config (seeds included) and idempotent; outputs
/// land in config.out_dir, which is created if missing.

/// Writes f_true.csv, b.csv, and noise.txt (norms and the achieved
/// noise-to-signal ratio).
void cmd_simulate(const ExperimentConfig& config);

/// Reads the observation vector from b_path and runs the configured solver.
/// Writes fhat.csv, fhat.pgm, and history.csv; passing a true image enables
/// the error column of the history.
void cmd_reconstruct(const ExperimentConfig& config, const std::string& b_path,
                     const std::string& ftrue_path = {});

/// Writes spectrum.csv and kappa.txt.
void cmd_spectrum(const ExperimentConfig& config);

/// Writes picard.csv for the observations at b_path.
void cmd_picard(const ExperimentConfig& config, const std::string& b_path);

/// Writes visible.csv, the 0/1 grid of ray-reachable nodes.
void cmd_visible(const ExperimentConfig& config);

}  // namespace cxtomo
