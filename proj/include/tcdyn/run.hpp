#pragma once

#include <ostream>

#include "tcdyn/config.hpp"

namespace tcdyn {

/// Process exit codes of the command line driver.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitSolver = 3, kExitNoConvergence = 4 };

/// Runs the pipeline selected by `cfg.kind`, writing into cfg.out_dir:
///   config.resolved            the exact configuration used
///   hydro       hydro.csv, residuals.csv, flow.bin [, stability.csv]
///   kinematic   growth.csv, kinematic.csv, eigenvector.bin
///   sweep       sweep.csv (per-point files under sweep_points/)
///   threshold   threshold.csv, threshold_evals.csv
///   nonlinear   energy.csv, modal.csv, probe.csv, dipole.csv,
///               checkpoints/ckpt_<step>.bin, snapshots/, final.bin
///   postproc    *.svg from the CSVs found in the input directory
/// Throws ConfigError, SolverError or NoConvergence.
void execute(const RunConfig& cfg, std::ostream& log);

/// execute() with exceptions mapped to exit codes and reported on `log`.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace tcdyn
