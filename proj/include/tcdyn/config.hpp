#pragma once

#include <string>
#include <vector>

#include "tcdyn/flows.hpp"
#include "tcdyn/induction.hpp"
#include "tcdyn/params.hpp"

namespace tcdyn {

enum class RunKind { Hydro, Kinematic, Sweep, Threshold, Nonlinear, Postproc };
const char* to_string(RunKind k);

struct HydroRunOptions {
  std::vector<int> probe_modes;  ///< wavenumbers for the stability probe, empty to skip
  double probe_horizon = 20.0;
};

struct SweepOptions {
  std::vector<double> epsilon;  ///< empty: params.epsilon only
  std::vector<double> Rm;       ///< empty: params.Rm only
};

struct ThresholdOptions {
  double lo = 100.0, hi = 300.0;
  double rtol = 0.02;
};

struct NonlinearOptions {
  double t_end = 100.0;
  long diag_every = 10;       ///< steps between diagnostics rows
  double seed_energy = 1e-6;  ///< conductor energy of the initial m=1 field
  double noise_time = -1.0;   ///< inject antisymmetric noise at this time (< 0: never)
  double noise_fraction = 1e-3;
  double probe_r = 1.2, probe_theta = 0.0, probe_z = -0.5;
};

/// Everything a run needs. Text form: `key = value` lines grouped by
/// `[section]`; `#` starts a comment. Numbers accept fractions such as 1/40,
/// lists are comma separated. Keys before the first section belong to [run].
struct RunConfig {
  RunKind kind = RunKind::Kinematic;
  SimParams params;
  FlowKind flow = FlowKind::Modified;
  std::string out_dir = "out";
  long snapshot_every = 0;    ///< steps between snapshots (0: final only)
  long checkpoint_every = 0;  ///< steps between checkpoints (0: final only)
  unsigned long long seed = 1;
  std::string resume;
  int workers = 1;

  HydroRunOptions hydro;
  KinematicOptions kinematic;
  SweepOptions sweep;
  ThresholdOptions threshold;
  NonlinearOptions nonlinear;
  std::string postproc_input;  ///< directory with CSVs, default out_dir

  /// Set by validation when dx <= 1/100.
  bool full_scale = false;

  /// Throws ConfigError naming the offending field.
  void validate();
};

/// Parses and validates. Unknown sections or keys, malformed values and
/// invariant violations throw ConfigError ("line N: ..." for syntax).
RunConfig parse_config(const std::string& text);

/// Resolved configuration in the same text form; parse_config(to_text(c))
/// reproduces c exactly.
std::string to_text(const RunConfig& c);

}  // namespace tcdyn
