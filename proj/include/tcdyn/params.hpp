#pragma once

#include <string>

namespace tcdyn {

/// Non-dimensional control parameters. Lengths are in units of R_o - R_i,
/// velocities in units of Omega_i R_i.
struct SimParams {
  double Re = 120.0;
  double Rm = 200.0;
  double eta = 0.5;    ///< radius ratio, fixed
  double Gamma = 2.0;  ///< aspect ratio, fixed
  double Omega_i = 1.0;
  double A = 0.0;
  double epsilon = 1.0;
  int M = 4;
  double dx = 1.0 / 40;
  double dt = 0.025;
  double Rv = 4.0;
  double Zv = 2.0;
  double vacuum_stretch = 1.0;
  bool inner_core_rotating = true;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

}  // namespace tcdyn
