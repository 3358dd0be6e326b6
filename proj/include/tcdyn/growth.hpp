#pragma once

#include <vector>

namespace tcdyn {

/// Exponential fit of a field growth rate from energies, E ~ exp(2 sigma t).
struct GrowthRateEstimate {
  double sigma = 0.0;
  double t0 = 0.0, t1 = 0.0;  ///< fit window
  double goodness = 0.0;      ///< 1 - rms residual of ln E over the window
  int mode = 0;
  bool reliable = false;      ///< goodness above threshold and window long enough
};

/// Least-squares slope of ln E over an automatically chosen late window:
/// the earliest start after which the slope over sliding sub-windows stays
/// within `drift` of the final one. Throws NoConvergence when no exponential
/// regime is found.
GrowthRateEstimate estimate_growth_rate(const std::vector<double>& t, const std::vector<double>& E,
                                        int mode = 0, double min_goodness = 0.95, double drift = 0.05);

/// Same fit without throwing; `reliable` reports the outcome.
GrowthRateEstimate try_growth_rate(const std::vector<double>& t, const std::vector<double>& E, int mode = 0,
                                   double min_goodness = 0.95, double drift = 0.05);

}  // namespace tcdyn
