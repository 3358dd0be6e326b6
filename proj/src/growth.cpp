#include "tcdyn/growth.hpp"

#include <algorithm>
#include <cmath>

#include "tcdyn/error.hpp"

namespace tcdyn {
namespace {

struct Fit {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
};

Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y, std::size_t a, std::size_t b) {
  const double n = static_cast<double>(b - a);
  double sx = 0, sy = 0;
  for (std::size_t i = a; i < b; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = a; i < b; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Fit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = a; i < b; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

}  // namespace

GrowthRateEstimate try_growth_rate(const std::vector<double>& t, const std::vector<double>& E, int mode,
                                   double min_goodness, double drift) {
  GrowthRateEstimate g;
  g.mode = mode;
  const std::size_t n = std::min(t.size(), E.size());
  if (n < 8) return g;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(E[i] > 0.0) || !std::isfinite(E[i])) return g;
    y[i] = std::log(E[i]);
  }
  // sliding sub-windows of 20% of the record, stepping by 5%
  const std::size_t w = std::max<std::size_t>(4, n / 5);
  const std::size_t stepw = std::max<std::size_t>(1, n / 20);
  const Fit last = linear_fit(t, y, n - w, n);
  // tolerance on the energy slope: relative, with a floor for slopes near 0
  const double tol = drift * std::abs(last.slope) + 1e-4;
  std::size_t start = n - w;
  for (std::size_t s = n - w;; s -= std::min(s, stepw)) {
    const Fit f = linear_fit(t, y, s, s + w);
    if (std::abs(f.slope - last.slope) > tol) break;
    start = s;
    if (s == 0) break;
  }
  const std::size_t first = start;
  const Fit fit = linear_fit(t, y, first, n);
  g.sigma = 0.5 * fit.slope;
  g.t0 = t[first];
  g.t1 = t[n - 1];
  g.goodness = 1.0 - fit.rms;
  g.reliable = g.goodness >= min_goodness && (n - first) >= w;
  return g;
}

GrowthRateEstimate estimate_growth_rate(const std::vector<double>& t, const std::vector<double>& E, int mode,
                                        double min_goodness, double drift) {
  GrowthRateEstimate g = try_growth_rate(t, E, mode, min_goodness, drift);
  if (!g.reliable) throw NoConvergence("no exponential regime found in the energy series");
  return g;
}

}  // namespace tcdyn
