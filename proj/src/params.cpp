#include "tcdyn/params.hpp"

#include <cmath>

#include "tcdyn/error.hpp"

namespace tcdyn {
namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

}  // namespace

void SimParams::validate() const {
  require(std::isfinite(Re) && Re > 0.0, "Re", "must be positive");
  require(std::isfinite(Rm) && Rm > 0.0, "Rm", "must be positive");
  require(std::abs(eta - 0.5) < 1e-12, "eta", "only the radius ratio 0.5 is supported");
  require(std::abs(Gamma - 2.0) < 1e-12, "Gamma", "only the aspect ratio 2 is supported");
  require(std::isfinite(Omega_i), "Omega_i", "must be finite");
  require(std::isfinite(A), "A", "must be finite");
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon", "must be positive");
  require(M >= 1, "M", "must be at least 1");
  require(std::isfinite(dt) && dt > 0.0, "dt", "must be positive");
  require(std::isfinite(dx) && dx > 0.0, "dx", "must be positive");
  const double n = 1.0 / dx;
  require(std::abs(n - std::round(n)) < 1e-9 * n && std::round(n) >= 2, "dx", "must be 1/n for an integer n >= 2");
  require(Rv > 2.0, "Rv", "must exceed the outer radius 2");
  require(Zv > 1.0, "Zv", "must exceed the half height 1");
  require(vacuum_stretch >= 1.0 && vacuum_stretch <= 2.0, "vacuum_stretch", "must lie in [1, 2]");
}

}  // namespace tcdyn
