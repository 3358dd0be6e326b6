#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tcdyn/flows.hpp"

using namespace tcdyn;

namespace {

const SteadyResult& viscous_base() {
  static const SteadyResult r = [] {
    HydroConfig c;
    c.Re = 120.0;
    c.walls = {1.0, 1.0};
    c.dt = 0.025;
    return run_to_steady(1.0 / 20, c);
  }();
  return r;
}

}  // namespace

TEST_CASE("alpha of epsilon") {
  CHECK(alpha_of_epsilon(1.0, 0.235) == 1.0);
  CHECK(alpha_of_epsilon(3.0, 0.235) == doctest::Approx(1.19).epsilon(0.005));
  // alpha^2 (1 + L0^2) = 1 + eps^2 L0^2
  for (double e : {0.5, 2.0, 7.0, 16.0}) {
    const double a = alpha_of_epsilon(e, 0.3);
    CHECK(a * a * (1 + 0.09) == doctest::Approx(1 + e * e * 0.09).epsilon(1e-14));
  }
  CHECK(lambda_of_epsilon(8.0, 0.25) == 2.0);
  CHECK_THROWS(alpha_of_epsilon(2.0, 0.0));
}

TEST_CASE("modified flow keeps the rms and scales the ratio") {
  const FlowSpec V0 = make_viscous_flow(viscous_base());
  CHECK(V0.kind == FlowKind::Viscous);
  CHECK(V0.core_omega == 1.0);
  for (double e : {1.0, 3.0, 6.5, 8.0, 16.0}) {
    const FlowSpec f = make_modified_flow(V0, e);
    const double a = alpha_of_epsilon(e, V0.stats.Lambda);
    CHECK(std::abs(f.stats.V_rms - V0.stats.V_rms) <= 1e-12 * V0.stats.V_rms);
    CHECK(f.stats.Lambda == doctest::Approx(e * V0.stats.Lambda).epsilon(1e-12));
    CHECK(f.walls.omega_inner == doctest::Approx(1.0 / a));
    CHECK(f.walls.omega_lids == doctest::Approx(1.0 / a));
    CHECK(f.core_omega == doctest::Approx(1.0 / a));
  }
  // eps = 1 reproduces V0
  const FlowSpec same = make_modified_flow(V0, 1.0);
  CHECK((same.u.mode(0) - V0.u.mode(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("modified flow rejects non-positive epsilon") {
  const FlowSpec V0 = make_viscous_flow(viscous_base());
  CHECK_THROWS_AS(make_modified_flow(V0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_modified_flow(V0, -2.0), std::invalid_argument);
}

TEST_CASE("fixed core variant") {
  const FlowSpec V0 = make_viscous_flow(viscous_base());
  const FlowSpec f = with_fixed_core(V0);
  CHECK(f.core_omega == 0.0);
  CHECK(f.walls.omega_inner == 1.0);
  CHECK(std::string(to_string(FlowKind::Forced)) == "forced");
}
