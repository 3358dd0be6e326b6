#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tcdyn/growth.hpp"
#include "tcdyn/mhd.hpp"
#include "tcdyn/symmetry.hpp"

using namespace tcdyn;

namespace {

constexpr double kDx = 1.0 / 16;

SimParams forced_params(int M) {
  SimParams p;
  p.dx = kDx;
  p.Rm = 200.0;
  p.M = M;
  p.A = 2.5;
  p.Omega_i = 0.55;
  return p;
}

const SteadyResult& forced_base() {
  static const SteadyResult r = [] {
    HydroConfig c;
    c.Re = 120.0;
    c.walls = {0.55, 0.55};
    c.A = 2.5;
    c.dt = 0.025;
    return run_to_steady(kDx, c);
  }();
  return r;
}

}  // namespace

TEST_CASE("Lorentz force of a uniform azimuthal current") {
  // H = -j0 r e_z gives J = j0 e_theta and J x H = -j0^2 r e_r
  const SimParams p = forced_params(2);
  const MHDSolver sol(p, {0.55, 0.55}, 0.55);
  const double j0 = 0.6;
  const MeridianGrid& g = *sol.induction().grid();
  FourierVectorField H(sol.induction().grid(), 2);
  for (int i = 0; i < g.dim_r(Family::Z); ++i)
    for (int j = 0; j < g.dim_z(Family::Z); ++j) H.at(0, Family::Z, i, j) = -j0 * g.rc()[i];
  const FourierVectorField f = sol.lorentz_force(H);
  double worst = 0.0;
  for (int i = 2; i < g.i_wall() - 1; ++i)
    for (int j = g.j_bottom() + 1; j < g.j_top() - 1; ++j) {
      worst = std::max(worst, std::abs(f.at(0, Family::R, i, j) + j0 * j0 * g.rf()[i]));
      worst = std::max(worst, std::abs(f.at(0, Family::Z, i, j)));
      worst = std::max(worst, std::abs(f.at(0, Family::T, i, j)));
    }
  CHECK(worst < 1e-12);
  CHECK(f.mode(1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("time step respects the advective cap") {
  SimParams p = forced_params(2);
  p.dt = 1.0;
  const MHDSolver sol(p, {0.55, 0.55}, 0.55);
  CHECK(sol.dt() < 1.0);
  CHECK(sol.dt() <= 0.4 * p.dx / 1.2 + 1e-15);
  p.dt = 1e-3;
  CHECK(MHDSolver(p, {0.55, 0.55}, 0.55).dt() == 1e-3);
}

TEST_CASE("parity classes stay separate") {
  // axisymmetric flow and an m=1 field: velocity stays even, field odd
  const SimParams p = forced_params(4);
  const MHDSolver sol(p, {0.55, 0.55}, 0.55);
  const MagneticState seed = sol.induction().seed(1, 17, 1.0);
  MHDState s = sol.initial(forced_base().state, seed);
  for (int n = 0; n < 60; ++n) sol.step(s);
  const ParityReport r = parity_report(s);
  MESSAGE("u_even " << r.u_even << " u_odd " << r.u_odd << " H_even " << r.H_even << " H_odd " << r.H_odd);
  CHECK(r.u_odd <= 1e-20 * r.u_even);
  CHECK(r.H_even <= 1e-20 * r.H_odd);
  // the coupling is active: the Lorentz force drives the m=2 velocity
  CHECK(modal_energies(s.flow.u, Domain::Fluid)[2] > 0.0);
  CHECK(modal_energies(s.mag.H, Domain::Conductor)[3] > 0.0);
  CHECK(sol.induction().relative_divergence(s.mag) < 1e-10);
  CHECK(sol.hydro().max_divergence(s.flow) < 1e-9);
}

TEST_CASE("weak field grows at the kinematic rate") {
  const SimParams p = forced_params(3);
  const FlowSpec f = make_forced_flow(forced_base(), 2.5, 0.55);
  KinematicOptions o;
  o.m = 1;
  const KinematicResult k = run_kinematic(f, p, o);
  REQUIRE(k.fit.reliable);
  const MHDSolver sol(p, f.walls, f.core_omega);
  MagneticState seed = sol.induction().zero_state();
  seed.H.mode(1) = std::sqrt(1e-10) * k.state.H.mode(1);
  MHDState s = sol.initial(forced_base().state, seed);
  std::vector<double> t, E;
  const long n = std::lround(15.0 / sol.dt());
  for (long i = 0; i < n; ++i) {
    sol.step(s);
    t.push_back(s.mag.t);
    E.push_back(modal_energies(s.mag.H, Domain::Conductor)[1]);
  }
  const GrowthRateEstimate g = try_growth_rate(t, E, 1);
  MESSAGE("kinematic " << k.fit.sigma << " coupled " << g.sigma);
  CHECK(g.sigma == doctest::Approx(k.fit.sigma).epsilon(0.05));
}

TEST_CASE("antisymmetric noise is detected and survives the evolution") {
  const SimParams p = forced_params(2);
  const MHDSolver sol(p, {0.55, 0.55}, 0.55);
  MagneticState seed = sol.induction().seed(1, 4, 1.0);
  seed.H = sym_antisym_split(seed.H).first;
  MHDState clean = sol.initial(forced_base().state, seed);
  auto anti = [](const MHDState& s) { return energy(sym_antisym_split(s.mag.H).second, Domain::Conductor); };
  const double E = sol.magnetic_energy(clean);
  CHECK(anti(clean) <= 1e-24 * E);
  MHDState noisy = clean;
  inject_noise(sol.induction(), noisy.mag, 1e-3, 99);
  CHECK(anti(noisy) == doctest::Approx(1e-3 * E).epsilon(0.05));
  CHECK(sol.induction().relative_divergence(noisy.mag) < 1e-10);
  for (int n = 0; n < 40; ++n) {
    sol.step(clean);
    sol.step(noisy);
  }
  const double rc = anti(clean) / sol.magnetic_energy(clean), rn = anti(noisy) / sol.magnetic_energy(noisy);
  MESSAGE("antisymmetric fraction without noise " << rc << ", with noise " << rn);
  CHECK(rc <= 1e-24);
  CHECK(rn > 1e-8);
}
