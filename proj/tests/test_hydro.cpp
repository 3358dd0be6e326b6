#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "tcdyn/error.hpp"
#include "tcdyn/hydro.hpp"
#include "tcdyn/symmetry.hpp"
#include "test_util.hpp"

using namespace tcdyn;

namespace {

HydroConfig viscous(double Re, double dt = 0.01) {
  HydroConfig c;
  c.Re = Re;
  c.walls = {1.0, 1.0};
  c.dt = dt;
  return c;
}

double max_abs(const CVec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("body force pointwise") {
  const auto in = body_force_eval(1.5, 0.9, 2.5);
  CHECK(in[0] == doctest::Approx(2.5 / 1.5));
  CHECK(in[1] == 0.0);
  CHECK(in[2] == 0.0);
  CHECK(body_force_eval(1.5, -0.85, 2.0)[0] == doctest::Approx(2.0 / 1.5));
  CHECK(body_force_eval(1.5, 0.5, 2.5)[0] == 0.0);
  CHECK(body_force_eval(1.1, 0.9, 2.5)[0] == 0.0);
  CHECK(body_force_eval(1.9, 0.9, 2.5)[0] == 0.0);
}

TEST_CASE("body force field integral converges") {
  // int (A/r) r dr dz dtheta over both blade rings = 2 pi A * 0.6 * 0.4
  const double A = 2.5, exact = 2.0 * std::numbers::pi * A * 0.6 * 0.4;
  double prev = 1e300;
  for (int n : {20, 40, 80}) {
    auto g = MeridianGrid::fluid_box(1.0 / n);
    const FourierVectorField f = body_force_field(g, A);
    FourierVectorField one(g, 1, 1, Domain::Fluid);
    testutil::fill_face(one, 0, [](int c, double, double) { return c == 0 ? 1.0 : 0.0; });
    const double err = std::abs(inner_product(f, one, Domain::Fluid) - exact);
    CHECK(err < prev);
    prev = err;
    // only the radial component is forced
    for (int c : {1, 2}) CHECK(component_energy(f, Domain::Fluid, c) == 0.0);
  }
  CHECK(prev < 1e-3 * exact);
}

TEST_CASE("rest stays at rest") {
  HydroConfig c = viscous(120.0);
  c.walls = {0.0, 0.0};
  c.modes = 3;
  NavierStokesSolver sol(MeridianGrid::fluid_box(1.0 / 10), c);
  HydroState s = sol.rest_state();
  for (int n = 0; n < 20; ++n) sol.step(s);
  for (int k = 0; k < 3; ++k) CHECK(max_abs(s.u.mode(k)) == 0.0);
}

TEST_CASE("projection removes divergence") {
  HydroConfig c = viscous(120.0);
  c.modes = 3;
  auto g = MeridianGrid::fluid_box(1.0 / 16);
  NavierStokesSolver sol(g, c);
  HydroState s = sol.rest_state();
  FourierVectorField r = testutil::random_field(g, 3, 7, Domain::Fluid);
  for (int k = 0; k < 3; ++k) {
    sol.set_mode(s, k, sol.unknowns(r, k));
    sol.project(s.u, k);
  }
  CHECK(sol.max_divergence(s) < 1e-10);
}

TEST_CASE("time stepping keeps the velocity solenoidal") {
  HydroConfig c = viscous(120.0, 0.005);
  c.A = 2.5;
  c.walls = {0.55, 0.55};
  NavierStokesSolver sol(MeridianGrid::fluid_box(1.0 / 16), c);
  HydroState s = sol.rest_state();
  for (int n = 0; n < 100; ++n) sol.step(s);
  CHECK(sol.max_divergence(s) < 1e-9);
}

TEST_CASE("spin-down energy decays") {
  auto g = MeridianGrid::fluid_box(1.0 / 16);
  const SteadyResult spun = run_to_steady(1.0 / 16, viscous(120.0, 0.01));
  HydroConfig c = viscous(120.0, 0.01);
  c.walls = {0.0, 0.0};
  NavierStokesSolver sol(g, c);
  HydroState s = sol.rest_state();
  // interior of the spun-up flow with the walls stopped
  sol.set_mode(s, 0, sol.unknowns(spun.state.u, 0));
  double e = energy(s.u, Domain::Fluid);
  const double e0 = e;
  for (int block = 0; block < 20; ++block) {
    for (int n = 0; n < 10; ++n) sol.step(s);
    const double en = energy(s.u, Domain::Fluid);
    CHECK(en < e);
    e = en;
  }
  CHECK(e < 0.8 * e0);
}

TEST_CASE("axisymmetric driving never populates other modes") {
  HydroConfig c = viscous(120.0, 0.005);
  c.modes = 3;
  c.A = 2.5;
  NavierStokesSolver sol(MeridianGrid::fluid_box(1.0 / 16), c);
  HydroState s = sol.rest_state();
  for (int n = 0; n < 60; ++n) sol.step(s);
  const auto e = modal_energies(s.u, Domain::Fluid);
  CHECK(e[0] > 0.0);
  CHECK(e[1] <= 1e-28 * e[0]);
  CHECK(e[2] <= 1e-28 * e[0]);
}

TEST_CASE("steady state: Newton, symmetry and time stepping agree") {
  const double dx = 1.0 / 20;
  SUBCASE("viscous driving") {
    const SteadyResult r = run_to_steady(dx, viscous(120.0, 0.025));
    CHECK(r.residuals.back() < 1e-11);
    CHECK(r.relative_change < 1e-8);
    // equatorial symmetry of the steady flow
    const FourierVectorField m = apply_SZ2(r.state.u);
    CHECK(std::sqrt(energy(m - r.state.u, Domain::Fluid) / energy(r.state.u, Domain::Fluid)) < 1e-10);
  }
  SUBCASE("time stepping from rest reaches the Newton state") {
    HydroConfig c = viscous(10.0, 0.01);
    const SteadyResult newton = run_to_steady(dx, c);
    SteadyOptions o;
    o.use_newton = false;
    o.steady_tol = 1e-10;
    o.max_time = 200.0;
    const SteadyResult stepped = run_to_steady(dx, c, o);
    const double d = energy(newton.state.u - stepped.state.u, Domain::Fluid);
    CHECK(std::sqrt(d / energy(newton.state.u, Domain::Fluid)) < 1e-7);
    // window changes decrease
    CHECK(stepped.residuals.back() < stepped.residuals.front());
  }
}

// Smooth divergence-free axisymmetric flow vanishing on all walls:
// u_theta = sin(pi (r-1)) cos(pi z / 2), poloidal part from the Stokes
// streamfunction psi = (r-1)^2 (2-r)^2 (1-z^2)^2.
using Vec3 = std::array<double, 3>;
using VecFn = std::function<Vec3(double, double)>;

Vec3 exact_u(double r, double z) {
  const double pi = std::numbers::pi;
  const double a = (r - 1) * (2 - r), b = 1 - z * z;
  const double da = 3 - 2 * r;  // d/dr of (r-1)(2-r)
  const double psi_r = 2 * a * da * b * b, psi_z = a * a * 2 * b * (-2 * z);
  return {-psi_z / r, std::sin(pi * (r - 1)) * std::cos(pi * z / 2), psi_r / r};
}

// axisymmetric cylindrical curl by central differences
VecFn curl_of(VecFn f) {
  return [f](double r, double z) {
    const double h = 1e-4;
    const Vec3 zp = f(r, z + h), zm = f(r, z - h), rp = f(r + h, z), rm = f(r - h, z);
    return Vec3{-(zp[1] - zm[1]) / (2 * h), (zp[0] - zm[0]) / (2 * h) - (rp[2] - rm[2]) / (2 * h),
                ((r + h) * rp[1] - (r - h) * rm[1]) / (2 * h * r)};
  };
}

// steady forcing f = -u x omega + nu curl omega, with Bernoulli head zero
FourierVectorField manufactured_force(GridPtr g, double Re) {
  const VecFn w = curl_of(exact_u);
  const VecFn cw = curl_of(w);
  FourierVectorField f(g, 1, 1, Domain::Fluid);
  testutil::fill_face(f, 0, [&](int c, double r, double z) {
    if (r < 1.0 || r > 2.0 || z < -1.0 || z > 1.0) return 0.0;
    const Vec3 u = exact_u(r, z), o = w(r, z), co = cw(r, z);
    const Vec3 uxo = {u[1] * o[2] - u[2] * o[1], u[2] * o[0] - u[0] * o[2], u[0] * o[1] - u[1] * o[0]};
    return -uxo[static_cast<std::size_t>(c)] + co[static_cast<std::size_t>(c)] / Re;
  });
  return f;
}

TEST_CASE("manufactured steady flow converges at second order in dx") {
  const double Re = 10.0;
  std::vector<double> err;
  for (int n : {10, 20, 40}) {
    auto g = MeridianGrid::fluid_box(1.0 / n);
    HydroConfig c = viscous(Re, 0.02);
    c.walls = {0.0, 0.0};
    NavierStokesSolver sol(g, c);
    const FourierVectorField f = manufactured_force(g, Re);
    HydroState s = sol.rest_state();
    for (int i = 0; i < 2500; ++i) sol.step(s, &f);
    FourierVectorField ue(g, 1, 1, Domain::Fluid);
    testutil::fill_face(ue, 0, [](int c, double r, double z) { return exact_u(r, z)[static_cast<std::size_t>(c)]; });
    const CVec d = sol.unknowns(s.u, 0) - sol.unknowns(ue, 0);
    err.push_back(d.cwiseAbs().maxCoeff());
  }
  const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
  MESSAGE("max errors " << err[0] << ", " << err[1] << ", " << err[2] << "; orders " << o1 << ", " << o2);
  CHECK(o2 > 1.8);
}

TEST_CASE("time stepping is second order in dt") {
  // forcing switched on smoothly from rest: f(t) = sin(t) f_s
  const double Re = 10.0;
  auto g = MeridianGrid::fluid_box(1.0 / 10);
  const FourierVectorField fs = manufactured_force(g, Re);
  auto run = [&](double dt) {
    HydroConfig c = viscous(Re, dt);
    c.walls = {0.0, 0.0};
    NavierStokesSolver sol(g, c);
    HydroState s = sol.rest_state();
    const long n = std::lround(1.0 / dt);
    for (long i = 0; i < n; ++i) {
      const FourierVectorField f = std::sin(s.t) * fs;
      sol.step(s, &f);
    }
    return s.u;
  };
  const FourierVectorField ref = run(0.0005);
  std::vector<double> err;
  for (double dt : {0.04, 0.02, 0.01}) err.push_back(std::sqrt(energy(run(dt) - ref, Domain::Fluid)));
  const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
  MESSAGE("temporal orders " << o1 << ", " << o2);
  CHECK(o2 > 1.7);
}

TEST_CASE("viscous flow is stable to low azimuthal modes") {
  const double dx = 1.0 / 16;
  HydroConfig c = viscous(120.0, 0.01);
  const SteadyResult base = run_to_steady(dx, c);
  const auto res = stability_probe(base.state, c, {1, 2}, 20.0);
  REQUIRE(res.size() == 2);
  for (const auto& p : res) {
    MESSAGE("m=" << p.m << " sigma=" << p.sigma);
    CHECK(p.sigma < 0.0);
  }
}

TEST_CASE("invalid hydro configuration is rejected") {
  HydroConfig c = viscous(-1.0);
  CHECK_THROWS_AS(NavierStokesSolver(MeridianGrid::fluid_box(0.1), c), ConfigError);
  c = viscous(120.0, 0.0);
  CHECK_THROWS_AS(NavierStokesSolver(MeridianGrid::fluid_box(0.1), c), ConfigError);
}
