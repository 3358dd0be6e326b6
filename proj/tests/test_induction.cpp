#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tcdyn/error.hpp"
#include "tcdyn/extension.hpp"
#include "tcdyn/induction.hpp"
#include "tcdyn/symmetry.hpp"

using namespace tcdyn;

namespace {

// first zero of J1 by bisection on std::cyl_bessel_j
double j11() {
  double a = 3.0, b = 4.5;
  for (int i = 0; i < 200; ++i) {
    const double c = 0.5 * (a + b);
    (std::cyl_bessel_j(1.0, a) * std::cyl_bessel_j(1.0, c) <= 0.0 ? b : a) = c;
  }
  return 0.5 * (a + b);
}

// rigid rotation of the whole conductor at rate om
FlowSpec rigid(double dx, double om) {
  FlowSpec f;
  auto g = MeridianGrid::fluid_box(dx);
  f.u = FourierVectorField(g, 1, 1, Domain::Fluid);
  for (int i = 0; i < g->nr(); ++i)
    for (int j = 0; j < g->nz(); ++j) f.u.at(0, Family::T, i, j) = om * g->rc()[i];
  f.walls = {om, om};
  f.core_omega = om;
  return f;
}

SimParams params(double dx, double Rm) {
  SimParams p;
  p.dx = dx;
  p.Rm = Rm;
  return p;
}

}  // namespace

TEST_CASE("conducting fraction of edge dual faces") {
  auto g = MeridianGrid::make(0.1, 4.0, 2.0);
  const FourierVectorField u(g, 1);
  InductionConfig c;
  const InductionSolver s(g, c, u);
  const auto& f = s.edge_fraction();
  auto at = [&](Family fam, int i, int j) { return f(static_cast<Eigen::Index>(g->index(fam, i, j))); };
  const int iw = g->i_wall(), jt = g->j_top(), jb = g->j_bottom();
  CHECK(at(Family::Et, 5, jb + 3) == doctest::Approx(1.0));
  CHECK(at(Family::Et, iw, jb + 3) == doctest::Approx(0.5));
  CHECK(at(Family::Et, 5, jt) == doctest::Approx(0.5));
  CHECK(at(Family::Et, iw, jt) == doctest::Approx(0.25));
  CHECK(at(Family::Et, iw, jb) == doctest::Approx(0.25));
  CHECK(at(Family::Et, 0, jb + 3) == doctest::Approx(1.0));
  CHECK(at(Family::Et, iw + 1, jb + 3) == 0.0);
  CHECK(at(Family::Er, 3, jt) == doctest::Approx(0.5));
  CHECK(at(Family::Er, iw, jt - 1) == 0.0);
  // r-weighted: the conducting part of [1.95, 2.05] carries more than half
  CHECK(at(Family::Ez, iw, jb + 3) == doctest::Approx((4.0 - 1.95 * 1.95) / (2.05 * 2.05 - 1.95 * 1.95)));
  CHECK(at(Family::Ez, iw, jt) == 0.0);
}

TEST_CASE("seed field is solenoidal with a potential exterior") {
  SimParams p = params(1.0 / 20, 100.0);
  auto g = magnetic_grid(p);
  InductionConfig c;
  c.modes = 3;
  const InductionSolver s(g, c, FourierVectorField(g, 1));
  for (int k = 0; k < 3; ++k) {
    MagneticState st = s.seed(k, 11u + static_cast<unsigned>(k));
    CHECK(energy(st.H, Domain::Conductor) == doctest::Approx(1.0));
    CHECK(s.relative_divergence(st) < 1e-12);
    // recomputing the exterior reproduces it
    MagneticState again = st;
    s.complete(again);
    CHECK((again.H.mode(k) - st.H.mode(k)).cwiseAbs().maxCoeff() < 1e-12 * st.H.mode(k).cwiseAbs().maxCoeff());
  }
  CHECK_THROWS_AS(s.seed(3, 1), std::invalid_argument);
}

TEST_CASE("toroidal free decay matches the Bessel mode") {
  // slowest toroidal m=0 mode of a conducting cylinder (radius 2, height 2)
  // whose field vanishes on the surface: J1(j11 r/2) cos(pi z/2)
  const double Rm = 100.0;
  const double exact = -(std::pow(j11() / 2.0, 2) + std::pow(std::numbers::pi / 2.0, 2)) / Rm;
  std::vector<double> err;
  for (int n : {10, 20, 40}) {
    SimParams p = params(1.0 / n, Rm);
    auto g = magnetic_grid(p);
    InductionConfig c;
    c.Rm = Rm;
    c.dt = 0.05;
    const InductionSolver s(g, c, FourierVectorField(g, 1));
    MagneticState st = s.zero_state();
    for (int i = 0; i < g->i_wall(); ++i)
      for (int j = g->j_bottom(); j < g->j_top(); ++j) st.H.at(0, Family::T, i, j) = g->rc()[i] * (2.0 - g->rc()[i]);
    st.H_prev = st.H;
    std::vector<double> t, lnE;
    for (int n2 = 0; n2 < 800; ++n2) {
      s.step(st);
      t.push_back(st.t);
      lnE.push_back(std::log(energy(st.H, Domain::Conductor)));
    }
    // exterior stays field-free for a toroidal axisymmetric field
    CHECK(st.phi.mode(0).cwiseAbs().maxCoeff() < 1e-12);
    const double sigma = 0.5 * (lnE.back() - lnE[lnE.size() - 101]) / (t.back() - t[t.size() - 101]);
    err.push_back(std::abs(sigma - exact));
  }
  MESSAGE("decay-rate errors " << err[0] << ", " << err[1] << ", " << err[2] << " (exact " << exact << ")");
  CHECK(err[2] < 0.01 * std::abs(exact));
  CHECK(std::log2(err[1] / err[2]) > 1.7);
}

TEST_CASE("rigid rotation drifts the free-decay mode without changing its decay") {
  const double dx = 1.0 / 20, om = 0.1;
  KinematicOptions o;
  o.m = 1;
  o.dt = 0.05;
  const KinematicResult still = run_kinematic(rigid(dx, 0.0), params(dx, 100.0), o);
  const KinematicResult turning = run_kinematic(rigid(dx, om), params(dx, 100.0), o);
  REQUIRE(still.fit.reliable);
  REQUIRE(turning.fit.reliable);
  CHECK(turning.fit.sigma == doctest::Approx(still.fit.sigma).epsilon(0.01));
  CHECK(turning.period == doctest::Approx(2.0 * std::numbers::pi / om).epsilon(0.03));
  CHECK(still.period > 100.0 * turning.period);
}

TEST_CASE("free decay rate scales with the diffusivity") {
  const double dx = 1.0 / 20;
  KinematicOptions o;
  o.m = 1;
  const double s100 = run_kinematic(rigid(dx, 0.0), params(dx, 100.0), o).fit.sigma;
  const double s200 = run_kinematic(rigid(dx, 0.0), params(dx, 200.0), o).fit.sigma;
  CHECK(s100 < 0.0);
  CHECK(s200 / s100 == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("explicit and implicit advection agree") {
  const double dx = 1.0 / 20;
  SimParams p = params(dx, 100.0);
  auto g = magnetic_grid(p);
  const FlowSpec f = rigid(dx, 0.5);
  const FourierVectorField u = velocity_on_conductor(f.u, g, f.walls, f.core_omega);
  InductionConfig ci;
  ci.Rm = 100.0;
  ci.dt = 0.01;
  ci.modes = 2;
  InductionConfig ce = ci;
  ce.implicit_advection = false;
  const InductionSolver si(g, ci, u), se(g, ce, u);
  MagneticState a = si.seed(1, 3), b = a;
  for (int n = 0; n < 300; ++n) {
    si.step(a);
    se.step(b);
  }
  const double d = energy(a.H - b.H, Domain::Conductor), e = energy(a.H, Domain::Conductor);
  MESSAGE("relative difference " << std::sqrt(d / e));
  CHECK(std::sqrt(d / e) < 1e-3);
  CHECK(si.relative_divergence(a) < 1e-11);
  CHECK(se.relative_divergence(b) < 1e-11);
}

TEST_CASE("induction step commutes with the equatorial reflection") {
  const double dx = 1.0 / 16;
  SimParams p = params(dx, 150.0);
  auto g = magnetic_grid(p);
  FlowSpec f = rigid(dx, 0.3);
  // add a symmetric meridional roll: u_r even in z, u_z odd
  for (int i = 0; i < f.u.grid().dim_r(Family::R); ++i)
    for (int j = 0; j < f.u.grid().nz(); ++j) {
      const double r = f.u.grid().rf()[i], z = f.u.grid().zc()[j];
      f.u.at(0, Family::R, i, j) = (r - 1) * (2 - r) * std::cos(3 * z);
    }
  const FourierVectorField u = velocity_on_conductor(f.u, g, f.walls, f.core_omega);
  InductionConfig c;
  c.Rm = 150.0;
  c.dt = 0.05;
  c.modes = 2;
  const InductionSolver s(g, c, u);
  MagneticState a = s.seed(1, 5);
  MagneticState b = a;
  b.H = apply_SZ2(a.H);
  b.H_prev = b.H;
  for (int n = 0; n < 5; ++n) {
    s.step(a);
    s.step(b);
  }
  const FourierVectorField d = apply_SZ2(a.H) - b.H;
  CHECK(std::sqrt(energy(d, Domain::Box) / energy(a.H, Domain::Box)) < 1e-12);
}

TEST_CASE("drift period from a complex probe") {
  std::vector<double> t;
  std::vector<cplx> c;
  for (int i = 0; i < 500; ++i) {
    t.push_back(0.2 * i);
    c.push_back(std::exp(cplx(0.01, -0.3) * t.back()) * cplx(0.3, 0.2));
  }
  CHECK(eigenmode_period(t, c, 0.0, 100.0) == doctest::Approx(2.0 * std::numbers::pi / 0.3).epsilon(1e-12));
  std::vector<cplx> still(t.size(), cplx(1.0, 1.0));
  CHECK(std::isinf(eigenmode_period(t, still, 0.0, 100.0)));
}

TEST_CASE("threshold search") {
  SUBCASE("linear growth rate is found exactly") {
    const auto r = find_threshold([](double rm) { return (rm - 155.0) / 1000.0; }, 100.0, 250.0);
    CHECK(r.Rm_c == doctest::Approx(155.0).epsilon(1e-12));
  }
  SUBCASE("curved growth rate to the tolerance") {
    int calls = 0;
    const auto r = find_threshold(
        [&](double rm) {
          ++calls;
          return std::tanh((rm - 180.0) / 40.0) + 0.3 * std::pow((rm - 180.0) / 100.0, 2);
        },
        100.0, 300.0);
    CHECK(std::abs(r.Rm_c - 180.0) < 0.02 * 180.0);
    CHECK(calls <= 12);
    CHECK(r.evaluations.size() == static_cast<std::size_t>(calls));
  }
  SUBCASE("no sign change") {
    CHECK_THROWS_AS(find_threshold([](double) { return 1.0; }, 1.0, 2.0), NoConvergence);
  }
}
