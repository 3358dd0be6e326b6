#include "tcdyn/mhd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "tcdyn/extension.hpp"
#include "tcdyn/symmetry.hpp"

namespace tcdyn {
namespace {

double capped_dt(const SimParams& p, const WallMotion& w) {
  const double vref = std::max({2.0 * std::abs(w.omega_lids), std::abs(w.omega_inner), 0.5});
  return std::min(p.dt, 0.4 * p.dx / (1.2 * vref));
}

HydroConfig hydro_config(const SimParams& p, const WallMotion& w, double dt) {
  HydroConfig c;
  c.Re = p.Re;
  c.walls = w;
  c.A = p.A;
  c.dt = dt;
  c.modes = p.M;
  return c;
}

InductionConfig induction_config(const SimParams& p, double dt) {
  InductionConfig c;
  c.Rm = p.Rm;
  c.dt = dt;
  c.modes = p.M;
  c.implicit_advection = false;
  return c;
}

}  // namespace

MHDSolver::MHDSolver(const SimParams& p, const WallMotion& walls, double core_omega)
    : p_(p),
      walls_(walls),
      core_omega_(core_omega),
      dt_(capped_dt(p, walls)),
      fluid_(MeridianGrid::fluid_box(p.dx)),
      mag_(magnetic_grid(p)),
      ns_(fluid_, hydro_config(p, walls, dt_)),
      ind_(mag_, induction_config(p, dt_), FourierVectorField(mag_, 1)) {}

MHDState MHDSolver::initial(const HydroState& base, const MagneticState& seed) const {
  MHDState s;
  s.flow = ns_.rest_state();
  s.flow.u.mode(0) = base.u.mode(0);
  s.flow.p.mode(0) = base.p.mode(0);
  s.flow.u_prev = s.flow.u;
  s.mag = ind_.zero_state();
  if (seed.H.grid().n_faces() != mag_->n_faces()) throw std::invalid_argument("MHDSolver: seed on a different grid");
  for (int k = 0; k < std::min(p_.M, seed.H.num_modes()); ++k) s.mag.H.mode(k) = seed.H.mode(k);
  ind_.complete(s.mag);
  s.mag.H_prev = s.mag.H;
  return s;
}

FourierVectorField MHDSolver::lorentz_force(const FourierVectorField& H) const {
  return ind_.collocator().cross_to_face(ind_.current(H), H);
}

void MHDSolver::step(MHDState& s) const {
  // both explicit terms from the state at t^n
  const FourierVectorField u_mag = velocity_on_conductor(s.flow.u, mag_, walls_, core_omega_);
  const FourierVectorField f = transfer(lorentz_force(s.mag.H), fluid_, Domain::Fluid);
  ns_.step(s.flow, &f);
  ind_.step(s.mag, &u_mag);
}

double MHDSolver::kinetic_energy(const MHDState& s) const { return energy(s.flow.u, Domain::Fluid); }
double MHDSolver::magnetic_energy(const MHDState& s) const { return energy(s.mag.H, Domain::Conductor); }

ParityReport parity_report(const MHDState& s) {
  ParityReport r;
  const auto eu = modal_energies(s.flow.u, Domain::Fluid);
  const auto eh = modal_energies(s.mag.H, Domain::Conductor);
  for (std::size_t k = 0; k < eu.size(); ++k) (s.flow.u.wavenumber(static_cast<int>(k)) % 2 ? r.u_odd : r.u_even) += eu[k];
  for (std::size_t k = 0; k < eh.size(); ++k) (s.mag.H.wavenumber(static_cast<int>(k)) % 2 ? r.H_odd : r.H_even) += eh[k];
  return r;
}

void inject_noise(const InductionSolver& solver, MagneticState& s, double fraction, unsigned seed, bool antisymmetric) {
  const double e = energy(s.H, Domain::Conductor);
  const int modes = s.H.num_modes();
  for (int k = 0; k < modes; ++k) {
    MagneticState n = solver.seed(k, seed + static_cast<unsigned>(k), 1.0);
    if (antisymmetric) {
      n.H = sym_antisym_split(n.H).second;
      n.H_prev = n.H;
    }
    const double en = energy(n.H, Domain::Conductor);
    if (en <= 0.0) continue;
    const double c = std::sqrt(fraction * e / (en * modes));
    s.H.mode(k) += c * n.H.mode(k);
    s.H_prev.mode(k) += c * n.H.mode(k);
  }
  solver.complete(s);
}

}  // namespace tcdyn
