#pragma once

#include <optional>

#include "tcdyn/hydro.hpp"
#include "tcdyn/induction.hpp"

namespace tcdyn {

struct MHDState {
  HydroState flow;     ///< on the fluid grid
  MagneticState mag;   ///< on the magnetic grid
};

/// Coupled Navier-Stokes and induction solver with M azimuthal modes. Both
/// nonlinear terms (u x omega, u x H, J x H) are formed by dealiased
/// collocation and extrapolated in time; diffusion is implicit.
class MHDSolver {
 public:
  /// `core_omega` is the rigid rotation rate of the solid core.
  MHDSolver(const SimParams& p, const WallMotion& walls, double core_omega);

  const NavierStokesSolver& hydro() const { return ns_; }
  const InductionSolver& induction() const { return ind_; }
  double dt() const { return dt_; }

  /// All fields zero on the solver's grids.
  MHDState zero_state() const { return {ns_.rest_state(), ind_.zero_state()}; }

  /// Axisymmetric `base` flow (mode 0 is copied) with a magnetic field
  /// whose modes are copied from `seed` (same magnetic grid).
  MHDState initial(const HydroState& base, const MagneticState& seed) const;

  void step(MHDState& s) const;

  /// J x H on the faces of the magnetic grid.
  FourierVectorField lorentz_force(const FourierVectorField& H) const;

  double kinetic_energy(const MHDState& s) const;
  double magnetic_energy(const MHDState& s) const;

 private:
  SimParams p_;
  WallMotion walls_;
  double core_omega_;
  double dt_;
  GridPtr fluid_;
  GridPtr mag_;
  NavierStokesSolver ns_;
  InductionSolver ind_;
};

/// Energies of the parity classes: even/odd velocity modes and even/odd
/// magnetic modes (by azimuthal wavenumber).
struct ParityReport {
  double u_even = 0.0, u_odd = 0.0;
  double H_even = 0.0, H_odd = 0.0;
};
ParityReport parity_report(const MHDState& s);

/// Adds a random solenoidal perturbation of conductor energy
/// `fraction * E_mag` to every active magnetic mode, equatorially
/// antisymmetric when `antisymmetric` is set.
void inject_noise(const InductionSolver& solver, MagneticState& s, double fraction, unsigned seed,
                  bool antisymmetric = true);

}  // namespace tcdyn
