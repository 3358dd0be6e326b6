#pragma once

#include <vector>

#include "tcdyn/field.hpp"
#include "tcdyn/quadrature.hpp"

namespace tcdyn {

/// One ghost value outside a fluid wall, linearly extrapolated through the
/// wall value: ghost = (1 + rho) * wall - rho * mirror, so that interpolating
/// between ghost and mirror reproduces the wall value at the wall.
struct GhostEntry {
  std::size_t ghost;
  std::size_t mirror;
  double rho;
  double wall;  ///< wall value of the azimuthal velocity for mode 0, else 0
};

/// Face locations of velocity unknowns strictly inside the fluid annulus.
std::vector<std::size_t> fluid_unknowns(const MeridianGrid& g);

/// Ghost rules around the fluid for mode 0 wall motion `walls`. With
/// `inner_ghosts` false the layer inside r=1 is left to the caller.
std::vector<GhostEntry> fluid_ghosts(const MeridianGrid& g, const WallMotion& walls, bool inner_ghosts = true);

/// Fills the ghost layer of every mode (wall values only enter mode 0) and
/// zeroes wall-normal faces.
void apply_ghosts(FourierVectorField& u, const std::vector<GhostEntry>& ghosts);

/// Copies values located in the closed rectangle of `region` from `src` to a
/// field on `dst`; both grids must share the uniform conductor spacing.
FourierVectorField transfer(const FourierVectorField& src, GridPtr dst, Domain region);

/// Prescribed velocity on the magnetic grid: the fluid part of `u` with
/// its wall ghosts, plus rigid rotation at rate `core_omega` in the solid core.
FourierVectorField velocity_on_conductor(const FourierVectorField& u, GridPtr mag, const WallMotion& walls,
                                         double core_omega);

}  // namespace tcdyn
