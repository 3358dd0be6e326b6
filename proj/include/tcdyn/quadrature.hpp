#pragma once

#include <optional>
#include <vector>

#include "tcdyn/field.hpp"

namespace tcdyn {

/// Prescribed rotation of the container. The outer wall r=2 is at rest.
struct WallMotion {
  double omega_inner = 0.0;  ///< inner cylinder r=1
  double omega_lids = 0.0;   ///< end walls z=±1
};

/// Velocity statistics of a flow in the fluid annulus.
///
/// V_star, Vp_star and Vt_star follow the reference normalisation of the
/// tabulated flows: the meridian-plane integral of |u|^2 r dr dz divided by
/// the fluid volume 6*pi. This is the volume rms divided by sqrt(2*pi);
/// the plain volume rms is kept in V_rms.
struct FlowStats {
  double V_star = 0.0;
  double Vp_star = 0.0;
  double Vt_star = 0.0;
  double Lambda = 0.0;
  double V_max = 0.0;
  double V_rms = 0.0;
};

/// Quadrature weight of a staggered location: the exact integral of
/// r^pr z^pz over its dual cell clipped to `region`.
double quadrature_weight(const MeridianGrid& g, Family f, int i, int j, Domain region,
                         int pr = 1, int pz = 0);

/// Weight vector over a whole block (faces, edges or cells).
Eigen::VectorXd quadrature_weights(const MeridianGrid& g, Staggering s, Domain region,
                                   int pr = 1, int pz = 0);

/// Fourier weight of mode k in integrals over theta (2*pi for k=0, 4*pi else).
inline double theta_weight(int k) { return k == 0 ? 2.0 * 3.14159265358979323846 : 4.0 * 3.14159265358979323846; }

/// Volume of the fluid annulus, 6*pi.
double fluid_volume();

/// 1/2 int |f|^2 over `region`, summed over modes.
double energy(const FourierVectorField& f, Domain region);
/// Energy restricted to one component (0=r, 1=theta, 2=z).
double component_energy(const FourierVectorField& f, Domain region, int comp);
/// Per-mode energies, sum equals energy().
std::vector<double> modal_energies(const FourierVectorField& f, Domain region);
/// Real inner product int f . g over `region` (energy(f) = inner/2).
double inner_product(const FourierVectorField& f, const FourierVectorField& g, Domain region);

/// rms speed, poloidal/toroidal split and peak speed of a flow on the fluid
/// annulus. When `walls` is given the wall velocities (rim of the lids
/// included) enter V_max.
FlowStats flow_stats(const FourierVectorField& u, std::optional<WallMotion> walls = {});

}  // namespace tcdyn
